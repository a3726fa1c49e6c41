use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::graph::Graph;
use crate::rng::RngStream;

/// Exact degree histogram of a graph.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegreeSummary {
    /// `histogram[k]` nodes have degree `k`.
    pub histogram: Vec<u64>,
    pub mean: f64,
    /// `survival[k]` is the fraction of nodes with degree greater than `k`.
    pub survival: Vec<f64>,
}

impl DegreeSummary {
    pub fn num_nodes(&self) -> u64 {
        self.histogram.iter().sum()
    }

    pub fn max_degree(&self) -> usize {
        self.histogram.len().saturating_sub(1)
    }
}

pub fn degree_summary(g: &Graph) -> DegreeSummary {
    let degrees = g.degrees();
    let max = degrees.iter().copied().max().unwrap_or(0);
    let mut histogram = vec![0u64; max + 1];
    for &k in &degrees {
        histogram[k] += 1;
    }
    let n = degrees.len();
    let mean = if n == 0 {
        0.0
    } else {
        degrees.iter().sum::<usize>() as f64 / n as f64
    };
    let mut survival = Vec::with_capacity(histogram.len());
    let mut above = n as u64;
    for &c in &histogram {
        above -= c;
        survival.push(if n == 0 { 0.0 } else { above as f64 / n as f64 });
    }
    DegreeSummary {
        histogram,
        mean,
        survival,
    }
}

/// Hill estimate of a power-law tail `P[X > x] ≈ x^{−τ}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailFit {
    pub tau_hat: f64,
    /// Number of upper order statistics used.
    pub k_count: usize,
    /// The order statistic `X_(k+1)` the upper ones are compared against.
    pub threshold: f64,
}

pub const DEFAULT_TAIL_FRACTION: f64 = 0.05;
const MIN_TAIL_SAMPLES: usize = 100;
const MIN_ORDER_STATISTICS: usize = 10;

/// Hill estimator on the top `⌈fraction · n⌉` order statistics:
/// `τ̂ = k / Σ_{i ≤ k} ln(X_(i) / X_(k+1))` with `X_(1) ≥ X_(2) ≥ …`.
pub fn hill_tail(samples: &[f64], fraction: f64) -> Result<TailFit> {
    if samples.len() < MIN_TAIL_SAMPLES {
        return Err(invalid(
            "samples",
            format!("need at least {MIN_TAIL_SAMPLES}, got {}", samples.len()),
        ));
    }
    if !(fraction > 0.0 && fraction <= 0.2) {
        return Err(invalid(
            "fraction",
            format!("{fraction} is outside (0, 0.2]"),
        ));
    }
    if let Some(bad) = samples.iter().find(|&&x| !(x > 0.0 && x.is_finite())) {
        return Err(invalid(
            "samples",
            format!("{bad} is not a positive finite number"),
        ));
    }
    let n = samples.len();
    let k = ((fraction * n as f64).ceil() as usize).min(n - 1);
    if k < MIN_ORDER_STATISTICS {
        return Err(invalid(
            "fraction",
            format!("uses {k} order statistics, need {MIN_ORDER_STATISTICS}"),
        ));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let threshold = sorted[k];
    let spacing: f64 = sorted[..k].iter().map(|&x| (x / threshold).ln()).sum();
    if spacing <= 0.0 {
        return Err(Error::Degenerate(
            "all upper order statistics are equal".into(),
        ));
    }
    Ok(TailFit {
        tau_hat: k as f64 / spacing,
        k_count: k,
        threshold,
    })
}

/// Hill estimate of a graph's degree tail. Isolated nodes are dropped and
/// each degree gets uniform `[0, 1)` jitter so that ties do not produce zero
/// spacings.
pub fn degree_tail(g: &Graph, fraction: f64, rng: RngStream) -> Result<TailFit> {
    let mut r = rng.rng();
    let samples: Vec<f64> = g
        .degrees()
        .into_iter()
        .filter(|&k| k > 0)
        .map(|k| k as f64 + r.random::<f64>())
        .collect();
    hill_tail(&samples, fraction)
}
