use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::crossing::{crosses, CrossingEstimate};
use crate::error::{invalid, Result};
use crate::generators::{HomLrpParams, PairSampling};
use crate::lattice::LatticeBox;
use crate::model::ModelSpec;
use crate::rng::RngStream;
use crate::stats::{wilson_interval, Z95};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub side: usize,
    pub lambda: f64,
    /// `side^{α/2}`.
    pub threshold: f64,
    pub successes: u64,
    pub replicates: u64,
    pub frequency: f64,
    pub ci: (f64, f64),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub rows: Vec<ScalingRow>,
    /// Crossing probability at the smallest side and largest λ.
    pub precondition: CrossingEstimate,
    /// Set when the precondition crossing probability is below
    /// [`PRECONDITION_CROSSING`].
    pub warning: Option<String>,
}

/// Crossing probability expected at the smallest box before the
/// frequencies are meaningful.
pub const PRECONDITION_CROSSING: f64 = 0.9;

/// Frequency with which the largest component of the homogeneous model on
/// `[0, N−1]^d` has at least `N^{α/2}` sites, for every side `N` and every
/// λ. With `p = None` the nearest-neighbour probability follows
/// `1 − e^{−λ}`.
///
/// For each side and replicate one coupled sample is drawn at the largest λ
/// and realised at the others, so frequencies are non-decreasing in λ.
pub fn box_cluster_scaling(
    d: usize,
    alpha: f64,
    p: Option<f64>,
    lambdas: &[f64],
    sides: &[usize],
    replicates: usize,
    rng: RngStream,
) -> Result<ScalingReport> {
    let dim = d as f64;
    if !(alpha > dim && alpha < 2.0 * dim) {
        return Err(invalid(
            "alpha",
            format!("{alpha} is outside (d, 2d) = ({dim}, {})", 2.0 * dim),
        ));
    }
    if lambdas.is_empty() || sides.is_empty() {
        return Err(invalid("lambda", "need at least one λ and one side"));
    }
    if replicates == 0 {
        return Err(invalid("replicates", "must be at least 1"));
    }
    let params = |lambda: f64| match p {
        Some(p) => HomLrpParams::new(p, lambda, alpha),
        None => HomLrpParams::model_one(lambda, alpha),
    };
    let top = lambdas.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut order: Vec<usize> = (0..sides.len()).collect();
    order.sort_by_key(|&i| sides[i]);
    let smallest = order[0];
    let mut rows = Vec::new();
    let mut precondition = CrossingEstimate::from_counts(0, replicates as u64);
    for (si, &side) in sides.iter().enumerate() {
        let lattice = LatticeBox::free(d, side)?;
        let spec_at = |lambda: f64| -> Result<ModelSpec> {
            Ok(ModelSpec::HomLrp {
                lattice,
                params: params(lambda)?,
                sampling: PairSampling::Auto,
            })
        };
        let base = spec_at(top)?;
        let specs = lambdas
            .iter()
            .map(|&l| spec_at(l))
            .collect::<Result<Vec<_>>>()?;
        let threshold = (side as f64).powf(alpha / 2.0);
        let top_index = lambdas
            .iter()
            .position(|&l| l == top)
            .expect("top is an element");
        let stream = rng.replicate(si as u64);
        // per replicate: (largest ≥ threshold per λ, crossing at the top λ)
        let outcomes = (0..replicates as u64)
            .into_par_iter()
            .map(|i| -> Result<(Vec<bool>, bool)> {
                let sample = base.sample_coupled(stream.replicate(i))?;
                let mut big = Vec::with_capacity(specs.len());
                let mut crossed = false;
                for (j, s) in specs.iter().enumerate() {
                    let g = sample.realize(s)?;
                    big.push(g.components().largest_size() as f64 >= threshold);
                    if j == top_index {
                        crossed = crosses(&g, &lattice);
                    }
                }
                Ok((big, crossed))
            })
            .collect::<Result<Vec<_>>>()?;
        if si == smallest {
            precondition = CrossingEstimate::from_counts(
                outcomes.iter().filter(|o| o.1).count() as u64,
                replicates as u64,
            );
        }
        for (j, &lambda) in lambdas.iter().enumerate() {
            let successes = outcomes.iter().filter(|o| o.0[j]).count() as u64;
            rows.push(ScalingRow {
                side,
                lambda,
                threshold,
                successes,
                replicates: replicates as u64,
                frequency: successes as f64 / replicates as f64,
                ci: wilson_interval(successes, replicates as u64, Z95),
            });
        }
    }
    let warning = (precondition.probability < PRECONDITION_CROSSING).then(|| {
        format!(
            "crossing probability {:.3} at N = {} and λ = {top} is below {PRECONDITION_CROSSING}; \
             frequencies may not reflect the supercritical regime",
            precondition.probability, sides[smallest]
        )
    });
    Ok(ScalingReport {
        rows,
        precondition,
        warning,
    })
}
