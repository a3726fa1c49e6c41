use serde::{Deserialize, Serialize};

use crate::analysis::{crossing_curve, CrossingEstimate};
use crate::error::{invalid, Result};
use crate::generators::{HetLrpParams, PairSampling};
use crate::lattice::LatticeBox;
use crate::model::{FreeParam, ModelSpec};
use crate::rng::{derive_stream, RngStream};
use crate::stats::{binary_trend, Trend};
use crate::theory::{classify_regime, LambdaCRegime};

/// Crossing-probability trend over box sizes that identifies λ_c. Flat rows
/// (typically saturated at 0 or 1) carry no information.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Signature {
    /// Increasing at some λ, decreasing at none.
    Zero,
    /// Decreasing at some λ and increasing at every larger λ that is not flat.
    PositiveFinite,
    /// Decreasing at some λ, increasing at none.
    Infinite,
    Inconclusive,
}

impl Signature {
    /// Reads the signature off per-λ trends listed in increasing λ.
    pub fn from_trends(trends: &[Trend]) -> Signature {
        let last_dec = trends.iter().rposition(|&t| t == Trend::Decreasing);
        let first_inc = trends.iter().position(|&t| t == Trend::Increasing);
        match (last_dec, first_inc) {
            (None, Some(_)) => Signature::Zero,
            (Some(_), None) => Signature::Infinite,
            (Some(d), Some(i)) if d < i => Signature::PositiveFinite,
            _ => Signature::Inconclusive,
        }
    }

    pub fn matches(self, predicted: LambdaCRegime) -> Option<bool> {
        let expected = match predicted {
            LambdaCRegime::Zero => Signature::Zero,
            LambdaCRegime::PositiveFinite => Signature::PositiveFinite,
            LambdaCRegime::Infinite => Signature::Infinite,
            LambdaCRegime::Boundary => return None,
        };
        Some(self == expected)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LambdaTrend {
    pub lambda: f64,
    /// Crossing estimate per box side, in the order of the configured sides.
    pub crossing: Vec<CrossingEstimate>,
    pub trend: Trend,
    pub p_increasing: f64,
    pub p_decreasing: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseCell {
    pub alpha: f64,
    pub beta: f64,
    pub predicted: LambdaCRegime,
    /// Rows in increasing λ.
    pub trends: Vec<LambdaTrend>,
    pub signature: Signature,
    /// `None` for cells on a regime boundary.
    pub agrees: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseConfig {
    pub d: usize,
    pub alphas: Vec<f64>,
    pub betas: Vec<f64>,
    pub lambdas: Vec<f64>,
    pub sides: Vec<usize>,
    pub replicates: usize,
    pub seed: u64,
    /// One-sided significance of the trend tests.
    pub level: f64,
}

/// Crossing trends of the heterogeneous model on free boxes for every
/// (α, β) cell and λ, classified into λ_c signatures and compared with the
/// regime table.
///
/// Within one cell and side, all λ share coupled samples. Cell `c` and side
/// `s` use streams under `derive_stream(seed, c · |sides| + s, 0)`.
pub fn phase_diagram(config: &PhaseConfig) -> Result<Vec<PhaseCell>> {
    if config.alphas.is_empty() || config.betas.is_empty() || config.lambdas.is_empty() {
        return Err(invalid(
            "grid",
            "alpha, beta and lambda grids must be non-empty",
        ));
    }
    if config.sides.len() < 2 {
        return Err(invalid("side", "a size trend needs at least two box sides"));
    }
    if !(config.level > 0.0 && config.level < 1.0) {
        return Err(invalid(
            "level",
            format!("{} is outside (0, 1)", config.level),
        ));
    }
    let mut lambdas = config.lambdas.clone();
    lambdas.sort_by(f64::total_cmp);
    let mut cells = Vec::new();
    for &alpha in &config.alphas {
        for &beta in &config.betas {
            let cell_index = cells.len();
            let predicted = classify_regime(config.d, alpha, beta)?.lambda_c;
            let params = HetLrpParams::new(lambdas[lambdas.len() - 1], alpha, beta)?;
            let mut per_side = Vec::new();
            for (s, &side) in config.sides.iter().enumerate() {
                let lattice = LatticeBox::free(config.d, side)?;
                let spec = ModelSpec::HetLrp {
                    lattice,
                    params,
                    sampling: PairSampling::Auto,
                };
                let stream =
                    derive_stream(config.seed, (cell_index * config.sides.len() + s) as u64, 0);
                per_side.push(crossing_curve(
                    &spec,
                    &lattice,
                    FreeParam::Lambda,
                    &lambdas,
                    config.replicates,
                    RngStream::new(config.seed, stream),
                )?);
            }
            let trends: Vec<LambdaTrend> = lambdas
                .iter()
                .enumerate()
                .map(|(j, &lambda)| {
                    let crossing: Vec<CrossingEstimate> = per_side.iter().map(|c| c[j]).collect();
                    let mut groups: Vec<(usize, u64, u64)> = config
                        .sides
                        .iter()
                        .zip(&crossing)
                        .map(|(&n, e)| (n, e.successes, e.replicates))
                        .collect();
                    groups.sort_by_key(|g| g.0);
                    let counts: Vec<(u64, u64)> = groups.iter().map(|g| (g.1, g.2)).collect();
                    let mk = binary_trend(&counts);
                    LambdaTrend {
                        lambda,
                        crossing,
                        trend: mk.trend(config.level),
                        p_increasing: mk.p_increasing,
                        p_decreasing: mk.p_decreasing,
                    }
                })
                .collect();
            let signature =
                Signature::from_trends(&trends.iter().map(|t| t.trend).collect::<Vec<_>>());
            cells.push(PhaseCell {
                alpha,
                beta,
                predicted,
                agrees: signature.matches(predicted),
                trends,
                signature,
            });
        }
    }
    Ok(cells)
}

/// Long-format table: one row per (cell, λ, side).
pub fn write_phase_csv<W: std::io::Write>(
    config: &PhaseConfig,
    cells: &[PhaseCell],
    out: W,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "alpha",
        "beta",
        "lambda",
        "side",
        "crossing",
        "ci_lo",
        "ci_hi",
        "trend",
        "p_increasing",
        "p_decreasing",
        "signature",
        "predicted",
        "agreement",
    ])?;
    for c in cells {
        for t in &c.trends {
            for (&side, e) in config.sides.iter().zip(&t.crossing) {
                w.write_record([
                    c.alpha.to_string(),
                    c.beta.to_string(),
                    t.lambda.to_string(),
                    side.to_string(),
                    e.probability.to_string(),
                    e.ci.0.to_string(),
                    e.ci.1.to_string(),
                    format!("{:?}", t.trend).to_lowercase(),
                    t.p_increasing.to_string(),
                    t.p_decreasing.to_string(),
                    format!("{:?}", c.signature).to_lowercase(),
                    format!("{:?}", c.predicted).to_lowercase(),
                    match c.agrees {
                        Some(true) => "agree".into(),
                        Some(false) => "disagree".into(),
                        None => "BOUNDARY".into(),
                    },
                ])?;
            }
        }
    }
    w.flush()?;
    Ok(())
}
