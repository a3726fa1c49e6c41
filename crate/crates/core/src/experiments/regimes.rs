use serde::{Deserialize, Serialize};

use crate::analysis::{distance_profile, Metric};
use crate::error::{invalid, Result};
use crate::model::ModelSpec;
use crate::rng::{derive_stream, purpose, RngStream};
use crate::theory::{classify_regime, distance_exponent, loglog_upper_coefficient, DistanceRegime};

/// Growth law `y = a + b f(r)` for the median hop distance at radius `r`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GrowthLaw {
    /// `f(r) = ln ln r`
    LogLog,
    /// `f(r) = (ln r)^Δ`
    PolyLog { delta: f64 },
    /// `f(r) = r`
    Linear,
}

impl GrowthLaw {
    pub fn transform(self, r: f64) -> f64 {
        match self {
            GrowthLaw::LogLog => r.ln().ln(),
            GrowthLaw::PolyLog { delta } => r.ln().powf(delta),
            GrowthLaw::Linear => r,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GrowthLaw::LogLog => "loglog",
            GrowthLaw::PolyLog { .. } => "polylog",
            GrowthLaw::Linear => "linear",
        }
    }

    fn expected(regime: &DistanceRegime) -> Option<&'static str> {
        match regime {
            DistanceRegime::LogLog { .. } => Some("loglog"),
            DistanceRegime::PolyLog { .. } => Some("polylog"),
            DistanceRegime::Linear => Some("linear"),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthFit {
    pub law: GrowthLaw,
    pub a: f64,
    pub b: f64,
    /// Root mean square of leave-one-radius-out prediction errors.
    pub loo_rmse: f64,
}

/// Least-squares fits of `y` against each law with leave-one-out errors.
/// Needs at least three radii, all above `e` so that `ln ln r` is defined.
pub fn fit_growth(radii: &[f64], y: &[f64], laws: &[GrowthLaw]) -> Result<Vec<GrowthFit>> {
    if radii.len() != y.len() || radii.len() < 3 {
        return Err(invalid(
            "radii",
            "need at least three radii with one value each",
        ));
    }
    if let Some(&r) = radii.iter().find(|&&r| !(r > std::f64::consts::E)) {
        return Err(invalid("radii", format!("{r} is not above e")));
    }
    laws.iter()
        .map(|&law| {
            let x: Vec<f64> = radii.iter().map(|&r| law.transform(r)).collect();
            let (a, b) = crate::stats::least_squares(&x, y)
                .ok_or_else(|| invalid("radii", "radii must differ"))?;
            let mut sq = 0.0;
            for i in 0..x.len() {
                let xs: Vec<f64> = x
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, &v)| v)
                    .collect();
                let ys: Vec<f64> = y
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, &v)| v)
                    .collect();
                let (ai, bi) = crate::stats::least_squares(&xs, &ys)
                    .ok_or_else(|| invalid("radii", "radii must differ"))?;
                sq += (ai + bi * x[i] - y[i]).powi(2);
            }
            Ok(GrowthFit {
                law,
                a,
                b,
                loo_rmse: (sq / x.len() as f64).sqrt(),
            })
        })
        .collect()
}

/// Median of integer-valued data with the tied block at the median spread
/// uniformly over `[m − ½, m + ½)`, so that it varies continuously with the
/// sample.
pub fn interpolated_median(values: &[u32]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut sorted = values.to_vec();
    sorted.sort_unstable();
    let n = sorted.len() as f64;
    let m = sorted[(sorted.len() - 1) / 2];
    let below = sorted.partition_point(|&v| v < m) as f64;
    let equal = sorted.partition_point(|&v| v <= m) as f64 - below;
    Some(m as f64 - 0.5 + (n / 2.0 - below) / equal)
}

/// Minimum pairs per radius for a fit.
pub const MIN_PAIRS: usize = 30;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegimeCell {
    pub label: String,
    pub spec: ModelSpec,
    pub radii: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadiusMedian {
    pub radius: f64,
    pub pairs: usize,
    pub median: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegimeFit {
    pub label: String,
    pub predicted: DistanceRegime,
    pub medians: Vec<RadiusMedian>,
    /// Empty when the cell is insufficient.
    pub fits: Vec<GrowthFit>,
    /// Law with the smallest leave-one-out error.
    pub best: Option<GrowthLaw>,
    /// Whether the best error is strictly below every other.
    pub strict: bool,
    pub insufficient: bool,
    /// Exponent used by the polylog law.
    pub delta: f64,
    /// Upper log-log coefficient when `1 < βα/d < 2`.
    pub loglog_bound: Option<f64>,
    pub agrees: Option<bool>,
}

/// `(d, α, β)` of a lattice long-range model; β is infinite for the
/// homogeneous one.
fn regime_params(spec: &ModelSpec) -> Result<(usize, f64, f64)> {
    match spec {
        ModelSpec::HomLrp {
            lattice, params, ..
        } => Ok((lattice.d(), params.alpha, f64::INFINITY)),
        ModelSpec::HetLrp {
            lattice, params, ..
        } => Ok((lattice.d(), params.alpha, params.beta)),
        other => Err(invalid(
            "model",
            format!(
                "distance regimes need hom-lrp or het-lrp, got {}",
                other.name()
            ),
        )),
    }
}

/// Exponent of the polylog law for a cell: the homogeneous distance exponent
/// when `α ∈ (d, 2d)`, otherwise the one at `α = 3d/2`.
pub fn polylog_delta(d: usize, alpha: f64) -> f64 {
    distance_exponent(d, alpha)
        .or_else(|_| distance_exponent(d, 1.5 * d as f64))
        .expect("3d/2 lies in (d, 2d)")
}

/// Samples each cell `replicates` times, pools `pairs` hop distances per
/// radius and replicate, and fits the three growth laws to the interpolated
/// medians. Cell `c`, replicate `r` uses stream `derive_stream(seed, c, r)`.
pub fn distance_regimes(
    cells: &[RegimeCell],
    pairs: usize,
    replicates: usize,
    seed: u64,
) -> Result<Vec<RegimeFit>> {
    if replicates == 0 {
        return Err(invalid("replicates", "must be at least 1"));
    }
    let mut out = Vec::new();
    for (c, cell) in cells.iter().enumerate() {
        let (d, alpha, beta) = regime_params(&cell.spec)?;
        let predicted = classify_regime(d, alpha, beta)?.distance;
        let Some(expected) = GrowthLaw::expected(&predicted) else {
            return Err(invalid(
                "model",
                format!(
                    "cell `{}` is in regime {predicted:?}, not loglog, polylog or linear",
                    cell.label
                ),
            ));
        };
        let lattice = cell.spec.lattice().expect("lattice model");
        let mut hops: Vec<Vec<u32>> = vec![Vec::new(); cell.radii.len()];
        for r in 0..replicates {
            let rng = RngStream::new(seed, derive_stream(seed, c as u64, r as u64));
            let g = cell.spec.sample(rng)?;
            let prof = distance_profile(
                &g,
                Metric::Lattice(lattice),
                &cell.radii,
                pairs,
                rng.substream(purpose::ANALYSIS),
            )?;
            for (h, row) in hops.iter_mut().zip(prof.rows) {
                h.extend(row.hops);
            }
        }
        let medians: Vec<RadiusMedian> = cell
            .radii
            .iter()
            .zip(&hops)
            .map(|(&radius, h)| RadiusMedian {
                radius,
                pairs: h.len(),
                median: interpolated_median(h),
            })
            .collect();
        let delta = polylog_delta(d, alpha);
        let loglog_bound = loglog_upper_coefficient(d, alpha, beta).ok();
        let insufficient = hops.iter().any(|h| h.len() < MIN_PAIRS);
        let mut fit = RegimeFit {
            label: cell.label.clone(),
            predicted,
            medians,
            fits: Vec::new(),
            best: None,
            strict: false,
            insufficient,
            delta,
            loglog_bound,
            agrees: None,
        };
        if !insufficient {
            let y: Vec<f64> = fit
                .medians
                .iter()
                .map(|m| m.median.expect("non-empty"))
                .collect();
            let laws = [
                GrowthLaw::LogLog,
                GrowthLaw::PolyLog { delta },
                GrowthLaw::Linear,
            ];
            fit.fits = fit_growth(&cell.radii, &y, &laws)?;
            let best = fit
                .fits
                .iter()
                .min_by(|a, b| a.loo_rmse.total_cmp(&b.loo_rmse))
                .expect("three fits");
            fit.strict = fit
                .fits
                .iter()
                .filter(|f| f.law != best.law)
                .all(|f| f.loo_rmse > best.loo_rmse);
            fit.best = Some(best.law);
            fit.agrees = Some(fit.strict && best.law.name() == expected);
        }
        out.push(fit);
    }
    Ok(out)
}
