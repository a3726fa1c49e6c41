use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// `Δ = 1 / log2(2d/α)` for `d < α < 2d`.
pub fn distance_exponent(d: usize, alpha: f64) -> Result<f64> {
    let df = d as f64;
    if d == 0 || !(alpha > df && alpha < 2.0 * df) {
        return Err(invalid(
            "alpha",
            format!("{alpha} is outside (d, 2d) = ({df}, {})", 2.0 * df),
        ));
    }
    Ok(1.0 / (2.0 * df / alpha).log2())
}

/// `⌈d/(d−α)⌉` for `0 < α < d`.
pub fn benjamini_bound(d: usize, alpha: f64) -> Result<u64> {
    let df = d as f64;
    if d == 0 || !(alpha > 0.0 && alpha < df) {
        return Err(invalid(
            "alpha",
            format!("{alpha} is outside (0, d) = (0, {df})"),
        ));
    }
    let ratio = df / (df - alpha);
    // d=2, α=1.9 gives 19.999999999999982 in floating point
    let nearest = ratio.round();
    if (ratio - nearest).abs() <= 1e-9 * nearest {
        Ok(nearest as u64)
    } else {
        Ok(ratio.ceil() as u64)
    }
}

/// `2 / |ln(βα/d − 1)|` for `d < βα < 2d`.
pub fn loglog_upper_coefficient(d: usize, alpha: f64, beta: f64) -> Result<f64> {
    let ratio = beta * alpha / d as f64;
    if d == 0 || !(ratio > 1.0 && ratio < 2.0) {
        return Err(invalid("beta", format!("βα/d = {ratio} is outside (1, 2)")));
    }
    Ok(2.0 / (ratio - 1.0).ln().abs())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum DegreeRegime {
    InfiniteDegree,
    HeavyTailInfVar { tau: f64 },
    HeavyTailFinVar { tau: f64 },
    Boundary,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LambdaCRegime {
    Zero,
    PositiveFinite,
    Infinite,
    Boundary,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum DistanceRegime {
    Bounded { hop_bound: u64 },
    LogLog { coefficient: f64 },
    PolyLog { delta: f64 },
    Linear,
    Conjectured { tag: String },
    Boundary,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegimeClass {
    pub degree: DegreeRegime,
    pub lambda_c: LambdaCRegime,
    pub distance: DistanceRegime,
}

impl RegimeClass {
    /// True when any field sits on a boundary.
    pub fn is_boundary(&self) -> bool {
        self.degree == DegreeRegime::Boundary
            || self.lambda_c == LambdaCRegime::Boundary
            || self.distance == DistanceRegime::Boundary
    }
}

/// Regime table for the heterogeneous lattice model as a function of
/// `(d, α, β)`. A field is reported as boundary when the parameters sit on an
/// equality (`βα = 2d`, `α = d`, `α = 2d`) that decides that field.
/// `β = ∞` stands for the homogeneous model.
pub fn classify_regime(d: usize, alpha: f64, beta: f64) -> Result<RegimeClass> {
    if d == 0 {
        return Err(invalid("d", "dimension must be at least 1"));
    }
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(invalid(
            "alpha",
            format!("{alpha} must be positive and finite"),
        ));
    }
    if !(beta > 0.0) {
        return Err(invalid("beta", format!("{beta} must be positive")));
    }
    let df = d as f64;
    let ba = beta * alpha;
    let tau = ba / df;
    let min = alpha.min(ba);
    let on_tau_two = ba == 2.0 * df;
    let degree = if on_tau_two {
        DegreeRegime::Boundary
    } else if min <= df {
        DegreeRegime::InfiniteDegree
    } else if tau < 2.0 {
        DegreeRegime::HeavyTailInfVar { tau }
    } else {
        DegreeRegime::HeavyTailFinVar { tau }
    };
    let lambda_c = if on_tau_two {
        LambdaCRegime::Boundary
    } else if min <= df || ba < 2.0 * df {
        LambdaCRegime::Zero
    } else if d == 1 && min > 2.0 {
        LambdaCRegime::Infinite
    } else {
        LambdaCRegime::PositiveFinite
    };
    // α = 2d only separates the two finite-variance distance laws
    let distance = if on_tau_two || alpha == df || (alpha == 2.0 * df && ba > 2.0 * df) {
        DistanceRegime::Boundary
    } else if alpha < df {
        DistanceRegime::Bounded {
            hop_bound: benjamini_bound(d, alpha)?,
        }
    } else if ba <= df {
        DistanceRegime::Conjectured {
            tag: "infinite-degree".into(),
        }
    } else if ba < 2.0 * df {
        DistanceRegime::LogLog {
            coefficient: loglog_upper_coefficient(d, alpha, beta)?,
        }
    } else if alpha < 2.0 * df {
        DistanceRegime::PolyLog {
            delta: distance_exponent(d, alpha)?,
        }
    } else {
        DistanceRegime::Linear
    };
    Ok(RegimeClass {
        degree,
        lambda_c,
        distance,
    })
}
