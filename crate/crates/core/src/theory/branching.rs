use serde::{Deserialize, Serialize};

use super::{compensated_sum, DegreeLaw};
use crate::error::{invalid, Error, Result};

const FIXED_POINT_TOL: f64 = 1e-12;
const FIXED_POINT_MAX_ITER: u64 = 1_000_000;

/// `G_0(z) = Σ g_k z^k`.
pub fn pgf_g0(law: &DegreeLaw, z: f64) -> Result<f64> {
    check_z(z)?;
    Ok(horner(law.weights().iter().copied(), z))
}

/// `G_1(z) = Σ_{k≥1} k g_k z^{k−1} / μ`.
pub fn pgf_g1(law: &DegreeLaw, z: f64) -> Result<f64> {
    check_z(z)?;
    let mu = positive_mean(law)?;
    Ok(g1_unchecked(law, mu, z))
}

/// Mean offspring `ϑ = Σ k(k−1) g_k / μ` of the size-biased generation.
pub fn second_gen_mean(law: &DegreeLaw) -> Result<f64> {
    let mu = positive_mean(law)?;
    let s = compensated_sum(
        law.weights()
            .iter()
            .enumerate()
            .map(|(k, &g)| k as f64 * (k as f64 - 1.0) * g),
    );
    Ok(s / mu)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    Subcritical,
    Critical,
    Supercritical,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheoryReport {
    pub k_max: usize,
    pub mu: f64,
    pub vartheta: f64,
    pub z0: f64,
    pub chi: f64,
    pub phase: Phase,
    pub iterations: u64,
}

/// Smallest fixed point of `G_1` on `[0, 1]` and the giant fraction
/// `χ = 1 − G_0(z_0)`.
///
/// The iteration `z ← G_1(z)` from 0 increases monotonically to the smallest
/// fixed point. With `ϑ ≤ 1` that point is 1 and no iteration is needed.
pub fn giant_fraction(law: &DegreeLaw) -> Result<TheoryReport> {
    let mu = positive_mean(law)?;
    let vartheta = second_gen_mean(law)?;
    let phase = if vartheta < 1.0 {
        Phase::Subcritical
    } else if vartheta == 1.0 {
        Phase::Critical
    } else {
        Phase::Supercritical
    };
    if phase != Phase::Supercritical {
        return Ok(TheoryReport {
            k_max: law.k_max(),
            mu,
            vartheta,
            z0: 1.0,
            chi: 0.0,
            phase,
            iterations: 0,
        });
    }
    let mut z = 0.0f64;
    let mut iterations = 0u64;
    loop {
        let next = g1_unchecked(law, mu, z);
        iterations += 1;
        let step = (next - z).abs();
        z = next;
        if step < FIXED_POINT_TOL {
            break;
        }
        if iterations >= FIXED_POINT_MAX_ITER {
            return Err(Error::NoConvergence {
                iterations,
                last_step: step,
            });
        }
    }
    let chi = (1.0 - horner(law.weights().iter().copied(), z)).clamp(0.0, 1.0);
    Ok(TheoryReport {
        k_max: law.k_max(),
        mu,
        vartheta,
        z0: z,
        chi,
        phase,
        iterations,
    })
}

fn g1_unchecked(law: &DegreeLaw, mu: f64, z: f64) -> f64 {
    let derivative = law
        .weights()
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, &g)| k as f64 * g);
    (horner(derivative, z) / mu).min(1.0)
}

/// Evaluates `Σ c_k z^k` for coefficients given in increasing order.
fn horner(coeffs: impl DoubleEndedIterator<Item = f64>, z: f64) -> f64 {
    coeffs.rev().fold(0.0, |acc, c| acc * z + c)
}

fn check_z(z: f64) -> Result<()> {
    if (0.0..=1.0).contains(&z) {
        Ok(())
    } else {
        Err(invalid("z", format!("{z} is outside [0, 1]")))
    }
}

fn positive_mean(law: &DegreeLaw) -> Result<f64> {
    let mu = law.mean();
    if mu > 0.0 {
        Ok(mu)
    } else {
        Err(invalid("law", "mean degree is zero"))
    }
}
