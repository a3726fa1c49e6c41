use serde::{Deserialize, Serialize};

use super::compensated_sum;
use crate::error::{invalid, Result};

const SUM_TOLERANCE: f64 = 1e-12;

/// Degree distribution `(g_0, …, g_kmax)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegreeLaw {
    weights: Vec<f64>,
}

impl DegreeLaw {
    /// Accepts weights that already sum to one within `1e-12`.
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        check_weights(&weights)?;
        let total = compensated_sum(weights.iter().copied());
        if (total - 1.0).abs() > SUM_TOLERANCE {
            return Err(invalid("weights", format!("sum to {total}, not 1")));
        }
        Ok(Self { weights })
    }

    /// Rescales arbitrary non-negative weights to a probability vector.
    pub fn normalized(mut weights: Vec<f64>) -> Result<Self> {
        check_weights(&weights)?;
        let total = compensated_sum(weights.iter().copied());
        if total <= 0.0 {
            return Err(invalid("weights", "all weights are zero"));
        }
        for w in &mut weights {
            *w /= total;
        }
        Ok(Self { weights })
    }

    /// Poisson(`mean`) truncated at `k_max` and renormalised.
    pub fn poisson(mean: f64, k_max: usize) -> Result<Self> {
        if !(mean > 0.0 && mean.is_finite()) {
            return Err(invalid("mean", "must be positive and finite"));
        }
        let mut weights = Vec::with_capacity(k_max + 1);
        let mut log_p = -mean;
        for k in 0..=k_max {
            if k > 0 {
                log_p += mean.ln() - (k as f64).ln();
            }
            weights.push(log_p.exp());
        }
        Self::normalized(weights)
    }

    /// Exact power law `g_k ∝ k^{−(τ+1)}` on `1..=k_max`, `g_0 = 0`.
    pub fn power_law(tau: f64, k_max: usize) -> Result<Self> {
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(invalid("tau", "must be positive and finite"));
        }
        if k_max < 1 {
            return Err(invalid("k_max", "must be at least 1"));
        }
        let mut weights = Vec::with_capacity(k_max + 1);
        weights.push(0.0);
        weights.extend((1..=k_max).map(|k| (k as f64).powf(-(tau + 1.0))));
        Self::normalized(weights)
    }

    /// Point mass at `k`.
    pub fn constant(k: usize) -> Self {
        let mut weights = vec![0.0; k + 1];
        weights[k] = 1.0;
        Self { weights }
    }

    pub fn k_max(&self) -> usize {
        self.weights.len() - 1
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn g(&self, k: usize) -> f64 {
        self.weights.get(k).copied().unwrap_or(0.0)
    }

    /// Mean degree `μ`.
    pub fn mean(&self) -> f64 {
        compensated_sum(self.weights.iter().enumerate().map(|(k, &g)| k as f64 * g))
    }

    /// Cumulative distribution for inverse-transform sampling.
    pub fn cdf(&self) -> Vec<f64> {
        let mut acc = 0.0;
        self.weights
            .iter()
            .map(|&g| {
                acc += g;
                acc
            })
            .collect()
    }
}

fn check_weights(weights: &[f64]) -> Result<()> {
    if weights.is_empty() {
        return Err(invalid("weights", "empty degree law"));
    }
    if let Some(bad) = weights.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
        return Err(invalid(
            "weights",
            format!("entry {bad} is not a probability"),
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_atom_power_law() {
        let law = DegreeLaw::power_law(1.7, 1).unwrap();
        assert_eq!(law.weights(), &[0.0, 1.0]);
    }

    #[test]
    fn power_law_is_normalised() {
        let law = DegreeLaw::power_law(1.5, 1_000_000).unwrap();
        assert_eq!(law.g(0), 0.0);
        let total = compensated_sum(law.weights().iter().copied());
        assert!((total - 1.0).abs() < 1e-12);
        assert!(law.g(1) > law.g(2));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(DegreeLaw::power_law(1.5, 0).is_err());
        assert!(DegreeLaw::power_law(0.0, 10).is_err());
        assert!(DegreeLaw::new(vec![0.5, 0.6]).is_err());
        assert!(DegreeLaw::new(vec![-0.5, 1.5]).is_err());
        assert!(DegreeLaw::normalized(vec![0.0, 0.0]).is_err());
    }

    #[test]
    fn truncated_poisson_mean() {
        let law = DegreeLaw::poisson(2.0, 200).unwrap();
        assert!((law.mean() - 2.0).abs() < 1e-12);
    }
}
