//! Samplers for the seven model families. Every generator is a pure function
//! of its parameters and an [`RngStream`](crate::RngStream).

pub(crate) mod continuum;
mod er;
pub(crate) mod lattice_models;
mod nsw;
pub mod pairs;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

pub use continuum::{gen_continuum, gen_continuum_with};
pub use er::gen_er;
pub use lattice_models::{
    gen_het_lrp, gen_het_lrp_with, gen_hom_lrp, gen_hom_lrp_with, gen_nn_bond, gen_site_bond,
    gen_site_bond_with, pareto_weight,
};
pub use nsw::{
    gen_nsw, molloy_reed, nsw_degree_law, sample_degrees, stub_matching, MolloyReed, StubMatching,
};
pub use pairs::{MarkedEdge, PairSampling};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErParams {
    pub n: usize,
    pub p: f64,
}

impl ErParams {
    pub fn new(n: usize, p: f64) -> Result<Self> {
        let params = Self { n, p };
        params.validate()?;
        Ok(params)
    }

    /// `p = ϑ/n`.
    pub fn from_vartheta(n: usize, vartheta: f64) -> Result<Self> {
        if !(vartheta > 0.0 && vartheta.is_finite()) {
            return Err(invalid("vartheta", "must be positive and finite"));
        }
        Self::new(n, vartheta / n as f64)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(invalid("n", "must be at least 1"));
        }
        if !(self.p > 0.0 && self.p < 1.0) {
            return Err(invalid("p", format!("{} is outside (0, 1)", self.p)));
        }
        Ok(())
    }
}

pub const DEFAULT_K_MAX: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NswParams {
    pub n: usize,
    pub tau: f64,
    pub k_max: usize,
}

impl NswParams {
    pub fn new(n: usize, tau: f64, k_max: usize) -> Result<Self> {
        let params = Self { n, tau, k_max };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(invalid("n", "must be at least 2"));
        }
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return Err(invalid("tau", "must be positive and finite"));
        }
        if self.k_max < 1 {
            return Err(invalid("k_max", "must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HomLrpParams {
    pub p: f64,
    pub lambda: f64,
    pub alpha: f64,
}

impl HomLrpParams {
    pub fn new(p: f64, lambda: f64, alpha: f64) -> Result<Self> {
        let params = Self { p, lambda, alpha };
        params.validate()?;
        Ok(params)
    }

    /// The nearest-neighbour probability follows the long-range law.
    pub fn model_one(lambda: f64, alpha: f64) -> Result<Self> {
        Self::new(-(-lambda).exp_m1(), lambda, alpha)
    }

    pub fn validate(&self) -> Result<()> {
        check_probability("p", self.p)?;
        // λ = 0 is admitted: it leaves nearest-neighbour percolation
        check_non_negative("lambda", self.lambda)?;
        check_positive("alpha", self.alpha)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HetLrpParams {
    pub lambda: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl HetLrpParams {
    pub fn new(lambda: f64, alpha: f64, beta: f64) -> Result<Self> {
        let params = Self {
            lambda,
            alpha,
            beta,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        check_positive("lambda", self.lambda)?;
        check_positive("alpha", self.alpha)?;
        check_positive("beta", self.beta)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContinuumParams {
    pub d: usize,
    pub nu: f64,
    pub side: f64,
    pub lambda: f64,
    pub alpha: f64,
    pub beta: f64,
    pub homogeneous_marks: bool,
    pub plant_origin: bool,
}

impl ContinuumParams {
    pub fn validate(&self) -> Result<()> {
        if self.d < 1 {
            return Err(invalid("d", "must be at least 1"));
        }
        check_positive("nu", self.nu)?;
        check_positive("L", self.side)?;
        check_positive("lambda", self.lambda)?;
        check_positive("alpha", self.alpha)?;
        if !self.homogeneous_marks {
            check_positive("beta", self.beta)?;
        }
        Ok(())
    }

    pub fn expected_points(&self) -> f64 {
        self.nu * self.side.powi(self.d as i32)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SiteBondParams {
    pub r_star: f64,
    pub lambda_star: f64,
    pub alpha: f64,
}

impl SiteBondParams {
    pub fn new(r_star: f64, lambda_star: f64, alpha: f64) -> Result<Self> {
        let params = Self {
            r_star,
            lambda_star,
            alpha,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        check_probability("r_star", self.r_star)?;
        check_positive("lambda_star", self.lambda_star)?;
        check_positive("alpha", self.alpha)
    }
}

pub(crate) fn check_probability(name: &'static str, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(invalid(name, format!("{v} is outside [0, 1]")))
    }
}

pub(crate) fn check_positive(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(invalid(name, format!("{v} must be positive and finite")))
    }
}

pub(crate) fn check_non_negative(name: &'static str, v: f64) -> Result<()> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(invalid(
            name,
            format!("{v} must be non-negative and finite"),
        ))
    }
}
