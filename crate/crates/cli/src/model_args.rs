use std::collections::BTreeMap;

use clap::Args;
use percolab::model::MODEL_KEYS;
use percolab::ModelSpec;

use crate::CliError;

/// Model flags shared by every sampling subcommand. Each flag mirrors the
/// config key of the same meaning.
#[derive(Args, Debug, Clone, Default)]
pub struct ModelArgs {
    /// Model family: er | nsw | nn-bond | hom-lrp | het-lrp | continuum | site-bond
    #[arg(long)]
    pub model: Option<String>,
    /// Lattice or space dimension [default: 1]
    #[arg(long)]
    pub d: Option<usize>,
    /// Number of nodes (er, nsw); for lattice models an alias of --side
    #[arg(long)]
    pub n: Option<usize>,
    /// Box side: lattice sites per axis, or length units for continuum
    #[arg(long)]
    pub side: Option<String>,
    /// Edge probability (er), bond probability (nn-bond) or nearest-neighbour probability (hom-lrp) [default for hom-lrp: 1 − e^{−λ}]
    #[arg(long)]
    pub p: Option<f64>,
    /// Mean degree of er, replacing --p (dimensionless)
    #[arg(long)]
    pub vartheta: Option<f64>,
    /// Long-range intensity λ, dimensionless (λ* for site-bond)
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Distance decay exponent α (dimensionless)
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Weight tail exponent β (dimensionless): P(W > w) = w^{−β}
    #[arg(long)]
    pub beta: Option<f64>,
    /// Continuum point intensity ν, points per unit volume
    #[arg(long)]
    pub nu: Option<f64>,
    /// Power-law degree exponent τ of nsw (dimensionless): g_k ∝ k^{−(τ+1)}
    #[arg(long)]
    pub tau: Option<f64>,
    /// Degree cutoff of nsw, or of the er degree law in `theory` [default: 1000000 for nsw]
    #[arg(long)]
    pub kmax: Option<usize>,
    /// Site occupation probability r* of site-bond
    #[arg(long)]
    pub rstar: Option<f64>,
    /// Lattice boundary: free | torus [default: free]
    #[arg(long)]
    pub boundary: Option<String>,
    /// Long-range pair sampler: auto | exhaustive | fast [default: auto]
    #[arg(long)]
    pub sampling: Option<String>,
    /// Continuum: all marks equal to 1
    #[arg(long)]
    pub homogeneous_marks: bool,
    /// Continuum: add a point at the centre of the box as node 0
    #[arg(long)]
    pub plant_origin: bool,
}

const LATTICE_MODELS: &[&str] = &["nn-bond", "hom-lrp", "het-lrp", "site-bond"];

/// Flag spelling of a config key.
pub fn flag_for(key: &str) -> String {
    match key {
        "k_max" => "--kmax".into(),
        "r_star" => "--rstar".into(),
        "lambda_star" => "--lambda".into(),
        other => format!("--{}", other.replace('_', "-")),
    }
}

impl ModelArgs {
    /// The config-key form of the flags that were given.
    pub fn to_params(&self) -> Result<BTreeMap<String, String>, CliError> {
        let mut m = BTreeMap::new();
        let model = self
            .model
            .clone()
            .ok_or_else(|| CliError::Usage("--model is required".into()))?;
        let mut put = |k: &str, v: Option<String>| {
            if let Some(v) = v {
                m.insert(k.to_string(), v);
            }
        };
        let lattice = LATTICE_MODELS.contains(&model.as_str());
        let side = match (&self.side, self.n) {
            (Some(_), Some(_)) if lattice => {
                return Err(CliError::Usage(
                    "--n and --side are aliases for lattice models; give one".into(),
                ))
            }
            (None, Some(n)) if lattice => Some(n.to_string()),
            (s, _) => s.clone(),
        };
        put("side", side);
        if !lattice {
            put("n", self.n.map(|v| v.to_string()));
        }
        put("model", Some(model));
        put("d", self.d.map(|v| v.to_string()));
        put("p", self.p.map(|v| v.to_string()));
        put("vartheta", self.vartheta.map(|v| v.to_string()));
        put("lambda", self.lambda.map(|v| v.to_string()));
        put("alpha", self.alpha.map(|v| v.to_string()));
        put("beta", self.beta.map(|v| v.to_string()));
        put("nu", self.nu.map(|v| v.to_string()));
        put("tau", self.tau.map(|v| v.to_string()));
        put("k_max", self.kmax.map(|v| v.to_string()));
        put("r_star", self.rstar.map(|v| v.to_string()));
        put("boundary", self.boundary.clone());
        put("sampling", self.sampling.clone());
        put(
            "homogeneous_marks",
            self.homogeneous_marks.then(|| "true".into()),
        );
        put("plant_origin", self.plant_origin.then(|| "true".into()));
        debug_assert!(m.keys().all(|k| MODEL_KEYS.contains(&k.as_str())));
        Ok(m)
    }

    pub fn spec(&self) -> Result<ModelSpec, CliError> {
        ModelSpec::from_params(&self.to_params()?).map_err(CliError::usage)
    }
}
