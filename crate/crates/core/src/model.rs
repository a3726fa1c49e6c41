//! Tagged parameter sets for the seven model families, their flat key-value
//! form, and coupled sampling across parameter values.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::generators::lattice_models::{
    hom_kernel, lrp_into, nn_bond_into, occupation_uniforms, weight_uniforms,
};
use crate::generators::pairs::{Geometry, Kernel};
use crate::generators::{
    continuum, gen_continuum_with, gen_er, gen_het_lrp_with, gen_hom_lrp_with, gen_nn_bond,
    gen_nsw, gen_site_bond_with, pareto_weight, ContinuumParams, ErParams, HetLrpParams,
    HomLrpParams, MarkedEdge, NswParams, PairSampling, SiteBondParams, DEFAULT_K_MAX,
};
use crate::graph::{Graph, GraphBuilder, Positions};
use crate::lattice::{Boundary, LatticeBox};
use crate::rng::RngStream;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "kebab-case")]
pub enum ModelSpec {
    Er(ErParams),
    Nsw(NswParams),
    NnBond {
        lattice: LatticeBox,
        p: f64,
    },
    HomLrp {
        lattice: LatticeBox,
        params: HomLrpParams,
        sampling: PairSampling,
    },
    HetLrp {
        lattice: LatticeBox,
        params: HetLrpParams,
        sampling: PairSampling,
    },
    Continuum {
        params: ContinuumParams,
        sampling: PairSampling,
    },
    SiteBond {
        lattice: LatticeBox,
        params: SiteBondParams,
        sampling: PairSampling,
    },
}

/// Parameter that the percolation analyses vary.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FreeParam {
    P,
    Lambda,
}

impl std::str::FromStr for FreeParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "p" => Ok(FreeParam::P),
            "lambda" => Ok(FreeParam::Lambda),
            other => Err(invalid("param", format!("`{other}` is not p|lambda"))),
        }
    }
}

/// Keys understood by [`ModelSpec::from_params`].
pub const MODEL_KEYS: &[&str] = &[
    "alpha",
    "beta",
    "boundary",
    "d",
    "homogeneous_marks",
    "k_max",
    "lambda",
    "model",
    "n",
    "nu",
    "p",
    "plant_origin",
    "r_star",
    "sampling",
    "side",
    "tau",
    "vartheta",
];

pub const MODEL_NAMES: &[&str] = &[
    "er",
    "nsw",
    "nn-bond",
    "hom-lrp",
    "het-lrp",
    "continuum",
    "site-bond",
];

impl ModelSpec {
    pub fn name(&self) -> &'static str {
        match self {
            ModelSpec::Er(_) => "er",
            ModelSpec::Nsw(_) => "nsw",
            ModelSpec::NnBond { .. } => "nn-bond",
            ModelSpec::HomLrp { .. } => "hom-lrp",
            ModelSpec::HetLrp { .. } => "het-lrp",
            ModelSpec::Continuum { .. } => "continuum",
            ModelSpec::SiteBond { .. } => "site-bond",
        }
    }

    /// Builds a spec from flat keys. Keys the chosen model does not use are
    /// rejected.
    pub fn from_params(map: &BTreeMap<String, String>) -> Result<Self> {
        let r = Reader::new(map);
        let model = r
            .string("model")?
            .ok_or_else(|| invalid("model", "missing"))?;
        let sampling = r.parse::<PairSampling>("sampling")?.unwrap_or_default();
        let lattice = |r: &Reader| -> Result<LatticeBox> {
            LatticeBox::new(
                r.parse("d")?.unwrap_or(1),
                r.required("side")?,
                r.parse("boundary")?.unwrap_or(Boundary::Free),
            )
        };
        let spec = match model.as_str() {
            "er" => {
                let n = r.required("n")?;
                match (r.parse::<f64>("p")?, r.parse::<f64>("vartheta")?) {
                    (Some(p), None) => ModelSpec::Er(ErParams::new(n, p)?),
                    (None, Some(v)) => ModelSpec::Er(ErParams::from_vartheta(n, v)?),
                    _ => return Err(invalid("p", "give exactly one of p and vartheta")),
                }
            }
            "nsw" => ModelSpec::Nsw(NswParams::new(
                r.required("n")?,
                r.required("tau")?,
                r.parse("k_max")?.unwrap_or(DEFAULT_K_MAX),
            )?),
            "nn-bond" => {
                let p = r.required("p")?;
                crate::generators::check_probability("p", p)?;
                ModelSpec::NnBond {
                    lattice: lattice(&r)?,
                    p,
                }
            }
            "hom-lrp" => ModelSpec::HomLrp {
                lattice: lattice(&r)?,
                params: match r.parse::<f64>("p")? {
                    Some(p) => HomLrpParams::new(p, r.required("lambda")?, r.required("alpha")?)?,
                    None => HomLrpParams::model_one(r.required("lambda")?, r.required("alpha")?)?,
                },
                sampling,
            },
            "het-lrp" => ModelSpec::HetLrp {
                lattice: lattice(&r)?,
                params: HetLrpParams::new(
                    r.required("lambda")?,
                    r.required("alpha")?,
                    r.required("beta")?,
                )?,
                sampling,
            },
            "continuum" => {
                let homogeneous_marks = r.parse("homogeneous_marks")?.unwrap_or(false);
                let params = ContinuumParams {
                    d: r.parse("d")?.unwrap_or(1),
                    nu: r.required("nu")?,
                    side: r.required("side")?,
                    lambda: r.required("lambda")?,
                    alpha: r.required("alpha")?,
                    beta: if homogeneous_marks {
                        r.parse("beta")?.unwrap_or(f64::INFINITY)
                    } else {
                        r.required("beta")?
                    },
                    homogeneous_marks,
                    plant_origin: r.parse("plant_origin")?.unwrap_or(false),
                };
                params.validate()?;
                ModelSpec::Continuum { params, sampling }
            }
            "site-bond" => ModelSpec::SiteBond {
                lattice: lattice(&r)?,
                params: SiteBondParams::new(
                    r.required("r_star")?,
                    r.required("lambda")?,
                    r.required("alpha")?,
                )?,
                sampling,
            },
            other => {
                return Err(invalid(
                    "model",
                    format!("`{other}` is not one of {}", MODEL_NAMES.join("|")),
                ));
            }
        };
        if let Some(key) = r.unused().into_iter().next() {
            return Err(Error::Config(format!(
                "key `{key}` does not apply to model {model}"
            )));
        }
        Ok(spec)
    }

    /// Flat keys that reproduce this spec.
    pub fn to_params(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        let mut put = |k: &str, v: String| {
            m.insert(k.to_string(), v);
        };
        put("model", self.name().to_string());
        let lattice_keys = |put: &mut dyn FnMut(&str, String), l: &LatticeBox| {
            put("d", l.d().to_string());
            put("side", l.side().to_string());
            put("boundary", l.boundary().to_string());
        };
        match self {
            ModelSpec::Er(p) => {
                put("n", p.n.to_string());
                put("p", p.p.to_string());
            }
            ModelSpec::Nsw(p) => {
                put("n", p.n.to_string());
                put("tau", p.tau.to_string());
                put("k_max", p.k_max.to_string());
            }
            ModelSpec::NnBond { lattice, p } => {
                lattice_keys(&mut put, lattice);
                put("p", p.to_string());
            }
            ModelSpec::HomLrp {
                lattice, params, ..
            } => {
                lattice_keys(&mut put, lattice);
                put("p", params.p.to_string());
                put("lambda", params.lambda.to_string());
                put("alpha", params.alpha.to_string());
            }
            ModelSpec::HetLrp {
                lattice, params, ..
            } => {
                lattice_keys(&mut put, lattice);
                put("lambda", params.lambda.to_string());
                put("alpha", params.alpha.to_string());
                put("beta", params.beta.to_string());
            }
            ModelSpec::Continuum { params, .. } => {
                put("d", params.d.to_string());
                put("nu", params.nu.to_string());
                put("side", params.side.to_string());
                put("lambda", params.lambda.to_string());
                put("alpha", params.alpha.to_string());
                if !params.homogeneous_marks {
                    put("beta", params.beta.to_string());
                }
                put("homogeneous_marks", params.homogeneous_marks.to_string());
                put("plant_origin", params.plant_origin.to_string());
            }
            ModelSpec::SiteBond {
                lattice, params, ..
            } => {
                lattice_keys(&mut put, lattice);
                put("r_star", params.r_star.to_string());
                put("lambda", params.lambda_star.to_string());
                put("alpha", params.alpha.to_string());
            }
        }
        m
    }

    pub fn num_nodes_hint(&self) -> Option<usize> {
        match self {
            ModelSpec::Er(p) => Some(p.n),
            ModelSpec::Nsw(p) => Some(p.n),
            ModelSpec::Continuum { .. } => None,
            _ => self.lattice().map(|l| l.num_sites()),
        }
    }

    pub fn lattice(&self) -> Option<&LatticeBox> {
        match self {
            ModelSpec::NnBond { lattice, .. }
            | ModelSpec::HomLrp { lattice, .. }
            | ModelSpec::HetLrp { lattice, .. }
            | ModelSpec::SiteBond { lattice, .. } => Some(lattice),
            _ => None,
        }
    }

    /// Same model on a different lattice box.
    pub fn with_lattice(&self, new: LatticeBox) -> Result<Self> {
        let mut spec = self.clone();
        match &mut spec {
            ModelSpec::NnBond { lattice, .. }
            | ModelSpec::HomLrp { lattice, .. }
            | ModelSpec::HetLrp { lattice, .. }
            | ModelSpec::SiteBond { lattice, .. } => *lattice = new,
            _ => {
                return Err(Error::Unsupported(format!(
                    "model {} has no lattice",
                    self.name()
                )))
            }
        }
        Ok(spec)
    }

    pub fn param(&self, which: FreeParam) -> Option<f64> {
        match (self, which) {
            (ModelSpec::Er(p), FreeParam::P) => Some(p.p),
            (ModelSpec::NnBond { p, .. }, FreeParam::P) => Some(*p),
            (ModelSpec::HomLrp { params, .. }, FreeParam::P) => Some(params.p),
            (ModelSpec::HomLrp { params, .. }, FreeParam::Lambda) => Some(params.lambda),
            (ModelSpec::HetLrp { params, .. }, FreeParam::Lambda) => Some(params.lambda),
            (ModelSpec::Continuum { params, .. }, FreeParam::Lambda) => Some(params.lambda),
            (ModelSpec::SiteBond { params, .. }, FreeParam::Lambda) => Some(params.lambda_star),
            _ => None,
        }
    }

    /// Same model with one parameter replaced.
    pub fn with_param(&self, which: FreeParam, value: f64) -> Result<Self> {
        let mut spec = self.clone();
        match (&mut spec, which) {
            (ModelSpec::Er(p), FreeParam::P) => p.p = value,
            (ModelSpec::NnBond { p, .. }, FreeParam::P) => *p = value,
            (ModelSpec::HomLrp { params, .. }, FreeParam::P) => params.p = value,
            (ModelSpec::HomLrp { params, .. }, FreeParam::Lambda) => params.lambda = value,
            (ModelSpec::HetLrp { params, .. }, FreeParam::Lambda) => params.lambda = value,
            (ModelSpec::Continuum { params, .. }, FreeParam::Lambda) => params.lambda = value,
            (ModelSpec::SiteBond { params, .. }, FreeParam::Lambda) => params.lambda_star = value,
            _ => {
                return Err(Error::Unsupported(format!(
                    "model {} has no free parameter {which:?}",
                    self.name()
                )))
            }
        }
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ModelSpec::Er(p) => p.validate(),
            ModelSpec::Nsw(p) => p.validate(),
            ModelSpec::NnBond { p, .. } => crate::generators::check_probability("p", *p),
            ModelSpec::HomLrp { params, .. } => params.validate(),
            ModelSpec::HetLrp { params, .. } => params.validate(),
            ModelSpec::Continuum { params, .. } => params.validate(),
            ModelSpec::SiteBond { params, .. } => params.validate(),
        }
    }

    pub fn sample(&self, rng: RngStream) -> Result<Graph> {
        match self {
            ModelSpec::Er(p) => gen_er(p, rng),
            ModelSpec::Nsw(p) => Ok(gen_nsw(p, rng)?.graph),
            ModelSpec::NnBond { lattice, p } => gen_nn_bond(lattice, *p, rng),
            ModelSpec::HomLrp {
                lattice,
                params,
                sampling,
            } => gen_hom_lrp_with(lattice, params, *sampling, rng),
            ModelSpec::HetLrp {
                lattice,
                params,
                sampling,
            } => gen_het_lrp_with(lattice, params, *sampling, rng),
            ModelSpec::Continuum { params, sampling } => gen_continuum_with(params, *sampling, rng),
            ModelSpec::SiteBond {
                lattice,
                params,
                sampling,
            } => gen_site_bond_with(lattice, params, *sampling, rng),
        }
    }

    /// Samples with per-edge marks so that [`CoupledSample::realize`] can
    /// produce this model at any dominated parameter set from the same
    /// randomness. Realising the spec itself reproduces [`ModelSpec::sample`].
    pub fn sample_coupled(&self, rng: RngStream) -> Result<CoupledSample> {
        self.validate()?;
        let mut edges: Vec<MarkedEdge> = Vec::new();
        let mut weight_u = None;
        let mut occupation_u = None;
        let coords = match self {
            ModelSpec::Er(_) | ModelSpec::Nsw(_) => {
                return Err(Error::Unsupported(format!(
                    "coupled sampling of model {}",
                    self.name()
                )))
            }
            ModelSpec::NnBond { lattice, p } => {
                nn_bond_into(lattice, *p, rng, &mut edges);
                lattice.positions().as_slice().to_vec()
            }
            ModelSpec::HomLrp {
                lattice,
                params,
                sampling,
            } => {
                let pos = lattice.positions();
                lrp_into(
                    lattice,
                    pos.as_slice(),
                    hom_kernel(params),
                    None,
                    None,
                    *sampling,
                    rng,
                    &mut edges,
                );
                pos.as_slice().to_vec()
            }
            ModelSpec::HetLrp {
                lattice,
                params,
                sampling,
            } => {
                let pos = lattice.positions();
                let u = weight_uniforms(lattice.num_sites(), rng);
                let w: Vec<f64> = u.iter().map(|&u| pareto_weight(u, params.beta)).collect();
                let kernel = Kernel {
                    lambda: params.lambda,
                    alpha: params.alpha,
                    nn: None,
                };
                lrp_into(
                    lattice,
                    pos.as_slice(),
                    kernel,
                    Some(&w),
                    None,
                    *sampling,
                    rng,
                    &mut edges,
                );
                weight_u = Some(u);
                pos.as_slice().to_vec()
            }
            ModelSpec::SiteBond {
                lattice,
                params,
                sampling,
            } => {
                let pos = lattice.positions();
                let o = occupation_uniforms(lattice.num_sites(), rng);
                let occupied: Vec<bool> = o.iter().map(|&o| o < params.r_star).collect();
                let kernel = Kernel {
                    lambda: params.lambda_star,
                    alpha: params.alpha,
                    nn: None,
                };
                lrp_into(
                    lattice,
                    pos.as_slice(),
                    kernel,
                    None,
                    Some(&occupied),
                    *sampling,
                    rng,
                    &mut edges,
                );
                occupation_u = Some(o);
                pos.as_slice().to_vec()
            }
            ModelSpec::Continuum { params, sampling } => {
                let coords = continuum::continuum_points(params, rng)?;
                let u = weight_uniforms(coords.len() / params.d, rng);
                let w = continuum::continuum_weights(params, &u);
                continuum::continuum_into(
                    params,
                    &coords,
                    w.as_deref(),
                    *sampling,
                    rng,
                    &mut edges,
                );
                weight_u = Some(u);
                coords
            }
        };
        Ok(CoupledSample {
            base: self.clone(),
            coords,
            weight_u,
            occupation_u,
            edges,
        })
    }
}

/// A sample at a dominating parameter set with one mark per potential edge.
#[derive(Clone, Debug)]
pub struct CoupledSample {
    base: ModelSpec,
    coords: Vec<f64>,
    weight_u: Option<Vec<f64>>,
    occupation_u: Option<Vec<f64>>,
    edges: Vec<MarkedEdge>,
}

impl CoupledSample {
    pub fn base(&self) -> &ModelSpec {
        &self.base
    }

    pub fn marked_edges(&self) -> &[MarkedEdge] {
        &self.edges
    }

    fn dim(&self) -> usize {
        match &self.base {
            ModelSpec::Continuum { params, .. } => params.d,
            other => other.lattice().map_or(1, LatticeBox::d),
        }
    }

    pub fn num_nodes(&self) -> usize {
        self.coords.len() / self.dim()
    }

    /// The graph of `spec`, which must be the base model (or the homogeneous
    /// counterpart of a heterogeneous base) at parameters whose every edge
    /// probability is at most the base's.
    pub fn realize(&self, spec: &ModelSpec) -> Result<Graph> {
        spec.validate()?;
        let n = self.num_nodes();
        let d = self.dim();
        let positions = Positions::new(d, self.coords.clone())?;
        let not_dominated = || {
            Error::Unsupported(format!(
                "{spec:?} is not dominated by the coupled base {:?}",
                self.base
            ))
        };
        let keep: Box<dyn Fn(&MarkedEdge) -> bool + '_>;
        let mut weights = None;
        let mut occupied = None;
        match (&self.base, spec) {
            (ModelSpec::NnBond { lattice: l0, p: p0 }, ModelSpec::NnBond { lattice, p }) => {
                if l0 != lattice || p > p0 {
                    return Err(not_dominated());
                }
                keep = Box::new(move |e| e.mark < *p);
            }
            (
                ModelSpec::HomLrp {
                    lattice: l0,
                    params: q0,
                    ..
                },
                ModelSpec::HomLrp {
                    lattice, params, ..
                },
            ) => {
                if l0 != lattice
                    || params.alpha != q0.alpha
                    || params.p > q0.p
                    || params.lambda > q0.lambda
                {
                    return Err(not_dominated());
                }
                let geo = self.geometry();
                let kernel = hom_kernel(params);
                keep = Box::new(move |e| {
                    e.mark < kernel.prob(1.0, geo.distance(e.u as usize, e.v as usize))
                });
            }
            (
                ModelSpec::HetLrp {
                    lattice: l0,
                    params: q0,
                    ..
                },
                ModelSpec::HetLrp {
                    lattice, params, ..
                },
            ) => {
                if l0 != lattice
                    || params.alpha != q0.alpha
                    || params.lambda > q0.lambda
                    || params.beta < q0.beta
                {
                    return Err(not_dominated());
                }
                let w: Vec<f64> = self
                    .weight_u
                    .as_ref()
                    .expect("weights")
                    .iter()
                    .map(|&u| pareto_weight(u, params.beta))
                    .collect();
                let geo = self.geometry();
                let kernel = Kernel {
                    lambda: params.lambda,
                    alpha: params.alpha,
                    nn: None,
                };
                let wk = w.clone();
                keep = Box::new(move |e| {
                    let (u, v) = (e.u as usize, e.v as usize);
                    e.mark < kernel.prob(wk[u] * wk[v], geo.distance(u, v))
                });
                weights = Some(w);
            }
            (
                ModelSpec::HetLrp {
                    lattice: l0,
                    params: q0,
                    ..
                },
                ModelSpec::HomLrp {
                    lattice, params, ..
                },
            ) => {
                // weights are at least one, so the base's nearest-neighbour
                // probability is at least 1 − e^{−λ}
                let nn_floor = -(-q0.lambda).exp_m1();
                if l0 != lattice
                    || params.alpha != q0.alpha
                    || params.lambda > q0.lambda
                    || params.p > nn_floor
                {
                    return Err(not_dominated());
                }
                let geo = self.geometry();
                let kernel = hom_kernel(params);
                keep = Box::new(move |e| {
                    e.mark < kernel.prob(1.0, geo.distance(e.u as usize, e.v as usize))
                });
            }
            (
                ModelSpec::SiteBond {
                    lattice: l0,
                    params: q0,
                    ..
                },
                ModelSpec::SiteBond {
                    lattice, params, ..
                },
            ) => {
                if l0 != lattice
                    || params.alpha != q0.alpha
                    || params.lambda_star > q0.lambda_star
                    || params.r_star > q0.r_star
                {
                    return Err(not_dominated());
                }
                let occ: Vec<bool> = self
                    .occupation_u
                    .as_ref()
                    .expect("occupation")
                    .iter()
                    .map(|&o| o < params.r_star)
                    .collect();
                let geo = self.geometry();
                let kernel = Kernel {
                    lambda: params.lambda_star,
                    alpha: params.alpha,
                    nn: None,
                };
                let oc = occ.clone();
                keep = Box::new(move |e| {
                    let (u, v) = (e.u as usize, e.v as usize);
                    oc[u] && oc[v] && e.mark < kernel.prob(1.0, geo.distance(u, v))
                });
                occupied = Some(occ);
            }
            (ModelSpec::Continuum { params: q0, .. }, ModelSpec::Continuum { params, .. }) => {
                let same_points = q0.d == params.d
                    && q0.nu == params.nu
                    && q0.side == params.side
                    && q0.plant_origin == params.plant_origin;
                let marks_ok =
                    params.homogeneous_marks || (!q0.homogeneous_marks && params.beta >= q0.beta);
                if !same_points
                    || !marks_ok
                    || params.alpha != q0.alpha
                    || params.lambda > q0.lambda
                {
                    return Err(not_dominated());
                }
                let w =
                    continuum::continuum_weights(params, self.weight_u.as_ref().expect("weights"));
                let geo = self.geometry();
                let kernel = Kernel {
                    lambda: params.lambda,
                    alpha: params.alpha,
                    nn: None,
                };
                let wk = w.clone();
                keep = Box::new(move |e| {
                    let (u, v) = (e.u as usize, e.v as usize);
                    let s = wk.as_ref().map_or(1.0, |w| w[u] * w[v]);
                    e.mark < kernel.prob(s, geo.distance(u, v))
                });
                weights = w;
            }
            _ => return Err(not_dominated()),
        }
        let mut builder = GraphBuilder::new(n);
        for e in self.edges.iter().filter(|e| keep(e)) {
            builder.add_edge(e.u, e.v);
        }
        let mut g = builder.build().with_positions(positions)?;
        if let Some(w) = weights {
            g = g.with_weights(w)?;
        }
        if let Some(o) = occupied {
            g = g.with_occupied(o)?;
        }
        Ok(g)
    }

    fn geometry(&self) -> Geometry<'_> {
        match &self.base {
            ModelSpec::Continuum { params, .. } => {
                Geometry::continuum(params.d, &self.coords, params.side)
            }
            other => {
                let l = other.lattice().expect("lattice model");
                Geometry::lattice(
                    l.d(),
                    &self.coords,
                    l.side(),
                    l.boundary() == Boundary::Torus,
                )
            }
        }
    }
}

/// Typed access to a flat key-value map that records which keys were read.
struct Reader<'a> {
    map: &'a BTreeMap<String, String>,
    used: std::cell::RefCell<BTreeSet<&'static str>>,
}

impl<'a> Reader<'a> {
    fn new(map: &'a BTreeMap<String, String>) -> Self {
        Self {
            map,
            used: Default::default(),
        }
    }

    fn string(&self, key: &'static str) -> Result<Option<String>> {
        self.used.borrow_mut().insert(key);
        Ok(self.map.get(key).map(|s| s.trim().to_string()))
    }

    fn parse<T: std::str::FromStr>(&self, key: &'static str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        match self.string(key)? {
            None => Ok(None),
            Some(s) => s
                .parse()
                .map(Some)
                .map_err(|e| invalid(key, format!("`{s}`: {e}"))),
        }
    }

    fn required<T: std::str::FromStr>(&self, key: &'static str) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        self.parse(key)?.ok_or_else(|| invalid(key, "missing"))
    }

    fn unused(&self) -> Vec<String> {
        let used = self.used.borrow();
        self.map
            .keys()
            .filter(|k| !used.contains(k.as_str()))
            .cloned()
            .collect()
    }
}
