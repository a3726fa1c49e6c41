use rand::Rng;

use super::pairs::{sample_pairs, EdgeSink, Geometry, Kernel, PairProblem, PairSampling};
use super::{check_probability, HetLrpParams, HomLrpParams, SiteBondParams};
use crate::error::Result;
use crate::graph::{Graph, GraphBuilder};
use crate::lattice::{Boundary, LatticeBox};
use crate::rng::{purpose, RngStream};

/// Pareto(1, β) by inverse transform of `u ∈ (0, 1]`.
pub fn pareto_weight(u: f64, beta: f64) -> f64 {
    u.powf(-1.0 / beta)
}

/// Uniforms on `(0, 1]`, one per site, from the weight substream.
pub(crate) fn weight_uniforms(n: usize, rng: RngStream) -> Vec<f64> {
    let mut r = rng.substream(purpose::WEIGHTS).rng();
    (0..n).map(|_| 1.0 - r.random::<f64>()).collect()
}

/// Uniforms on `[0, 1)`, one per site, deciding occupation.
pub(crate) fn occupation_uniforms(n: usize, rng: RngStream) -> Vec<f64> {
    let mut r = rng.substream(purpose::OCCUPATION).rng();
    (0..n).map(|_| r.random::<f64>()).collect()
}

pub fn gen_nn_bond(lattice: &LatticeBox, p: f64, rng: RngStream) -> Result<Graph> {
    check_probability("p", p)?;
    let mut builder = GraphBuilder::new(lattice.num_sites());
    nn_bond_into(lattice, p, rng, &mut builder);
    builder.build().with_positions(lattice.positions())
}

pub(crate) fn nn_bond_into(lattice: &LatticeBox, p: f64, rng: RngStream, sink: &mut impl EdgeSink) {
    let mut r = rng.substream(purpose::EDGES).rng();
    lattice.for_each_nn_pair(|x, y| {
        let u: f64 = r.random();
        if u < p {
            sink.push(x, y, u);
        }
    });
}

pub fn gen_hom_lrp(lattice: &LatticeBox, params: &HomLrpParams, rng: RngStream) -> Result<Graph> {
    gen_hom_lrp_with(lattice, params, PairSampling::Auto, rng)
}

pub fn gen_hom_lrp_with(
    lattice: &LatticeBox,
    params: &HomLrpParams,
    sampling: PairSampling,
    rng: RngStream,
) -> Result<Graph> {
    params.validate()?;
    let positions = lattice.positions();
    let mut builder = GraphBuilder::new(lattice.num_sites());
    lrp_into(
        lattice,
        positions.as_slice(),
        hom_kernel(params),
        None,
        None,
        sampling,
        rng,
        &mut builder,
    );
    builder.build().with_positions(positions)
}

pub(crate) fn hom_kernel(params: &HomLrpParams) -> Kernel {
    Kernel {
        lambda: params.lambda,
        alpha: params.alpha,
        nn: Some(params.p),
    }
}

pub fn gen_het_lrp(lattice: &LatticeBox, params: &HetLrpParams, rng: RngStream) -> Result<Graph> {
    gen_het_lrp_with(lattice, params, PairSampling::Auto, rng)
}

pub fn gen_het_lrp_with(
    lattice: &LatticeBox,
    params: &HetLrpParams,
    sampling: PairSampling,
    rng: RngStream,
) -> Result<Graph> {
    params.validate()?;
    let positions = lattice.positions();
    let weights: Vec<f64> = weight_uniforms(lattice.num_sites(), rng)
        .into_iter()
        .map(|u| pareto_weight(u, params.beta))
        .collect();
    let mut builder = GraphBuilder::new(lattice.num_sites());
    let kernel = Kernel {
        lambda: params.lambda,
        alpha: params.alpha,
        nn: None,
    };
    lrp_into(
        lattice,
        positions.as_slice(),
        kernel,
        Some(&weights),
        None,
        sampling,
        rng,
        &mut builder,
    );
    builder
        .build()
        .with_positions(positions)?
        .with_weights(weights)
}

pub fn gen_site_bond(
    lattice: &LatticeBox,
    params: &SiteBondParams,
    rng: RngStream,
) -> Result<Graph> {
    gen_site_bond_with(lattice, params, PairSampling::Auto, rng)
}

pub fn gen_site_bond_with(
    lattice: &LatticeBox,
    params: &SiteBondParams,
    sampling: PairSampling,
    rng: RngStream,
) -> Result<Graph> {
    params.validate()?;
    let positions = lattice.positions();
    let occupied: Vec<bool> = occupation_uniforms(lattice.num_sites(), rng)
        .into_iter()
        .map(|u| u < params.r_star)
        .collect();
    let mut builder = GraphBuilder::new(lattice.num_sites());
    let kernel = Kernel {
        lambda: params.lambda_star,
        alpha: params.alpha,
        nn: None,
    };
    lrp_into(
        lattice,
        positions.as_slice(),
        kernel,
        None,
        Some(&occupied),
        sampling,
        rng,
        &mut builder,
    );
    builder
        .build()
        .with_positions(positions)?
        .with_occupied(occupied)
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn lrp_into(
    lattice: &LatticeBox,
    coords: &[f64],
    kernel: Kernel,
    weights: Option<&[f64]>,
    active: Option<&[bool]>,
    sampling: PairSampling,
    rng: RngStream,
    sink: &mut impl EdgeSink,
) {
    let problem = PairProblem {
        geometry: Geometry::lattice(
            lattice.d(),
            coords,
            lattice.side(),
            lattice.boundary() == Boundary::Torus,
        ),
        weights,
        active,
        kernel,
    };
    let mut r = rng.substream(purpose::EDGES).rng();
    sample_pairs(&problem, sampling, &mut r, sink);
}
