use rand::Rng;
use rand_distr::{Distribution, Poisson};

use super::lattice_models::{pareto_weight, weight_uniforms};
use super::pairs::{sample_pairs, EdgeSink, Geometry, Kernel, PairProblem, PairSampling};
use super::ContinuumParams;
use crate::error::{Error, Result};
use crate::graph::{Graph, GraphBuilder, Positions};
use crate::rng::{purpose, RngStream};

pub fn gen_continuum(params: &ContinuumParams, rng: RngStream) -> Result<Graph> {
    gen_continuum_with(params, PairSampling::Auto, rng)
}

/// Poisson points in `[−L/2, L/2]^d`; with `plant_origin` the extra particle
/// at the origin is node 0.
pub fn gen_continuum_with(
    params: &ContinuumParams,
    sampling: PairSampling,
    rng: RngStream,
) -> Result<Graph> {
    params.validate()?;
    let coords = continuum_points(params, rng)?;
    let n = coords.len() / params.d;
    let weights = continuum_weights(params, &weight_uniforms(n, rng));
    let mut builder = GraphBuilder::new(n);
    continuum_into(
        params,
        &coords,
        weights.as_deref(),
        sampling,
        rng,
        &mut builder,
    );
    let g = builder
        .build()
        .with_positions(Positions::new(params.d, coords)?)?;
    match weights {
        Some(w) => g.with_weights(w),
        None => Ok(g),
    }
}

pub(crate) fn continuum_points(params: &ContinuumParams, rng: RngStream) -> Result<Vec<f64>> {
    let mut r = rng.substream(purpose::POINTS).rng();
    let mean = params.expected_points();
    let count = Poisson::new(mean)
        .map_err(|e| Error::InvalidParameter {
            name: "nu",
            reason: format!("Poisson mean {mean}: {e}"),
        })?
        .sample(&mut r);
    if count > u32::MAX as f64 / 2.0 {
        return Err(Error::InvalidParameter {
            name: "nu",
            reason: format!("{count} points exceed capacity"),
        });
    }
    let count = count as usize;
    let d = params.d;
    let half = params.side / 2.0;
    let mut coords = Vec::with_capacity((count + 1) * d);
    if params.plant_origin {
        coords.extend(std::iter::repeat_n(0.0, d));
    }
    for _ in 0..count * d {
        coords.push(r.random::<f64>() * params.side - half);
    }
    Ok(coords)
}

pub(crate) fn continuum_weights(params: &ContinuumParams, uniforms: &[f64]) -> Option<Vec<f64>> {
    (!params.homogeneous_marks).then(|| {
        uniforms
            .iter()
            .map(|&u| pareto_weight(u, params.beta))
            .collect()
    })
}

pub(crate) fn continuum_into(
    params: &ContinuumParams,
    coords: &[f64],
    weights: Option<&[f64]>,
    sampling: PairSampling,
    rng: RngStream,
    sink: &mut impl EdgeSink,
) {
    let problem = PairProblem {
        geometry: Geometry::continuum(params.d, coords, params.side),
        weights,
        active: None,
        kernel: Kernel {
            lambda: params.lambda,
            alpha: params.alpha,
            nn: None,
        },
    };
    let mut r = rng.substream(purpose::EDGES).rng();
    sample_pairs(&problem, sampling, &mut r, sink);
}
