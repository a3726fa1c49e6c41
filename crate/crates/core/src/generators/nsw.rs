use rand::seq::SliceRandom;
use rand::Rng;

use super::NswParams;
use crate::error::{invalid, Result};
use crate::graph::{Graph, GraphBuilder, NodeId};
use crate::rng::{purpose, RngStream};
use crate::theory::DegreeLaw;

/// Exact power law `g_k = k^{−(τ+1)}/Z` on `1..=k_max`.
pub fn nsw_degree_law(params: &NswParams) -> Result<DegreeLaw> {
    DegreeLaw::power_law(params.tau, params.k_max)
}

/// `n` i.i.d. degrees by inverse transform.
pub fn sample_degrees(law: &DegreeLaw, n: usize, rng: RngStream) -> Vec<u32> {
    let cdf = law.cdf();
    let mut r = rng.rng();
    (0..n)
        .map(|_| {
            let u: f64 = r.random();
            cdf.partition_point(|&c| c <= u).min(law.k_max()) as u32
        })
        .collect()
}

/// A uniformly random perfect matching of stubs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StubMatching {
    /// Owner of each stub, stubs grouped by node in increasing order.
    pub owners: Vec<NodeId>,
    /// Matched stub indices.
    pub pairs: Vec<(usize, usize)>,
    /// Node that received the extra stub when the total was odd.
    pub extra_stub: Option<NodeId>,
}

pub fn stub_matching(degrees: &[u32], rng: RngStream) -> Result<StubMatching> {
    if degrees.len() < 2 {
        return Err(invalid("degrees", "need at least two nodes"));
    }
    if degrees.iter().all(|&k| k == 0) {
        return Err(invalid("degrees", "all degrees are zero"));
    }
    let mut r = rng.rng();
    let mut owners: Vec<NodeId> =
        Vec::with_capacity(degrees.iter().map(|&k| k as usize).sum::<usize>() + 1);
    for (x, &k) in degrees.iter().enumerate() {
        owners.extend(std::iter::repeat_n(x as NodeId, k as usize));
    }
    let extra_stub = if owners.len() % 2 == 1 {
        let x = r.random_range(0..degrees.len()) as NodeId;
        let at = owners.partition_point(|&o| o <= x);
        owners.insert(at, x);
        Some(x)
    } else {
        None
    };
    let mut order: Vec<usize> = (0..owners.len()).collect();
    order.shuffle(&mut r);
    let pairs = order.chunks_exact(2).map(|c| (c[0], c[1])).collect();
    Ok(StubMatching {
        owners,
        pairs,
        extra_stub,
    })
}

#[derive(Clone, Debug)]
pub struct MolloyReed {
    pub graph: Graph,
    pub self_loops: usize,
    pub parallel_edges: usize,
    pub extra_stub: Option<NodeId>,
}

/// Configuration-model multigraph on the given degree sequence.
pub fn molloy_reed(degrees: &[u32], rng: RngStream) -> Result<MolloyReed> {
    let matching = stub_matching(degrees, rng)?;
    let mut builder = GraphBuilder::with_capacity(degrees.len(), matching.pairs.len());
    for &(a, b) in &matching.pairs {
        builder.add_edge(matching.owners[a], matching.owners[b]);
    }
    let graph = builder.build();
    let (_, report) = graph.simplify();
    Ok(MolloyReed {
        graph,
        self_loops: report.self_loops,
        parallel_edges: report.parallel_edges,
        extra_stub: matching.extra_stub,
    })
}

pub fn gen_nsw(params: &NswParams, rng: RngStream) -> Result<MolloyReed> {
    params.validate()?;
    let law = nsw_degree_law(params)?;
    let degrees = sample_degrees(&law, params.n, rng.substream(purpose::DEGREES));
    molloy_reed(&degrees, rng.substream(purpose::MATCHING))
}
