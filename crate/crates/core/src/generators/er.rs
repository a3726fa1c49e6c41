use rand::Rng;

use super::ErParams;
use crate::error::Result;
use crate::graph::{Graph, GraphBuilder, NodeId};
use crate::rng::{purpose, RngStream};

/// Pairs are enumerated as `(v, w)` with `w < v` in lexicographic order and
/// the gaps between successive edges are geometric.
pub fn gen_er(params: &ErParams, rng: RngStream) -> Result<Graph> {
    params.validate()?;
    let n = params.n as u64;
    let mut r = rng.substream(purpose::EDGES).rng();
    let log_q = (-params.p).ln_1p();
    let mut builder = GraphBuilder::new(params.n);
    let mut v = 1u64;
    let mut w: i64 = -1;
    while v < n {
        let u = 1.0 - r.random::<f64>();
        let gap = (u.ln() / log_q).floor();
        if gap >= (n * n) as f64 {
            break;
        }
        w += 1 + gap as i64;
        while w >= v as i64 && v < n {
            w -= v as i64;
            v += 1;
        }
        if v < n {
            builder.add_edge(w as NodeId, v as NodeId);
        }
    }
    Ok(builder.build())
}
