//! Undirected multigraph in compressed sparse row form.
//!
//! Parallel edges and self-loops are representable (the configuration model
//! produces both). A self-loop at `x` contributes two entries to the
//! adjacency of `x`, so degrees follow the handshake identity
//! `sum(deg) == 2 * num_edges`.

mod clustering;
mod components;
mod distance;
pub mod edgelist;

pub use components::ComponentLabeling;
pub use distance::{BfsDistances, Distance};

use crate::error::{invalid, Result};

pub type NodeId = u32;

/// Per-node coordinates in `R^dim`, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Positions {
    dim: usize,
    coords: Vec<f64>,
}

impl Positions {
    pub fn new(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(invalid("positions", "dimension must be at least 1"));
        }
        if !coords.len().is_multiple_of(dim) {
            return Err(invalid(
                "positions",
                format!(
                    "{} coordinates do not split into rows of {dim}",
                    coords.len()
                ),
            ));
        }
        Ok(Self { dim, coords })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn get(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.coords
    }

    pub fn euclidean(&self, a: usize, b: usize) -> f64 {
        self.get(a)
            .iter()
            .zip(self.get(b))
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
            .sqrt()
    }
}

/// Counts removed by [`Graph::simplify`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SimplifyReport {
    pub self_loops: usize,
    pub parallel_edges: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<NodeId>,
    positions: Option<Positions>,
    weights: Option<Vec<f64>>,
    occupied: Option<Vec<bool>>,
}

/// Collects an edge list and freezes it into a [`Graph`].
#[derive(Clone, Debug)]
pub struct GraphBuilder {
    num_nodes: usize,
    edges: Vec<(NodeId, NodeId)>,
}

impl GraphBuilder {
    pub fn new(num_nodes: usize) -> Self {
        assert!(
            num_nodes <= NodeId::MAX as usize,
            "too many nodes for 32-bit ids"
        );
        Self {
            num_nodes,
            edges: Vec::new(),
        }
    }

    pub fn with_capacity(num_nodes: usize, edges: usize) -> Self {
        let mut b = Self::new(num_nodes);
        b.edges.reserve(edges);
        b
    }

    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn add_edge(&mut self, u: NodeId, v: NodeId) {
        debug_assert!((u as usize) < self.num_nodes && (v as usize) < self.num_nodes);
        self.edges.push((u, v));
    }

    pub fn build(self) -> Graph {
        let n = self.num_nodes;
        let mut offsets = vec![0usize; n + 1];
        for &(u, v) in &self.edges {
            offsets[u as usize + 1] += 1;
            offsets[v as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut targets = vec![0 as NodeId; offsets[n]];
        for (u, v) in self.edges {
            targets[fill[u as usize]] = v;
            fill[u as usize] += 1;
            targets[fill[v as usize]] = u;
            fill[v as usize] += 1;
        }
        Graph {
            offsets,
            targets,
            positions: None,
            weights: None,
            occupied: None,
        }
    }
}

impl Graph {
    pub fn empty(num_nodes: usize) -> Self {
        GraphBuilder::new(num_nodes).build()
    }

    /// Graph on `num_nodes` nodes with the given undirected edges.
    ///
    /// # Panics
    /// If an endpoint is out of range.
    pub fn from_edges(num_nodes: usize, edges: &[(NodeId, NodeId)]) -> Self {
        let mut b = GraphBuilder::with_capacity(num_nodes, edges.len());
        for &(u, v) in edges {
            assert!(
                (u as usize) < num_nodes && (v as usize) < num_nodes,
                "edge ({u}, {v}) out of range for {num_nodes} nodes"
            );
            b.add_edge(u, v);
        }
        b.build()
    }

    pub fn with_positions(mut self, positions: Positions) -> Result<Self> {
        if positions.len() != self.num_nodes() {
            return Err(invalid(
                "positions",
                format!("{} rows for {} nodes", positions.len(), self.num_nodes()),
            ));
        }
        self.positions = Some(positions);
        Ok(self)
    }

    pub fn with_weights(mut self, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != self.num_nodes() {
            return Err(invalid(
                "weights",
                format!("{} weights for {} nodes", weights.len(), self.num_nodes()),
            ));
        }
        if let Some(w) = weights.iter().find(|w| !(**w > 0.0) || !w.is_finite()) {
            return Err(invalid(
                "weights",
                format!("weight {w} is not a positive real"),
            ));
        }
        self.weights = Some(weights);
        Ok(self)
    }

    pub fn with_occupied(mut self, occupied: Vec<bool>) -> Result<Self> {
        if occupied.len() != self.num_nodes() {
            return Err(invalid("occupied", "mask length differs from node count"));
        }
        self.occupied = Some(occupied);
        Ok(self)
    }

    pub fn num_nodes(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn num_edges(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn degree(&self, x: NodeId) -> usize {
        self.offsets[x as usize + 1] - self.offsets[x as usize]
    }

    pub fn neighbors(&self, x: NodeId) -> &[NodeId] {
        &self.targets[self.offsets[x as usize]..self.offsets[x as usize + 1]]
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.offsets.windows(2).map(|w| w[1] - w[0]).collect()
    }

    pub fn positions(&self) -> Option<&Positions> {
        self.positions.as_ref()
    }

    pub fn weights(&self) -> Option<&[f64]> {
        self.weights.as_deref()
    }

    pub fn occupied(&self) -> Option<&[bool]> {
        self.occupied.as_deref()
    }

    /// Calls `f(u, v)` once per edge with `u <= v`. Self-loops are reported
    /// once per loop.
    pub fn for_each_edge(&self, mut f: impl FnMut(NodeId, NodeId)) {
        for u in 0..self.num_nodes() as NodeId {
            let mut loops = 0usize;
            for &v in self.neighbors(u) {
                if u < v {
                    f(u, v);
                } else if u == v {
                    loops += 1;
                    if loops.is_multiple_of(2) {
                        f(u, u);
                    }
                }
            }
        }
    }

    pub fn edges(&self) -> Vec<(NodeId, NodeId)> {
        let mut out = Vec::with_capacity(self.num_edges());
        self.for_each_edge(|u, v| out.push((u, v)));
        out
    }

    /// Copy of the graph without self-loops and with parallel edges collapsed.
    pub fn simplify(&self) -> (Graph, SimplifyReport) {
        let n = self.num_nodes();
        let mut report = SimplifyReport::default();
        let mut b = GraphBuilder::with_capacity(n, self.num_edges());
        let mut last_seen = vec![NodeId::MAX; n];
        for u in 0..n as NodeId {
            let mut loops = 0usize;
            for &v in self.neighbors(u) {
                if v == u {
                    loops += 1;
                    continue;
                }
                if v < u {
                    continue;
                }
                if last_seen[v as usize] == u {
                    report.parallel_edges += 1;
                } else {
                    last_seen[v as usize] = u;
                    b.add_edge(u, v);
                }
            }
            report.self_loops += loops / 2;
        }
        let mut g = b.build();
        g.positions = self.positions.clone();
        g.weights = self.weights.clone();
        g.occupied = self.occupied.clone();
        (g, report)
    }

    pub fn is_simple(&self) -> bool {
        self.simplify().1 == SimplifyReport::default()
    }

    /// Isomorphic copy in which node `i` becomes node `perm[i]`.
    pub fn relabel(&self, perm: &[NodeId]) -> Graph {
        let n = self.num_nodes();
        assert_eq!(perm.len(), n, "permutation length must equal node count");
        let mut b = GraphBuilder::with_capacity(n, self.num_edges());
        self.for_each_edge(|u, v| b.add_edge(perm[u as usize], perm[v as usize]));
        let mut g = b.build();
        let mut inverse = vec![0usize; n];
        for (i, &p) in perm.iter().enumerate() {
            inverse[p as usize] = i;
        }
        if let Some(pos) = &self.positions {
            let mut coords = Vec::with_capacity(pos.coords.len());
            for &old in &inverse {
                coords.extend_from_slice(pos.get(old));
            }
            g.positions = Some(Positions {
                dim: pos.dim,
                coords,
            });
        }
        if let Some(w) = &self.weights {
            g.weights = Some(inverse.iter().map(|&old| w[old]).collect());
        }
        if let Some(o) = &self.occupied {
            g.occupied = Some(inverse.iter().map(|&old| o[old]).collect());
        }
        g
    }
}
