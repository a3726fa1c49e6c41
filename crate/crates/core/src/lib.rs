//! Random-graph and percolation laboratory.
//!
//! The crate is organised bottom-up:
//!
//! * [`graph`], [`union_find`], [`lattice`] and [`rng`] hold the shared
//!   representation: an immutable CSR multigraph with optional node
//!   positions and weights, connectivity, breadth-first distances, and
//!   reproducible random streams.
//! * [`generators`] samples the seven model families (Erdős–Rényi,
//!   configuration model with power-law degrees, nearest-neighbour bond
//!   percolation, homogeneous and heterogeneous long-range percolation,
//!   continuum long-range percolation and site-bond percolation).
//! * [`theory`] evaluates generating functions, the giant-component fixed
//!   point, distance exponents and the phase-diagram classifier.
//! * [`analysis`] turns sampled graphs into observables: degree tails,
//!   crossing probabilities, chemical-distance profiles, semi-clusters and
//!   renormalisation goodness.
//! * [`experiments`] runs configuration-driven Monte-Carlo sweeps.

// `!(x > 0.0)` rejects NaN along with non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod error;
pub mod experiments;
pub mod generators;
pub mod graph;
pub mod lattice;
pub mod model;
pub mod rng;
pub mod stats;
pub mod theory;
pub mod union_find;

pub use error::{Error, Result};
pub use graph::{ComponentLabeling, Distance, Graph, GraphBuilder, NodeId, Positions};
pub use lattice::{Boundary, LatticeBox};
pub use model::ModelSpec;
pub use rng::RngStream;
