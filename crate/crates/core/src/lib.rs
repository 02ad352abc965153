//! Locally edge-differentially private graph algorithms built on the
//! Multidimensional AboveThreshold (MAT) mechanism.
//!
//! The crate is organised bottom-up:
//!
//! * [`graph`] holds the simple undirected [`Graph`], edge-list I/O,
//!   generators, and the exact non-private oracles (core numbers,
//!   densest subgraph by enumeration, degeneracy).
//! * [`noise`] provides seedable, order-independent Laplace and geometric
//!   substreams, plus a zero-noise mode that turns every mechanism into its
//!   deterministic counterpart.
//! * [`mat`] is the MAT engine: `d` noisy-threshold monitors that each
//!   answer `⊥` until their first `⊤` and then stop.
//! * [`kcore`], [`densest`], [`ordering`] and [`coloring`] are the private
//!   algorithms. Every one of them is a sequence of MAT queries, and every one
//!   returns the public [`Transcript`] alongside its output.
//! * [`eval`] compares outputs against the exact oracles and the additive
//!   error bounds.

pub mod coloring;
pub mod densest;
mod error;
pub mod eval;
pub mod graph;
pub mod kcore;
pub mod mat;
pub mod noise;
pub mod ordering;

pub use error::{Error, Result};
pub use graph::Graph;
pub use mat::{Answer, MatConfig, MatState, Transcript};
pub use noise::{NoiseSource, Scale};
