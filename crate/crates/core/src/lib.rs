//! Bootstrap percolation on Chung-Lu random graphs.
//!
//! A vertex set `[n]` carries positive weights `w_1 <= ... <= w_n` with total
//! weight `W`; each pair `{u,v}` is an edge independently with probability
//! `min(w_u w_v / W, 1)`. Bootstrap percolation with infection threshold `r`
//! starts from a random seed set and infects, round by round, every vertex
//! with at least `r` infected neighbours.
//!
//! The crate has four parts:
//!
//! * [`weights`] - weight sequences, generators, and every closed-form
//!   quantity derived from them: the heavy bound `psi`, the sparse and dense
//!   candidate thresholds, tail-condition checks, breeding grounds, nucleus
//!   bounds and layer plans.
//! * [`graph`] - exact sampling of the Chung-Lu graph, both a skip-sampling
//!   generator and a naive reference sampler.
//! * [`percolation`] - the bootstrap engine, its restricted variant, and a
//!   brute-force oracle.
//! * [`experiments`] - Monte-Carlo sweeps over the initial infection rate,
//!   transition estimation, and regime diagnostics.
//!
//! All types are immutable after construction and all operations are pure
//! functions of their inputs; simulations are deterministic given a seed.

pub mod error;
pub mod experiments;
pub mod graph;
pub mod percolation;
pub mod rng;
pub mod sum;
pub mod weights;

pub use error::{Error, Result};
pub use weights::{ExampleVariant, WeightSequence};
