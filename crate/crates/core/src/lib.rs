//! Random walks in Dirichlet environment on `Z^d` and its tori.
//!
//! The crate is a small laboratory around one model: i.i.d. Dirichlet exit
//! probabilities at every site of a lattice. It contains
//!
//! * [`lattice`]: torus graphs, weights, Dirichlet sampling and exact moments,
//! * [`stationary`]: the invariant measure of the torus chain, the density
//!   `f_N`, time reversal and the associated identities,
//! * [`flows`]: max-flow machinery, dispersed unit flows and the bounded
//!   `L2` flow construction,
//! * [`walk`]: quenched and annealed trajectories, traps and regime
//!   experiments,
//! * [`stats`]: the estimators the experiments report with.
//!
//! Every Monte Carlo entry point takes a master seed; replica `k` draws from a
//! stream derived from `(seed, k)`, so results do not depend on how many
//! worker threads run them.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod flows;
pub mod lattice;
pub mod par;
pub mod rng;
pub mod stationary;
pub mod stats;
pub mod walk;

pub use error::{Error, ErrorKind, Result};
pub use lattice::{EdgeField, Environment, TorusGraph, VertexField, Weights};
