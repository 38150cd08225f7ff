//! Invariant measure of the torus chain and everything built on it.

mod experiments;
mod reversal;
mod solver;

pub use experiments::{
    moment_estimate, moment_experiment, reversal_law_test, sample_densities, DensitySample, DirectionFit,
    MomentEstimate, MomentExperiment, ReversalLawReport,
};
pub use reversal::{
    density_bound_check, density_bound_check_with, density_f, density_from, log_quotient, required_divergence,
    reversal_identity_check, reversal_identity_with, time_reverse, BoundCheck, IdentityCheck,
};
pub use solver::{
    stationary_distribution, stationary_residual, MethodChoice, SolveMethod, SolverOptions, StationarySolution,
};
