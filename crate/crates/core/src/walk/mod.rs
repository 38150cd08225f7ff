//! Walks in Dirichlet environments: quenched and annealed simulation, exact
//! path probabilities, the two-site trap and regime experiments.

mod paths;
mod regime;
mod trajectory;
mod trap;

pub use paths::{annealed_path_probability, crossing_counts, enumerate_paths, reinforcement_path_probability};
pub use regime::{
    range_fraction_experiment, regime_experiment, simulate_replica, CheckpointEstimate, RegimeReport, WalkMode,
    MIN_REGIME_STEPS,
};
pub use trajectory::{simulate_annealed_reinforced, simulate_quenched, Trajectory};
pub use trap::{
    trap_green_quenched, trap_tail_experiment, TrapGreen, TrapTailReport, HILL_REGIME_LIMIT, MIN_TRAP_REPLICAS,
};
