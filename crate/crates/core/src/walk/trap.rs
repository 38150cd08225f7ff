use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{DirichletSampler, Weights};
use crate::par::map_indexed;
use crate::rng::{domain, stream};
use crate::stats::{default_hill_k, hill_estimator, TailIndexReport};

/// Quantities of the walk killed on leaving the two-site trap `{0, e_i}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrapGreen {
    /// Expected visits to `0` before exit: `1 / (1 - ab)`.
    pub green: f64,
    /// Expected exit time from `0`: `(1 + a) / (1 - ab)`.
    pub exit_time: f64,
}

/// `a = omega(0, e_i)`, `b = omega(e_i, 0)`.
pub fn trap_green_quenched(a: f64, b: f64) -> Result<TrapGreen> {
    if !(a > 0.0 && a < 1.0 && b > 0.0 && b < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "trap probabilities ({a}, {b}) outside (0, 1)"
        )));
    }
    let escape = 1.0 - a * b;
    Ok(TrapGreen {
        green: 1.0 / escape,
        exit_time: (1.0 + a) / escape,
    })
}

/// Tail indices above this are too light for the Hill estimator at
/// practical sample sizes.
pub const HILL_REGIME_LIMIT: f64 = 4.0;

pub const MIN_TRAP_REPLICAS: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrapTailReport {
    pub weights: Weights,
    pub kappa: f64,
    pub trap_direction: usize,
    pub replicas: usize,
    pub seed: u64,
    pub tail: TailIndexReport,
    pub max_green: f64,
    pub out_of_regime: bool,
}

/// Samples the trap Green function over Dirichlet environments on the trap
/// realizing `kappa` and estimates its tail index.
pub fn trap_tail_experiment(w: &Weights, replicas: usize, seed: u64, k: Option<usize>) -> Result<TrapTailReport> {
    if replicas < MIN_TRAP_REPLICAS {
        return Err(Error::InvalidArgument(format!(
            "{replicas} replicas, need at least {MIN_TRAP_REPLICAS}"
        )));
    }
    let d = w.dim();
    let i0 = w.trap_direction();
    let sampler = DirichletSampler::from_weights(w);
    let deg = w.degree();
    let samples = map_indexed(replicas, |r| {
        let mut rng = stream(seed, &[domain::TRAP, r as u64]);
        let mut at_origin = vec![0.0; deg];
        let mut at_neighbor = vec![0.0; deg];
        sampler.sample_into(&mut rng, &mut at_origin);
        sampler.sample_into(&mut rng, &mut at_neighbor);
        // 1 - ab = (1 - a) + a (1 - b) with each complement summed directly,
        // which keeps relative accuracy when ab is close to 1
        let a = at_origin[i0];
        let not_a: f64 = (0..deg).filter(|&j| j != i0).map(|j| at_origin[j]).sum();
        let not_b: f64 = (0..deg).filter(|&j| j != i0 + d).map(|j| at_neighbor[j]).sum();
        1.0 / (not_a + a * not_b)
    });
    let k = k.unwrap_or_else(|| default_hill_k(replicas));
    let tail = hill_estimator(&samples, k)?;
    let kappa = w.kappa();
    Ok(TrapTailReport {
        weights: w.clone(),
        kappa,
        trap_direction: i0,
        replicas,
        seed,
        tail,
        max_green: samples.iter().copied().fold(0.0, f64::max),
        out_of_regime: kappa > HILL_REGIME_LIMIT,
    })
}
