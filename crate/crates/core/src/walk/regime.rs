use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{sample_environment, Regime, TorusGraph, Weights};
use crate::par::try_map_indexed;
use crate::rng::{domain, stream};
use crate::stats::{bootstrap_mean, Estimate};

use super::{simulate_annealed_reinforced, simulate_quenched, Trajectory};

pub const MIN_REGIME_STEPS: usize = 10_000;
const RESAMPLES: usize = 1000;

/// Which law generates trajectories.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum WalkMode {
    /// The reinforced walk, whose law is exactly the annealed law.
    Annealed,
    /// A fresh periodic environment of the given side per replica.
    Quenched { side: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckpointEstimate {
    pub steps: usize,
    /// `X_n / n`, one estimate per axis.
    pub velocity: Vec<Estimate>,
    pub range_fraction: Estimate,
    /// Per axis with nonzero drift: whether the velocity interval lies
    /// strictly on the side of the drift.
    pub sign_agreement: Vec<Option<bool>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegimeReport {
    pub weights: Weights,
    pub kappa: f64,
    pub drift: Vec<f64>,
    pub predicted: Regime,
    pub mode: WalkMode,
    pub replicas: usize,
    pub seed: u64,
    pub checkpoints: Vec<CheckpointEstimate>,
    /// Largest wrap count over replicas (quenched mode only).
    pub max_wraps: usize,
}

impl RegimeReport {
    pub fn at(&self, steps: usize) -> Option<&CheckpointEstimate> {
        self.checkpoints.iter().find(|c| c.steps == steps)
    }
}

/// Trajectory of replica `r` exactly as the experiments draw it.
pub fn simulate_replica(w: &Weights, n: usize, seed: u64, r: usize, mode: WalkMode) -> Result<Trajectory> {
    let mut rng = stream(seed, &[domain::WALK, r as u64]);
    match mode {
        WalkMode::Annealed => simulate_annealed_reinforced(w, vec![0; w.dim()], n, &mut rng),
        WalkMode::Quenched { side } => {
            let graph = TorusGraph::new(w.dim(), side)?;
            let env = sample_environment(w, &graph, &mut rng)?;
            simulate_quenched(&env, 0, n, &mut rng)
        }
    }
}

/// Velocity and range estimates at each checkpoint, all read off the same
/// trajectories of length `max(checkpoints)`.
pub fn regime_experiment(
    w: &Weights,
    checkpoints: &[usize],
    replicas: usize,
    seed: u64,
    mode: WalkMode,
) -> Result<RegimeReport> {
    let n = checkpoints.iter().copied().max().unwrap_or(0);
    if n < MIN_REGIME_STEPS || checkpoints.contains(&0) {
        return Err(Error::InvalidArgument(format!(
            "checkpoints {checkpoints:?} must be positive and reach {MIN_REGIME_STEPS}"
        )));
    }
    if replicas < 2 {
        return Err(Error::InvalidArgument("need at least two replicas".into()));
    }
    let d = w.dim();
    // per replica: (position, range) at every checkpoint, and wrap count
    let per_replica = try_map_indexed(replicas, |r| {
        let t = simulate_replica(w, n, seed, r, mode)?;
        let marks: Vec<(Vec<i64>, usize)> = checkpoints
            .iter()
            .map(|&k| {
                let p = t.prefix(k);
                (p.position, p.range)
            })
            .collect();
        Ok::<_, Error>((marks, t.wraps))
    })?;
    let drift = w.mean_drift();
    let mut out = Vec::with_capacity(checkpoints.len());
    for (ci, &k) in checkpoints.iter().enumerate() {
        let mut velocity = Vec::with_capacity(d);
        for axis in 0..d {
            let v: Vec<f64> = per_replica
                .iter()
                .map(|(m, _)| m[ci].0[axis] as f64 / k as f64)
                .collect();
            velocity.push(bootstrap_mean(
                &v,
                RESAMPLES,
                seed,
                &[domain::BOOTSTRAP, k as u64, axis as u64],
            )?);
        }
        let ranges: Vec<f64> = per_replica.iter().map(|(m, _)| m[ci].1 as f64 / k as f64).collect();
        let range_fraction = bootstrap_mean(&ranges, RESAMPLES, seed, &[domain::BOOTSTRAP, k as u64, d as u64])?;
        let sign_agreement = drift
            .iter()
            .zip(&velocity)
            .map(|(&dr, v)| {
                if dr == 0.0 {
                    None
                } else {
                    Some(if dr > 0.0 { v.ci_low > 0.0 } else { v.ci_high < 0.0 })
                }
            })
            .collect();
        out.push(CheckpointEstimate {
            steps: k,
            velocity,
            range_fraction,
            sign_agreement,
        });
    }
    Ok(RegimeReport {
        weights: w.clone(),
        kappa: w.kappa(),
        drift,
        predicted: w.predicted_regime(),
        mode,
        replicas,
        seed,
        checkpoints: out,
        max_wraps: per_replica.iter().map(|(_, w)| *w).max().unwrap_or(0),
    })
}

/// `R_n / n` at each checkpoint.
pub fn range_fraction_experiment(
    w: &Weights,
    checkpoints: &[usize],
    replicas: usize,
    seed: u64,
    mode: WalkMode,
) -> Result<Vec<(usize, Estimate)>> {
    let rep = regime_experiment(w, checkpoints, replicas, seed, mode)?;
    Ok(rep
        .checkpoints
        .into_iter()
        .map(|c| (c.steps, c.range_fraction))
        .collect())
}
