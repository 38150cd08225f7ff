use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{sample_environment, TorusGraph, Weights};
use crate::par::{map_indexed, try_map_indexed};
use crate::rng::{derive_seed, domain, stream};
use crate::stats::{bootstrap_mean, ks_test_beta, GoodnessOfFit};

use super::{density_from, stationary_distribution, time_reverse, SolverOptions};

const BOOTSTRAP_RESAMPLES: usize = 1000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirectionFit {
    pub direction: usize,
    /// `(a, b)` of the Beta law predicted for the reversed environment.
    pub null_shape: (f64, f64),
    pub fit: GoodnessOfFit,
    /// Beta law of the original environment, kept as a power check.
    pub original_shape: (f64, f64),
    pub original_fit: GoodnessOfFit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReversalLawReport {
    pub weights: Weights,
    pub side: usize,
    pub replicas: usize,
    pub seed: u64,
    pub directions: Vec<DirectionFit>,
}

impl ReversalLawReport {
    pub fn min_p_value(&self) -> Option<f64> {
        self.directions
            .iter()
            .map(|d| d.fit.p_value)
            .try_fold(1.0f64, |m, p| p.map(|p| m.min(p)))
    }
}

/// Samples environments, reverses them and tests the law of the reversed
/// transition probabilities out of the origin, one direction at a time.
pub fn reversal_law_test(
    w: &Weights,
    side: usize,
    replicas: usize,
    seed: u64,
    opts: &SolverOptions,
) -> Result<ReversalLawReport> {
    if replicas < 100 {
        return Err(Error::InvalidArgument(format!(
            "{replicas} replicas, need at least 100"
        )));
    }
    let graph = TorusGraph::new(w.dim(), side)?;
    let rows: Vec<Vec<f64>> = try_map_indexed(replicas, |r| {
        let mut rng = stream(seed, &[domain::REVERSAL, side as u64, r as u64]);
        let env = sample_environment(w, &graph, &mut rng)?;
        let sol = stationary_distribution(&env, opts)?;
        let rev = time_reverse(&env, &sol.pi)?;
        Ok::<_, Error>(rev.row(0).to_vec())
    })?;
    let reversed = w.reversed();
    let total = w.total();
    let mut directions = Vec::with_capacity(w.degree());
    for dir in 0..w.degree() {
        let samples: Vec<f64> = rows.iter().map(|r| r[dir]).collect();
        let a = reversed.get(dir);
        let a0 = w.get(dir);
        directions.push(DirectionFit {
            direction: dir,
            null_shape: (a, total - a),
            fit: ks_test_beta(&samples, a, total - a)?,
            original_shape: (a0, total - a0),
            original_fit: ks_test_beta(&samples, a0, total - a0)?,
        });
    }
    Ok(ReversalLawReport {
        weights: w.clone(),
        side,
        replicas,
        seed,
        directions,
    })
}

/// One replica of `f_N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensitySample {
    pub seed: u64,
    pub side: usize,
    pub replica: usize,
    pub f_n: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentEstimate {
    pub p: f64,
    pub side: usize,
    pub replicas: usize,
    pub mean: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub seed: u64,
    /// Replicas dropped because the solver failed.
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentExperiment {
    pub weights: Weights,
    pub kappa: f64,
    pub p: f64,
    pub estimates: Vec<MomentEstimate>,
    pub rows: Vec<DensitySample>,
}

/// Samples `f_N` on `replicas` environments. Solver failures are returned
/// separately as replica indices.
pub fn sample_densities(
    w: &Weights,
    side: usize,
    replicas: usize,
    seed: u64,
    opts: &SolverOptions,
) -> Result<(Vec<DensitySample>, Vec<usize>)> {
    let graph = TorusGraph::new(w.dim(), side)?;
    let outcomes = map_indexed(replicas, |r| {
        let keys = [domain::MOMENTS, side as u64, r as u64];
        let mut rng = stream(seed, &keys);
        let env = sample_environment(w, &graph, &mut rng)?;
        let sol = stationary_distribution(&env, opts)?;
        Ok::<_, Error>(DensitySample {
            seed: derive_seed(seed, &keys),
            side,
            replica: r,
            f_n: density_from(&sol),
            residual: sol.residual,
        })
    });
    let mut rows = Vec::with_capacity(replicas);
    let mut failed = Vec::new();
    for (r, out) in outcomes.into_iter().enumerate() {
        match out {
            Ok(row) => rows.push(row),
            Err(e) if e.kind() == crate::error::ErrorKind::Numerical => failed.push(r),
            Err(e) => return Err(e),
        }
    }
    Ok((rows, failed))
}

/// Empirical `E[f_N^p]` with a bootstrap interval.
pub fn moment_estimate(rows: &[DensitySample], p: f64, seed: u64, failures: usize) -> Result<MomentEstimate> {
    if rows.len() < 2 {
        return Err(Error::DegenerateSample(format!("{} usable replicas", rows.len())));
    }
    let side = rows[0].side;
    let values: Vec<f64> = rows.iter().map(|r| r.f_n.powf(p)).collect();
    let est = bootstrap_mean(
        &values,
        BOOTSTRAP_RESAMPLES,
        seed,
        &[domain::BOOTSTRAP, side as u64, p.to_bits()],
    )?;
    Ok(MomentEstimate {
        p,
        side,
        replicas: rows.len(),
        mean: est.mean,
        ci_low: est.ci_low,
        ci_high: est.ci_high,
        seed,
        failures,
    })
}

pub fn moment_experiment(
    w: &Weights,
    sides: &[usize],
    p: f64,
    replicas: usize,
    seed: u64,
    opts: &SolverOptions,
) -> Result<MomentExperiment> {
    if !(p >= 0.0) {
        return Err(Error::InvalidArgument(format!("moment order {p} must be nonnegative")));
    }
    let mut estimates = Vec::with_capacity(sides.len());
    let mut all_rows = Vec::new();
    for &side in sides {
        let (rows, failed) = sample_densities(w, side, replicas, seed, opts)?;
        estimates.push(moment_estimate(&rows, p, seed, failed.len())?);
        all_rows.extend(rows);
    }
    Ok(MomentExperiment {
        weights: w.clone(),
        kappa: w.kappa(),
        p,
        estimates,
        rows: all_rows,
    })
}
