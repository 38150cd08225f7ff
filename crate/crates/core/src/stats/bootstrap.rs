use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::stream;

/// A point estimate with a 95% interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl Estimate {
    pub fn contains(&self, x: f64) -> bool {
        self.ci_low <= x && x <= self.ci_high
    }
}

/// Percentile bootstrap interval (2.5%, 97.5%) of `statistic`.
pub fn bootstrap_ci<R, F>(samples: &[f64], statistic: F, resamples: usize, rng: &mut R) -> Result<(f64, f64)>
where
    R: Rng + ?Sized,
    F: Fn(&[f64]) -> f64,
{
    if resamples < 200 {
        return Err(Error::InvalidArgument(format!(
            "{resamples} resamples, need at least 200"
        )));
    }
    if samples.is_empty() {
        return Err(Error::DegenerateSample("empty sample".into()));
    }
    let n = samples.len();
    let mut buf = vec![0.0; n];
    let mut stats: Vec<f64> = (0..resamples)
        .map(|_| {
            for slot in buf.iter_mut() {
                *slot = samples[rng.random_range(0..n)];
            }
            statistic(&buf)
        })
        .collect();
    stats.sort_by(f64::total_cmp);
    let pick = |q: f64| stats[((q * resamples as f64).floor() as usize).min(resamples - 1)];
    Ok((pick(0.025), pick(0.975)))
}

/// Mean with a percentile bootstrap interval widened, if needed, to contain it.
pub fn bootstrap_mean(samples: &[f64], resamples: usize, seed: u64, keys: &[u64]) -> Result<Estimate> {
    let mean_of = |s: &[f64]| s.iter().sum::<f64>() / s.len() as f64;
    let mut rng = stream(seed, keys);
    let (lo, hi) = bootstrap_ci(samples, mean_of, resamples, &mut rng)?;
    let mean = mean_of(samples);
    Ok(Estimate {
        mean,
        ci_low: lo.min(mean),
        ci_high: hi.max(mean),
    })
}
