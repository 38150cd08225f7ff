use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailIndexReport {
    /// Number of upper order statistics used.
    pub k: usize,
    pub sample_size: usize,
    pub estimate: f64,
    /// Asymptotic 95% interval `estimate * (1 ± 1.96 / sqrt(k))`.
    pub ci_low: f64,
    pub ci_high: f64,
    /// `(k, estimate)` over a grid around the chosen `k`.
    pub sensitivity: Vec<(usize, f64)>,
}

/// `k = n^0.6`, the default number of order statistics.
pub fn default_hill_k(n: usize) -> usize {
    (n as f64).powf(0.6).floor() as usize
}

fn hill_on_sorted(desc: &[f64], k: usize) -> Result<f64> {
    let threshold = desc[k];
    let sum: f64 = desc[..k].iter().map(|x| (x / threshold).ln()).sum();
    if !(sum > 0.0) {
        return Err(Error::DegenerateSample(format!(
            "top {k} order statistics are all equal"
        )));
    }
    Ok(k as f64 / sum)
}

/// Hill estimate `k / sum_{j<=k} ln(X_(j) / X_(k+1))` of the tail index,
/// from the `k` largest of `samples`.
pub fn hill_estimator(samples: &[f64], k: usize) -> Result<TailIndexReport> {
    if k < 10 {
        return Err(Error::InvalidArgument(format!("k = {k} < 10")));
    }
    if k >= samples.len() {
        return Err(Error::InvalidArgument(format!(
            "k = {k} must be below the sample size {}",
            samples.len()
        )));
    }
    if let Some(x) = samples.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
        return Err(Error::InvalidArgument(format!("sample {x} is not positive and finite")));
    }
    let mut desc = samples.to_vec();
    desc.sort_by(|a, b| b.total_cmp(a));
    let estimate = hill_on_sorted(&desc, k)?;
    let half_width = 1.96 / (k as f64).sqrt();
    let mut sensitivity = Vec::new();
    for kk in [k / 4, k / 2, k, 2 * k, 4 * k] {
        if kk >= 10 && kk < desc.len() {
            if let Ok(est) = hill_on_sorted(&desc, kk) {
                sensitivity.push((kk, est));
            }
        }
    }
    Ok(TailIndexReport {
        k,
        sample_size: samples.len(),
        estimate,
        ci_low: estimate * (1.0 - half_width),
        ci_high: estimate * (1.0 + half_width),
        sensitivity,
    })
}
