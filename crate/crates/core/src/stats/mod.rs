//! Estimators and tests shared by the experiments.

mod bootstrap;
mod chisq;
mod hill;
mod ks;

pub use bootstrap::{bootstrap_ci, bootstrap_mean, Estimate};
pub use chisq::chi_square_test;
pub use hill::{default_hill_k, hill_estimator, TailIndexReport};
pub use ks::{beta_cdf, kolmogorov_survival, ks_test, ks_test_beta, GoodnessOfFit, KS_MIN_SAMPLES_FOR_P};

/// Sample mean and standard error of the mean.
pub fn mean_and_se(samples: &[f64]) -> (f64, f64) {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    if samples.len() < 2 {
        return (mean, f64::NAN);
    }
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}
