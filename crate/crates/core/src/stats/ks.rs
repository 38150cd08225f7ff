use serde::{Deserialize, Serialize};
use statrs::function::beta::beta_reg;

use crate::error::{Error, Result};

/// Below this size the asymptotic Kolmogorov law is not trusted and no
/// p-value is reported.
pub const KS_MIN_SAMPLES_FOR_P: usize = 1000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoodnessOfFit {
    pub statistic: f64,
    pub p_value: Option<f64>,
    pub sample_size: usize,
    pub null: String,
}

/// Regularized incomplete beta `I_x(a, b)`, the Beta(a, b) CDF.
pub fn beta_cdf(x: f64, a: f64, b: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        beta_reg(a, b, x)
    }
}

/// `P(K > lambda)` for the Kolmogorov distribution.
pub fn kolmogorov_survival(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    if lambda < 1.18 {
        // P(K <= l) = sqrt(2 pi)/l sum_j exp(-(2j-1)^2 pi^2 / (8 l^2))
        let c = -std::f64::consts::PI.powi(2) / (8.0 * lambda * lambda);
        let mut cdf = 0.0;
        for j in 1..=20 {
            let m = (2 * j - 1) as f64;
            cdf += (c * m * m).exp();
        }
        (1.0 - (2.0 * std::f64::consts::PI).sqrt() / lambda * cdf).clamp(0.0, 1.0)
    } else {
        let mut total = 0.0;
        for j in 1..=100 {
            let jf = j as f64;
            let term = (-2.0 * jf * jf * lambda * lambda).exp();
            total += if j % 2 == 1 { term } else { -term };
            if term < 1e-300 {
                break;
            }
        }
        (2.0 * total).clamp(0.0, 1.0)
    }
}

/// Two-sided one-sample Kolmogorov–Smirnov test against a continuous CDF.
///
/// The p-value uses the asymptotic law with Stephens' finite-size
/// correction `(sqrt(n) + 0.12 + 0.11/sqrt(n)) D`.
pub fn ks_test<F: Fn(f64) -> f64>(samples: &[f64], cdf: F, null: String) -> Result<GoodnessOfFit> {
    if samples.is_empty() {
        return Err(Error::DegenerateSample("empty sample".into()));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    if sorted[0] == sorted[sorted.len() - 1] {
        return Err(Error::DegenerateSample("all samples equal".into()));
    }
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        d = d.max((i + 1) as f64 / n - f).max(f - i as f64 / n);
    }
    let p_value = (sorted.len() >= KS_MIN_SAMPLES_FOR_P).then(|| {
        let sn = n.sqrt();
        kolmogorov_survival((sn + 0.12 + 0.11 / sn) * d)
    });
    Ok(GoodnessOfFit {
        statistic: d,
        p_value,
        sample_size: sorted.len(),
        null,
    })
}

pub fn ks_test_beta(samples: &[f64], a: f64, b: f64) -> Result<GoodnessOfFit> {
    if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidShape(format!("Beta({a}, {b})")));
    }
    if let Some(x) = samples.iter().find(|x| !(**x > 0.0 && **x < 1.0)) {
        return Err(Error::InvalidArgument(format!("sample {x} outside (0, 1)")));
    }
    ks_test(samples, |x| beta_cdf(x, a, b), format!("Beta({a}, {b})"))
}
