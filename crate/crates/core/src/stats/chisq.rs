use statrs::distribution::{ChiSquared, ContinuousCDF};

use super::GoodnessOfFit;
use crate::error::{Error, Result};

/// Pearson chi-square test of observed counts against category probabilities.
pub fn chi_square_test(observed: &[u64], probs: &[f64]) -> Result<GoodnessOfFit> {
    if observed.len() != probs.len() || observed.len() < 2 {
        return Err(Error::InvalidArgument(
            "need matching category lists of length >= 2".into(),
        ));
    }
    let n: u64 = observed.iter().sum();
    if n == 0 {
        return Err(Error::DegenerateSample("no observations".into()));
    }
    let total_p: f64 = probs.iter().sum();
    let mut stat = 0.0;
    for (&o, &p) in observed.iter().zip(probs) {
        let expected = n as f64 * p / total_p;
        if !(expected > 0.0) {
            return Err(Error::InvalidArgument("category with zero expected count".into()));
        }
        stat += (o as f64 - expected).powi(2) / expected;
    }
    let dist = ChiSquared::new((observed.len() - 1) as f64).map_err(|e| Error::InvalidShape(e.to_string()))?;
    Ok(GoodnessOfFit {
        statistic: stat,
        p_value: Some(dist.sf(stat)),
        sample_size: n as usize,
        null: format!("multinomial {probs:?}"),
    })
}
