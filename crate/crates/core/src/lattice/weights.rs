use serde::{Deserialize, Serialize};

use super::capacities::LatticeCapacities;
use crate::error::{Error, Result};

/// Dirichlet weights `(alpha_1, ..., alpha_2d)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawWeights", into = "RawWeights")]
pub struct Weights {
    dim: usize,
    alpha: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawWeights {
    dimension: usize,
    alpha: Vec<f64>,
}

impl TryFrom<RawWeights> for Weights {
    type Error = Error;

    fn try_from(raw: RawWeights) -> Result<Self> {
        Weights::new(raw.dimension, raw.alpha)
    }
}

impl From<Weights> for RawWeights {
    fn from(w: Weights) -> Self {
        RawWeights {
            dimension: w.dim,
            alpha: w.alpha,
        }
    }
}

/// Long-run behaviour predicted from `(kappa, d_alpha)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    /// `kappa <= 1`: finite traps slow the walk to zero speed.
    ZeroSpeed,
    /// `kappa > 1` and nonzero drift: nonzero limiting velocity.
    Ballistic,
    /// `kappa > 1` and zero drift: zero speed, every coordinate oscillates.
    SymmetricRecurrentBehavior,
}

impl Regime {
    pub fn label(self) -> &'static str {
        match self {
            Regime::ZeroSpeed => "zero-speed",
            Regime::Ballistic => "ballistic",
            Regime::SymmetricRecurrentBehavior => "symmetric-recurrent-behavior",
        }
    }
}

impl Weights {
    pub fn new(dim: usize, alpha: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidWeights("dimension must be at least 1".into()));
        }
        if alpha.len() != 2 * dim {
            return Err(Error::InvalidWeights(format!(
                "expected {} weights for dimension {dim}, got {}",
                2 * dim,
                alpha.len()
            )));
        }
        if let Some((i, a)) = alpha.iter().enumerate().find(|(_, a)| !(a.is_finite() && **a > 0.0)) {
            return Err(Error::InvalidWeights(format!(
                "weight {} is {a}, must be finite and strictly positive",
                i + 1
            )));
        }
        Ok(Weights { dim, alpha })
    }

    /// All `2d` weights equal to `value`.
    pub fn uniform(dim: usize, value: f64) -> Result<Self> {
        Weights::new(dim, vec![value; 2 * dim])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        2 * self.dim
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn get(&self, dir: usize) -> f64 {
        self.alpha[dir]
    }

    /// `alpha_0`, the total weight exiting a site.
    pub fn total(&self) -> f64 {
        self.alpha.iter().sum()
    }

    fn axis_pair(&self, axis: usize) -> f64 {
        self.alpha[axis] + self.alpha[axis + self.dim]
    }

    /// Smallest axis maximizing `alpha_i + alpha_{i+d}`; its trap is `{0, e_i}`.
    pub fn trap_direction(&self) -> usize {
        (0..self.dim).fold(0, |best, i| {
            if self.axis_pair(i) > self.axis_pair(best) {
                i
            } else {
                best
            }
        })
    }

    /// `kappa = 2 alpha_0 - max_i (alpha_i + alpha_{i+d})`: total weight of
    /// the edges leaving the strongest two-site trap.
    pub fn kappa(&self) -> f64 {
        2.0 * self.total() - self.axis_pair(self.trap_direction())
    }

    /// Mean first-step drift `d_alpha`, one component per axis.
    pub fn mean_drift(&self) -> Vec<f64> {
        let total = self.total();
        (0..self.dim)
            .map(|j| (self.alpha[j] - self.alpha[j + self.dim]) / total)
            .collect()
    }

    /// Weights of the time-reversed environment: directions `j` and `j+d` swapped.
    pub fn reversed(&self) -> Weights {
        let d = self.dim;
        let alpha = (0..2 * d).map(|j| self.alpha[(j + d) % (2 * d)]).collect();
        Weights { dim: d, alpha }
    }

    /// Capacities equal to the weights, except on the edge `(0, e_dir)` which
    /// is increased by `kappa`.
    pub fn boosted(&self, dir: usize) -> Result<LatticeCapacities> {
        if dir >= self.degree() {
            return Err(Error::InvalidArgument(format!(
                "direction {dir} out of range for dimension {}",
                self.dim
            )));
        }
        let mut caps = LatticeCapacities::from_weights(self);
        caps.set_override(vec![0; self.dim], dir, self.alpha[dir] + self.kappa());
        Ok(caps)
    }

    pub fn predicted_regime(&self) -> Regime {
        if self.kappa() <= 1.0 {
            Regime::ZeroSpeed
        } else if self.mean_drift().iter().all(|&v| v == 0.0) {
            Regime::SymmetricRecurrentBehavior
        } else {
            Regime::Ballistic
        }
    }

    /// Applies a permutation of the coordinate axes consistently to both
    /// halves of the weight vector.
    pub fn permute_axes(&self, perm: &[usize]) -> Result<Weights> {
        let d = self.dim;
        let mut seen = vec![false; d];
        if perm.len() != d || perm.iter().any(|&p| p >= d || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::InvalidArgument("not a permutation of the axes".into()));
        }
        let mut alpha = vec![0.0; 2 * d];
        for (i, &p) in perm.iter().enumerate() {
            alpha[p] = self.alpha[i];
            alpha[p + d] = self.alpha[i + d];
        }
        Weights::new(d, alpha)
    }
}
