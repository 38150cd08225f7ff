use std::path::{Path, PathBuf};

use rwde::flows::Certification;
use serde::{Deserialize, Serialize};

use rwde::Weights;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EnvFormat {
    Csv,
    Binary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeName {
    Annealed,
    Quenched,
}

/// Experiment configuration. Every field except `schema` is optional;
/// commands fill in their own defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Weights>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Torus side for single-torus commands.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub side: Option<usize>,
    /// Torus sides for sweeps.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sides: Option<Vec<usize>>,
    /// Walk length.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
    /// Additional walk lengths read off the same trajectories.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub checkpoints: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub replicas: Option<usize>,
    /// Moment orders, or the flow strength for `flow`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_iterations: Option<usize>,
    /// Curves per dispersed unit flow.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radii: Option<Vec<usize>>,
    /// Direction whose edge at the origin is boosted by kappa.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boost: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<ModeName>,
    /// Environment file for `stationary`; sampled when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub environment: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<EnvFormat>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path_length: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certification: Option<Certification>,
    /// Hill order statistics.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hill_k: Option<usize>,
}

impl ExperimentConfig {
    pub fn new() -> Self {
        ExperimentConfig {
            schema: SCHEMA_VERSION,
            ..Default::default()
        }
    }

    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        let cfg: ExperimentConfig = serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.schema != SCHEMA_VERSION {
            return Err(format!(
                "unsupported schema {} (expected {SCHEMA_VERSION})",
                self.schema
            ));
        }
        let sides = self.side.iter().chain(self.sides.iter().flatten());
        if let Some(s) = sides.into_iter().find(|&&s| !(3..=256).contains(&s)) {
            return Err(format!("torus side {s} outside [3, 256]"));
        }
        if let Some(r) = self.replicas.filter(|&r| r < 2) {
            return Err(format!("replicas = {r}, need at least 2"));
        }
        if let Some(n) = self.steps.filter(|&n| n == 0) {
            return Err(format!("steps = {n}, need at least 1"));
        }
        if self.checkpoints.iter().flatten().any(|&c| c == 0) {
            return Err("checkpoints must be positive".into());
        }
        if let Some(p) = self.p.iter().flatten().find(|p| !(p.is_finite() && **p >= 0.0)) {
            return Err(format!("moment order {p} must be finite and nonnegative"));
        }
        if let Some(t) = self.tolerance.filter(|t| !(*t > 0.0 && *t < 1.0)) {
            return Err(format!("tolerance {t} outside (0, 1)"));
        }
        if self.samples == Some(0) || self.max_iterations == Some(0) {
            return Err("samples and max_iterations must be positive".into());
        }
        if let Some(r) = self.radii.iter().flatten().find(|&&r| !(2..=32).contains(&r)) {
            return Err(format!("radius {r} outside [2, 32]"));
        }
        if let (Some(b), Some(w)) = (self.boost, &self.weights) {
            if b >= w.degree() {
                return Err(format!("boost direction {b} out of range"));
            }
        }
        if let Some(l) = self.path_length.filter(|&l| l > 6) {
            return Err(format!("path_length {l} above 6"));
        }
        Ok(())
    }
}
