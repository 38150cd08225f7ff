use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid environment: {0}")]
    InvalidEnvironment(String),

    #[error("field length {found} does not match graph size {expected}")]
    FieldLength { expected: usize, found: usize },

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("moment is not integrable: {0}")]
    Integrability(String),

    #[error("stationary solver did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("stationary measure has a nonpositive entry at vertex {vertex}")]
    NonPositiveMeasure { vertex: usize },

    #[error("divergence condition violated: max deviation {max_error:e}")]
    DivergenceCondition { max_error: f64 },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("flow problem infeasible: cut of capacity {cut_capacity} below demand {demand} ({} vertices in K)", vertices.len())]
    Infeasible {
        cut_capacity: f64,
        demand: f64,
        vertices: Vec<usize>,
    },

    #[error("degenerate sample: {0}")]
    DegenerateSample(String),

    #[error("invalid distribution parameters: {0}")]
    InvalidShape(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

/// Coarse grouping used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Bad user input.
    Input,
    /// A numerical routine failed (non-convergence, underflow).
    Numerical,
    /// An internal invariant was violated; indicates a bug.
    Invariant,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::NonConvergence { .. }
            | Error::NonPositiveMeasure { .. }
            | Error::Integrability(_)
            | Error::DegenerateSample(_) => ErrorKind::Numerical,
            Error::Infeasible { .. } | Error::DivergenceCondition { .. } => ErrorKind::Invariant,
            _ => ErrorKind::Input,
        }
    }
}
