use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("quadrature did not converge: estimate {estimate:e}, error {error:e} after {intervals} intervals")]
    Quadrature {
        estimate: f64,
        error: f64,
        intervals: usize,
    },

    #[error("numerical instability: {0}")]
    Instability(String),

    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("graph size {n} exceeds the naive sampler limit {limit}; pass the override flag to force it")]
    SizeGuard { n: usize, limit: usize },

    #[error("insufficient tail: {0}")]
    InsufficientTail(String),

    #[error("graphs of different sizes in one histogram ({0} vs {1})")]
    MixedSizes(usize, usize),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for the numerical failure family (quadrature, instability,
    /// non-convergence, insufficient tail).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Quadrature { .. }
                | Error::Instability(_)
                | Error::NonConvergence { .. }
                | Error::InsufficientTail(_)
        )
    }
}
