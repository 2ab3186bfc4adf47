use thiserror::Error;

/// Errors raised by the engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("truncation order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("ring mismatch: a Laurent state cannot act on a polynomial state")]
    Ring,

    #[error("specialization error: {0}")]
    Specialization(String),

    #[error("grading error: {0}")]
    Grading(String),

    #[error("μ-window not stable for n = {n}")]
    Stability { n: i64 },
}

pub type Result<T> = std::result::Result<T, Error>;
