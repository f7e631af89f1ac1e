//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by the numerical kernels and solvers.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter or argument lies outside the mathematical domain of the
    /// operation (wrong Hessian order, nonpositive radius, negative weight...).
    #[error("domain error: {0}")]
    Domain(String),

    /// The operation is restricted to small problem sizes by design
    /// (brute-force oracles, exact integer binomials).
    #[error("scale error: {0}")]
    Scale(String),

    /// A sample that must be finite is NaN or infinite.
    #[error("non-finite sample at node {index} (r = {radius:e}): {value}")]
    NonFiniteSample {
        index: usize,
        radius: f64,
        value: f64,
    },

    /// Root bracketing failed: no sign change on the supplied interval.
    #[error("bracket error: {0}")]
    Bracket(String),

    /// An iterative scheme stopped before reaching its tolerance.
    #[error("no convergence: {message} (best iterate {best:e})")]
    NoConvergence { message: String, best: f64 },

    /// Step control or state blow-up inside the ODE integrator.
    #[error("stiffness error: {0}")]
    Stiffness(String),

    /// Malformed input data (CSV profiles, tables, spec strings).
    #[error("parse error: {0}")]
    Parse(String),

    /// An internal cross-check failed; indicates a numerical inconsistency.
    #[error("numerics error: {0}")]
    Numerics(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Short machine-readable tag for JSON reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Scale(_) => "scale",
            Error::NonFiniteSample { .. } => "non_finite_sample",
            Error::Bracket(_) => "bracket",
            Error::NoConvergence { .. } => "no_convergence",
            Error::Stiffness(_) => "stiffness",
            Error::Parse(_) => "parse",
            Error::Numerics(_) => "numerics",
            Error::Io(_) => "io",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
