use num_complex::Complex64;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Array shapes or grid metadata are inconsistent.
    #[error("shape error: {0}")]
    Shape(String),

    /// A configuration value fails validation; the message names the field.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// An iterative process ran out of iterations.
    #[error("{what} did not converge: residual {residual:.3e} after {iterations} iterations")]
    NoConvergence {
        what: &'static str,
        iterations: usize,
        residual: f64,
    },

    /// Polynomial root finding failed; the coefficient vector is attached
    /// for post-mortem inspection.
    #[error("root finding did not converge: residual {residual:.3e} after {iterations} iterations (degree {})", coefficients.len().saturating_sub(1))]
    RootFinding {
        iterations: usize,
        residual: f64,
        coefficients: Vec<Complex64>,
    },

    /// A NaN or infinity appeared mid-run.
    #[error("non-finite value at step {step}: {context}")]
    NonFinite { step: usize, context: String },
}

pub type Result<T> = std::result::Result<T, Error>;
