use num_complex::Complex64;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An input violated a documented precondition.
    #[error("invalid input: {0}")]
    Domain(String),

    #[error("quadrature did not converge: estimate {value} with error {error:e}")]
    Quadrature { value: Complex64, error: f64 },

    #[error(
        "mode sum did not converge after {terms} terms: partial {partial}, tail estimate {tail_estimate:e}"
    )]
    Sum {
        partial: Complex64,
        terms: usize,
        tail_estimate: f64,
    },

    /// A ratio whose denominator vanished to working precision.
    #[error("denominator underflow in {0}")]
    Underflow(String),

    /// A quantity that must be real or traceless by construction was not.
    #[error("consistency check failed: {0}")]
    Consistency(String),

    #[error("unknown strategy '{name}' for {family}; known: {known}")]
    UnknownStrategy {
        family: &'static str,
        name: String,
        known: String,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub(crate) fn require(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Domain(msg()))
    }
}
