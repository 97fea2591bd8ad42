use thiserror::Error;

/// Errors shared across the numerical layers of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument was outside the mathematical domain of the function.
    #[error("domain error in {func}: {msg}")]
    Domain { func: &'static str, msg: String },

    /// A series or iterative scheme failed to converge within its budget.
    #[error("{func} did not converge after {iterations} iterations")]
    NonConvergent { func: &'static str, iterations: usize },

    /// The result would exceed the representable floating-point range.
    #[error("overflow in {func} for argument {arg}")]
    Overflow { func: &'static str, arg: f64 },

    /// A configuration invariant was violated.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// A parameter combination the implementation deliberately does not support.
    #[error("unsupported parameter in {func}: {msg}")]
    Unsupported { func: &'static str, msg: String },
}

impl Error {
    pub fn domain(func: &'static str, msg: impl Into<String>) -> Self {
        Error::Domain {
            func,
            msg: msg.into(),
        }
    }

    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
