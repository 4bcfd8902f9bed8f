use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("parameter `{name}` out of range: {value}")]
    Parameter { name: &'static str, value: f64 },

    #[error("argument outside the domain of {op}: {value}")]
    Domain { op: &'static str, value: f64 },

    #[error("{op} is not supported for {family}")]
    UnsupportedFamily { op: &'static str, family: &'static str },

    #[error("quadrature did not converge: error estimate {achieved:e} exceeds tolerance {requested:e}")]
    Quadrature { achieved: f64, requested: f64 },

    #[error("root finding failed in {op}: bracket [{lo}, {hi}] after {iterations} iterations")]
    Root {
        op: &'static str,
        lo: f64,
        hi: f64,
        iterations: usize,
    },

    #[error("model validation failed: {0}")]
    Validation(String),
}
