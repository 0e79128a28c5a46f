use thiserror::Error;

/// Errors produced by the cloning toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("operation not supported for distribution kind `{0}`")]
    UnsupportedKind(&'static str),

    #[error("adaptive quadrature did not reach tolerance {tol:e} on [{a}, {b}] (estimated error {err:e})")]
    Quadrature { a: f64, b: f64, tol: f64, err: f64 },

    #[error("infeasible moments a1={a1}, a2={a2}")]
    InfeasibleMoments { a1: f64, a2: f64 },

    #[error("degenerate denominator x+ x- = {0:e}")]
    DegenerateDenominator(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("tabulated density: {0}")]
    Table(String),

    #[error("matrix is not Hermitian (deviation {0:e})")]
    NonHermitian(f64),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
