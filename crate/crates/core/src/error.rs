use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("generator index {index} out of range 1..={m}")]
    IndexOutOfRange { index: usize, m: usize },

    #[error("dimension mismatch: expected m = {expected}, found m = {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid dimension m = {m}: {reason}")]
    InvalidDimension { m: usize, reason: &'static str },

    #[error("|epsilon| < (m-1)/2 required (m = {m}, epsilon = {epsilon})")]
    EpsilonOutOfRange { m: usize, epsilon: f64 },

    #[error("argument out of range: {0}")]
    Domain(String),

    #[error("Bessel evaluation overflow at order {order}, x = {x}")]
    Overflow { order: usize, x: f64 },

    #[error(
        "mode truncation: n_max = {n_max} leaves family n = {next_n} (order {order}) active below mu_max = {mu_max}"
    )]
    Truncation {
        n_max: usize,
        next_n: usize,
        order: usize,
        mu_max: f64,
    },

    #[error("root audit failed for family n = {n}: found {found} roots, grid shows {expected} sign changes")]
    RootAudit { n: usize, found: usize, expected: usize },

    #[error("no sign change in [{a}, {b}]")]
    NotBracketed { a: f64, b: f64 },

    #[error("tail bound {bound:e} exceeds tolerance {tol:e}")]
    TailBound { bound: f64, tol: f64 },

    #[error("s = {s} outside the convergence region s > {min}")]
    Convergence { s: f64, min: f64 },

    #[error("ill-conditioned design matrix: condition number {cond:e} exceeds {limit:e}")]
    IllConditioned { cond: f64, limit: f64 },

    #[error("too few samples: {got} for {need} basis functions")]
    TooFewSamples { got: usize, need: usize },

    #[error("division by a non-monomial expression in pi")]
    NonMonomialDivision,

    #[error("residue index z = {z} outside 1..={d}")]
    ResidueIndex { z: i64, d: usize },

    #[error("coefficient relation violated: {0}")]
    Relation(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
