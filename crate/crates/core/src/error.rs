use thiserror::Error;

/// Errors produced by the simulation and certification pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParams(String),

    #[error("invalid branch index {0} (expected 1 or 2)")]
    InvalidBranch(u8),

    #[error("both effective potentials vanish, pair amplitudes are undefined")]
    DegeneratePotentials,

    #[error("no phase-matched scattering vector: |q|^2 = {q_sq:e} < 0")]
    NoPhaseMatching { q_sq: f64 },

    #[error("invalid pump specification: {0}")]
    InvalidPumps(String),

    #[error("{n_pairs} pairs exceed the configured capacity of {max_pairs}")]
    CapacityExceeded { n_pairs: usize, max_pairs: usize },

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("invalid arrival-time window: t1 = {t1}, t2 = {t2}")]
    InvalidWindow { t1: f64, t2: f64 },

    #[error("matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("state has no eigenvalue above the rank tolerance")]
    NullState,

    #[error("subset size r = {r} out of range 1..={dim}")]
    RankOutOfRange { r: usize, dim: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("i/o failure: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
