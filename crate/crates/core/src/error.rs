use thiserror::Error;

/// Errors surfaced by weight-sequence construction, analysis and simulation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("weight sequence must not be empty")]
    EmptySequence,

    #[error("weight {0} is below the minimum of 1")]
    WeightBelowOne(f64),

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("target total weight {0} too small: every band must contain at least one vertex")]
    TargetTooSmall(f64),

    #[error("invalid range: need 0 < a < b and theta >= 2 (a={a}, b={b}, theta={theta})")]
    InvalidRange { a: f64, b: f64, theta: u32 },

    #[error("breeding band [f0, psi) is empty: no vertices with weight below psi")]
    EmptyBand,

    #[error("mu = {0} must exceed 1 (log mu must be positive)")]
    MuTooSmall(f64),

    #[error(
        "layer recursion diverged at psi_{index} = {at}: next bound {next} >= {at}; \
         tail condition fails there (P[W* >= {at}] = {tail} < C/{at} = {required})"
    )]
    DivergentRecursion {
        index: usize,
        at: f64,
        next: f64,
        tail: f64,
        required: f64,
    },

    #[error("guard violated: {0} (pass the override flag to explore outside the guarded range)")]
    GuardViolated(String),

    #[error("p0 = {p0} is not subcritical: requires p0 <= p_s/mu = {limit}")]
    NotSubcritical { p0: f64, limit: f64 },

    #[error("no heavy vertices: psi exceeds the maximum weight")]
    NoHeavyVertices,

    #[error("nucleus band is empty: psi_K = {0} exceeds the maximum weight")]
    EmptyNucleusBand(f64),

    #[error("self-loop: edge probability queried for identical endpoints {0}")]
    SelfLoop(usize),

    #[error("vertex index {index} out of range for n = {n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
