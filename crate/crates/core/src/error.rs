use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{name} = {value} is not a probability in the required range {range}")]
    InvalidProbability {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("channel requires 0 < gamma < delta < 1/2, got gamma = {gamma}, delta = {delta}")]
    InvalidChannel { gamma: f64, delta: f64 },

    /// delta >= 2 gamma (1 - gamma): no secure commitment can be built on the channel.
    #[error("channel (gamma = {gamma}, delta = {delta}) is trivial: delta >= 2 gamma (1 - gamma)")]
    TrivialChannel { gamma: f64, delta: f64 },

    #[error("parameter constraint violated: {0}")]
    Constraint(String),

    #[error("message length k = {k} < 1: the rate budget is exhausted at n = {n}")]
    RateExhausted { k: i64, n: usize },

    #[error("crossover probability t = {t} outside [{lo}, {hi}]")]
    NoiseOutOfRange { t: f64, lo: f64, hi: f64 },

    #[error("length mismatch: expected {expected} bits, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("no irreducible polynomial tabled for GF(2^{0})")]
    UnsupportedWidth(usize),

    #[error("invalid hash family parameters: {0}")]
    HashParams(String),

    #[error("protocol message out of order: expected {expected}, in phase {phase}")]
    OutOfOrder {
        expected: &'static str,
        phase: &'static str,
    },

    #[error("instance too large for exhaustive search: {0}")]
    InstanceTooLarge(String),

    #[error("invalid distribution: {0}")]
    Distribution(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
