use thiserror::Error;

/// Errors raised by poset construction, the spectral engines and the tooling around them.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cover relations contain a directed cycle through {0}")]
    Cycle(usize),

    #[error("cover ({0},{1}) is implied by transitivity")]
    RedundantCover(usize, usize),

    #[error("label out of range: {0}")]
    Range(String),

    #[error("capacity exceeded: {what} exceeds the cap of {cap}")]
    Capacity { what: &'static str, cap: usize },

    #[error("poset is not naturally labeled")]
    NotNatural,

    #[error("poset is outside the supported class: {0}")]
    Class(String),

    #[error("chains are not labeled consecutively: {0}")]
    Labeling(String),

    #[error("position {pos} out of range 1..={max}")]
    Position { pos: usize, max: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("parameter x{0} is not strictly positive")]
    NonPositive(usize),

    #[error("pair ({0},{1}) is not a breakable cover")]
    Pair(usize, usize),

    #[error("upset property fails: {0}")]
    UpsetProperty(String),

    #[error("multiplicities sum to {got}, but there are {expected} linear extensions")]
    Multiplicity { expected: usize, got: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
