use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid graph parameter: {0}")]
    InvalidParameter(String),

    #[error("edge list line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(usize, usize),

    #[error("graph is disconnected ({components} components)")]
    Disconnected { components: usize },

    #[error("graph is empty")]
    Empty,

    #[error("opinion graph is not distance-regular")]
    NotDistanceRegular,

    #[error("confidence threshold must be positive for this operation")]
    ZeroThreshold,

    #[error("invalid densities: {0}")]
    InvalidDensities(String),

    #[error("criterion unavailable: p_{0} = 0, so the hitting time is infinite")]
    CriterionUnavailable(usize),

    #[error("state {state} outside 1..={states}")]
    StateOutOfRange { state: usize, states: usize },

    #[error("operation requires a ring spatial graph")]
    NotARing,

    #[error("insufficient samples: {0}")]
    InsufficientSamples(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
