use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("lattice dimension must be at least 2, got {0}")]
    InvalidDimension(usize),

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("points {index} and {next} of the walk are not nearest neighbours", next = index + 1)]
    NonUnitStep { index: usize },

    #[error("malformed step token {token:?} at position {position}")]
    MalformedToken { token: String, position: usize },

    #[error("axis {axis} in token {token:?} is out of range for dimension {dim}")]
    AxisOutOfRange { token: String, axis: usize, dim: usize },

    #[error("walk revisits point {point:?} at index {index}")]
    NotSelfAvoiding { index: usize, point: Vec<i64> },

    #[error("walk is not a bridge: {0}")]
    NotBridge(&'static str),

    #[error("irreducibility is only defined for bridges of length at least 1")]
    EmptyBridge,

    #[error("({0}, {1}) is not a zigzag of the bridge")]
    NotZigzag(usize, usize),

    #[error("index {0} is not a diamond point of the walk")]
    NotDiamond(usize),

    #[error("stickbreak needs i < j, got i = {0}, j = {1}")]
    DiamondOrder(usize, usize),

    #[error("requested {requested} short zigzags but only {available} are available")]
    TooFewShortZigzags { requested: usize, available: usize },

    #[error("multi-valued map sends element {0} to the empty set")]
    EmptyImage(usize),

    #[error("walk length {requested} exceeds the configured budget of {limit} in dimension {dim}")]
    BudgetExceeded { requested: usize, limit: usize, dim: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
