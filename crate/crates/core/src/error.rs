use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("elements or maps belong to different groups: {0}")]
    ParentMismatch(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("order {order} does not divide {target}")]
    NotDivisible { order: u64, target: u64 },

    #[error("{what}: {actual} exceeds cap {limit}")]
    CapExceeded {
        what: &'static str,
        limit: u64,
        actual: u64,
    },

    #[error("not a quadratic form: {reason} (witness {witness:?})")]
    InvalidForm {
        reason: &'static str,
        witness: Vec<Vec<u64>>,
    },

    #[error("form is degenerate: {0:?} lies in the radical")]
    Degenerate(Vec<u64>),

    #[error("p = {0} must be an odd prime")]
    EvenPrime(u64),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("|A| = {0} is not a perfect square")]
    NotSquareOrder(u64),

    #[error("not an abelian 3-cocycle: {reason} at {witness:?}")]
    InvalidCocycle { reason: &'static str, witness: Vec<usize> },

    #[error("hexagon relation violated: {relation} at {witness:?}")]
    HexagonViolation {
        relation: &'static str,
        witness: Vec<Vec<u64>>,
    },

    #[error("linear system has no solution: {0}")]
    NoSolution(String),

    #[error("no trivialization additive in the group variable exists: {0}")]
    NoHomomorphicTrivialization(String),

    #[error("spinor norm is not a scalar")]
    NonScalarNorm,

    #[error("relation violated: {0}")]
    RelationViolation(String),

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl Error {
    /// Short stable tag used in tables and exit-code mapping.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::ParentMismatch(_) => "ParentMismatch",
            Error::ShapeMismatch(_) => "ShapeMismatch",
            Error::NotDivisible { .. } => "NotDivisible",
            Error::CapExceeded { .. } => "CapExceeded",
            Error::InvalidForm { .. } => "InvalidForm",
            Error::Degenerate(_) => "Degenerate",
            Error::EvenPrime(_) => "EvenPrime",
            Error::NotPrime(_) => "NotPrime",
            Error::NotSquareOrder(_) => "NotSquareOrder",
            Error::InvalidCocycle { .. } => "InvalidCocycle",
            Error::HexagonViolation { .. } => "HexagonViolation",
            Error::NoSolution(_) => "NoSolution",
            Error::NoHomomorphicTrivialization(_) => "NoHomomorphicTrivialization",
            Error::NonScalarNorm => "NonScalarNorm",
            Error::RelationViolation(_) => "RelationViolation",
            Error::Overflow(_) => "Overflow",
            Error::Parse(_) => "ParseError",
            Error::Io(_) => "IoError",
        }
    }
}
