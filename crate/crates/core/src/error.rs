use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("discriminant context mismatch: {0} vs {1}")]
    ContextMismatch(u64, u64),
    #[error("invalid discriminant base {0}: must be 0 or a positive non-square")]
    BadDiscriminant(u64),
    #[error("irrational part given in the rational context d = 0")]
    IrrationalInRationalContext,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("zero vector where a non-zero vector is required")]
    ZeroVector,
    #[error("division by zero")]
    DivisionByZero,
    #[error("prediagram is not stable")]
    NotStable,
    #[error("prediagram is not alternating")]
    NotAlternating,
    #[error("surface is disconnected")]
    Disconnected,
    #[error("invalid prediagram: {0}")]
    InvalidPrediagram(String),
    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),
    #[error("malformed involution: {0}")]
    MalformedInvolution(String),
    #[error("odd singularity orbit of size {0}")]
    OddOrbit(usize),
    #[error("vector is not in the span of the given space")]
    NotInSpan,
    #[error("deformations are not pairwise transverse")]
    NotTransverse,
    #[error("deformation is not minimal")]
    NotMinimal,
    #[error("expected {expected} fixed cylinders, found {found}")]
    WrongFixedCount { expected: usize, found: usize },
    #[error("circumferences are not invariant under the cylinder involution")]
    IncompatibleInvolution,
    #[error("size cap exceeded: {0}")]
    SizeCap(String),
    #[error("unknown preset '{0}'")]
    UnknownPreset(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
