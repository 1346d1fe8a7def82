use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("matrix is singular")]
    Singular,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("expected {expected} arguments, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("index {index} out of range 1..={m}")]
    IndexOutOfRange { index: usize, m: usize },
    #[error("index tuple {0:?} is not canonical for this form kind")]
    NonCanonical(Vec<usize>),
    #[error("invalid shape: {0}")]
    InvalidShape(String),
    #[error("q = {0} must be odd")]
    EvenQ(usize),
    #[error("q = {0} must be at least 3")]
    QTooSmall(usize),
    #[error("p = {p} requires a {expected} form")]
    WrongKindForParity { p: usize, expected: &'static str },
    #[error("degree {0} is not a grade of this algebra")]
    DegreeMismatch(usize),
    #[error("subspace basis is linearly dependent")]
    DegenerateBasis,
    #[error("invalid block: {0}")]
    InvalidSpec(String),
    #[error("blocks mix types {0} and {1}")]
    MixedTypes(u8, u8),
    #[error("{0} is not composite")]
    NotComposite(u64),
    #[error("{0} is a power of two")]
    PowerOfTwo(u64),
    #[error("form is not unimodular (det = {0})")]
    NotUnimodular(String),
    #[error("form is definite; classification only covers indefinite forms")]
    NotIndefinite,
    #[error("inconsistent invariants: {0}")]
    InconsistentInvariants(String),
    #[error("Kirby-Siebenmann invariant is determined for even forms; do not pass one")]
    KsNotApplicable,
    #[error("decomposition is empty")]
    EmptyDecomposition,
    #[error("rank {0} is odd")]
    OddRank(usize),
    #[error("parse error: {0}")]
    Parse(String),
}
