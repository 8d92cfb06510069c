use thiserror::Error;

pub type Result<T> = std::result::Result<T, OtcError>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OtcError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("zero polynomial is not allowed here")]
    ZeroPolynomial,
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("defining polynomial has degree {0}; degree at least 3 is required")]
    DegreeTooSmall(usize),
    #[error("field has no complex embeddings (t = 0); not an OT field")]
    NoComplexEmbeddings,
    #[error("field has no real embeddings (s = 0); the unit lattice would be trivial")]
    NoRealEmbeddings,
    #[error("interval endpoint is a root of the polynomial")]
    RootOnEndpoint,
    #[error("invalid interval: lower endpoint must be below upper endpoint")]
    InvalidInterval,
    #[error("matrix is {rows}x{cols}; a square matrix is required")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix dimensions do not match: {0}")]
    DimensionMismatch(String),
    #[error("matrix is singular")]
    Singular,
    #[error("exterior power degree {k} is out of range for a {n}x{n} matrix")]
    ExteriorRange { k: usize, n: usize },
    #[error("embedding index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("element has {got} coordinates; the field has degree {n}")]
    CoordinateLength { got: usize, n: usize },
    #[error("zero element has no norm")]
    ZeroElement,
    #[error("generator {generator} is not a unit: {reason}")]
    NonUnit { generator: usize, reason: String },
    #[error("generator {generator} is negative at real embedding {embedding}")]
    NegativeEmbedding { generator: usize, embedding: usize },
    #[error("admissibility not certified: {0}")]
    NotCertified(String),
    #[error("theta length {got} \u{2260} s={s}")]
    ThetaLength { got: usize, s: usize },
    #[error("degree {n} exceeds the enumeration cap {cap}; raise enumeration_cap to enumerate 2^{n} subsets")]
    EnumerationCap { n: usize, cap: usize },
    #[error("oracle mode supports degree at most 8, got {0}")]
    OracleTooLarge(usize),
    #[error("root isolation failed: {0}")]
    RootIsolation(String),
    #[error("consistency violation: {0}")]
    Consistency(String),
}
