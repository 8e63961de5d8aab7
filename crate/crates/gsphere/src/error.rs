use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("duplicate vertex label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown vertex label `{0}`")]
    UnknownLabel(String),
    #[error("facet {0} is contained in another facet")]
    NonMaximalFacet(String),
    #[error("complex has {0} vertices, more than the supported 128")]
    TooManyVertices(usize),
    #[error("{0} is not a face of the complex")]
    NotAFace(String),
    #[error("vertex label `{0}` occurs in both join factors")]
    LabelCollision(String),
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("{0}{1} is not an edge of the complex")]
    NotAnEdge(String, String),
    #[error("edge {0}{1} lies in a missing face and cannot be contracted")]
    NotContractible(String, String),
    #[error("operation requires a pure complex")]
    NotPure,
    #[error("k = {k} out of range for this operation (max {max})")]
    KOutOfRange { k: isize, max: isize },
    #[error("embedding does not cover the complex: {0}")]
    EmbeddingMismatch(String),
    #[error("degenerate coordinates encountered (re-seed): {0}")]
    DegenerateCoordinates(String),
    #[error("cone parameter for vertex `{0}` equals -1")]
    BadAValue(String),
    #[error("input polynomial is not a stress: {0}")]
    NotAStress(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("genericity failure after re-seeding: {0}")]
    GenericityFailure(String),
    #[error("the zero stress has no support")]
    ZeroStress,
    #[error("internal verification failed: {0}")]
    VerificationFailed(String),
    #[error("computed data contradicts a classification invariant: {0}")]
    TheoremContradiction(String),
    #[error("parse error at line {line}, column {col}: {msg}")]
    ParseError { line: usize, col: usize, msg: String },
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
