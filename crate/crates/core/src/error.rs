use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown resource `{0}`")]
    UnknownResource(String),
    #[error("duplicate resource `{0}`")]
    DuplicateResource(String),
    #[error("resource `{0}` has capacity 0; capacities must be positive")]
    ZeroCapacity(String),
    #[error("resource id {0} is outside the resource set")]
    ResourceOutOfRange(u32),
    #[error("process {process} has no progression")]
    MissingProgression { process: usize },
    #[error("progression of length {progression} does not match {ops} operations")]
    ProgressionLength { ops: usize, progression: usize },
    #[error("progression is not strictly increasing at index {0}")]
    ProgressionNotIncreasing(usize),
    #[error("process {0} is empty")]
    EmptyProcess(usize),
    #[error("a program needs at least one process")]
    NoProcesses,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("resource sets differ")]
    ResourceSetMismatch,
    #[error("invalid cube: {0}")]
    InvalidCube(String),
    #[error("invalid box: {0}")]
    InvalidBox(String),
    #[error("box {window} does not contain hole {hole}")]
    BoxTooSmall { window: String, hole: String },
    #[error("complement of the complex is not bounded inside the window (shell cube {0} missing)")]
    ShellIncomplete(String),
    #[error("complex is not face-closed: {0}")]
    NotFaceClosed(String),
    #[error("dimension {0} is too small; need at least 2")]
    DimensionTooSmall(usize),
    #[error("complex is empty")]
    EmptyComplex,
    #[error("too many vertices ({0}); at most 64 are supported")]
    TooManyVertices(usize),
    #[error("vertex {vertex} outside 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("empty vertex set in non-face list")]
    EmptyNonFace,
    #[error("point {0} is not a vertex of the complex")]
    NotInComplex(String),
    #[error("endpoints not ordered: {0} is not <= {1}")]
    EndpointOrder(String, String),
    #[error("level {level} not strictly between {lo} and {hi}")]
    LevelOutOfRange { level: i64, lo: i64, hi: i64 },
    #[error("path count exceeds cap {0}")]
    CapExceeded(u64),
    #[error("constructions disagree at cube {0}")]
    ConstructionMismatch(String),
    #[error("{0}")]
    Format(String),
}
