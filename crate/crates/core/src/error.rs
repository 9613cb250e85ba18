use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("invalid action: {0}")]
    InvalidAction(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("paths are not composable: {0}")]
    Composability(String),
    #[error("could not parse path `{0}`")]
    PathSyntax(String),
    #[error("assumption (A) fails: every edge in the orbit of `{edge}` has rho = 0")]
    AssumptionAViolated { edge: String },
    #[error("wandering labels do not match the vertex orbit: {0}")]
    WanderingMismatch(String),
    #[error("infinite multiplicity is not supported: {0}")]
    UnsupportedInfiniteMultiplicity(String),
    #[error("word prefix is visibly periodic (period {period})")]
    PeriodicWordRejected { period: usize },
    #[error("cycle word is not primitive (period {period})")]
    NonPrimitiveWord { period: usize },
    #[error("interior too small: need margin {needed}, have {available}")]
    InteriorTooSmall { needed: usize, available: usize },
    #[error("operator is not an isometry on the interior (deviation {deviation:e})")]
    NotIsometry { deviation: f64 },
    #[error("representation has the wrong type: {0}")]
    WrongType(String),
    #[error("invalid representation: {0}")]
    InvalidRep(String),
    #[error("invalid phase: {0}")]
    InvalidPhase(String),
    #[error("schema error at `{path}`: {message}")]
    Schema { path: String, message: String },
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}
