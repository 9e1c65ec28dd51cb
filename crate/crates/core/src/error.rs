use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid model: depth {depth} exceeds dimension {dim}")]
    InvalidModel { dim: usize, depth: usize },
    #[error("point lies outside the model: {0}")]
    PointOutsideModel(String),
    #[error("model mismatch: {0}")]
    ModelMismatch(String),
    #[error("invalid germ data: {0}")]
    InvalidGerm(String),
    #[error("bad stratum label: {0}")]
    BadLabel(String),
    #[error("bad face index {face} for depth {depth}")]
    BadFace { face: usize, depth: usize },
    #[error("not a submersion")]
    NotSubmersion,
    #[error("map is not smooth at the origin")]
    NotJoyceSmooth,
    #[error("maps are not transverse")]
    NotTransverse,
    #[error("no mediating germ: {0}")]
    NoMediator(String),
    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(String),
    #[error("internal invariant violated: {0}")]
    InternalInvariantViolation(String),
    #[error("invalid polynomial map: {0}")]
    InvalidPolyMap(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid complex: {0}")]
    InvalidComplex(String),
}

pub type Result<T> = std::result::Result<T, Error>;
