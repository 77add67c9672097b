use thiserror::Error;

/// Errors raised anywhere in the polytope pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("point {index} is not on the unit sphere (|p| = {norm})")]
    NotUnitNorm { index: usize, norm: f64 },
    #[error("need at least {need} points, got {got}")]
    TooFewPoints { need: usize, got: usize },
    #[error("points {0} and {1} coincide within tolerance")]
    DegeneratePoints(usize, usize),
    #[error("point set is not full-dimensional (affine rank {0} < 4)")]
    NotFullDimensional(usize),
    #[error("point {0} is not a vertex of the hull")]
    NotInConvexPosition(usize),
    #[error("face lattice inconsistency: {0}")]
    LatticeInconsistency(String),
    #[error("origin is not strictly interior (facet {facet} has support {support})")]
    OriginNotInterior { facet: usize, support: f64 },
    #[error("polytope is not certified anti-self-polar")]
    NotAntiSelfPolar,
    #[error("numerical degeneracy: {0}")]
    NumericalDegeneracy(String),
    #[error("unknown catalog polytope `{0}` (expected simplex, cross, hypercube or cell24)")]
    UnknownCatalogName(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
