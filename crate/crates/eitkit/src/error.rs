//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by meshing, simulation, training, and I/O.
#[derive(Debug, Error)]
pub enum EitError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("degenerate triangle {element} (area {area:.3e} m^2)")]
    DegenerateTriangle { element: usize, area: f64 },

    #[error("mesh is too coarse: {0}")]
    MeshTooCoarse(String),

    #[error("electrode index {index} out of range for E={electrode_count}")]
    ElectrodeOutOfRange { index: usize, electrode_count: usize },

    #[error("conductivity is not elliptic at ({x:.4}, {y:.4}): eigenvalue {eigenvalue:.3e}")]
    NotElliptic { x: f64, y: f64, eigenvalue: f64 },

    #[error("point ({x:.4}, {y:.4}) lies outside the tank")]
    OutsideTank { x: f64, y: f64 },

    #[error("could not place {requested} inclusions after {retries} retries")]
    PlacementInfeasible { requested: usize, retries: usize },

    #[error("linear solve failed: {0}")]
    SolveFailed(String),

    #[error("matrix {name} is numerically singular (condition estimate {cond:.3e})")]
    SingularMatrix { name: String, cond: f64 },

    #[error("pattern {pattern} failed: {source}")]
    PatternFailed {
        pattern: usize,
        #[source]
        source: Box<EitError>,
    },

    #[error("sample {index} failed: {source}")]
    SampleFailed {
        index: usize,
        #[source]
        source: Box<EitError>,
    },

    #[error("class {label} has too few samples ({count}, need {needed})")]
    ClassTooSmall { label: u32, count: usize, needed: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("training diverged at epoch {epoch}: {reason}")]
    TrainingDiverged { epoch: usize, reason: String },

    #[error("SMO did not converge after {iterations} pair updates ({violations} KKT violations left)")]
    SmoNotConverged { iterations: usize, violations: usize },

    #[error("malformed record at line {line}: {reason}")]
    MalformedRecord { line: usize, reason: String },

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("format error: {0}")]
    Format(String),
}

impl EitError {
    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        EitError::Io { path: path.into(), source }
    }
}

pub type Result<T> = std::result::Result<T, EitError>;
