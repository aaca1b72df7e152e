use thiserror::Error;

/// Errors produced by grid construction, state operations, and frame transports.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("grid dims must be 1 or 2, got {0}")]
    BadDims(usize),
    #[error("grid needs at least 8 points per axis, got {0}")]
    TooFewPoints(usize),
    #[error("grid extent must be positive, got {0}")]
    NonpositiveExtent(f64),
    #[error("mass must be positive, got {0}")]
    NonpositiveMass(f64),
    #[error("state is in {found:?} representation, expected {expected:?}")]
    RepMismatch {
        expected: crate::grid::Rep,
        found: crate::grid::Rep,
    },
    #[error("states live on different grids")]
    SpaceMismatch,
    #[error("operator {op} requires a {need}-dimensional grid, state has {have}")]
    DimsMismatch {
        op: &'static str,
        need: usize,
        have: usize,
    },
    #[error("amplitude buffer has {got} entries, grid expects {want}")]
    ShapeMismatch { want: usize, got: usize },
    #[error("support violation: {0}")]
    SupportViolation(String),
    #[error("state set is degenerate: {0}")]
    DegenerateStateSet(String),
    #[error("evaluation point {0:?} is within {1} stencil widths of the patch boundary")]
    PatchBoundary(Vec<f64>, usize),
    #[error("gauge field is not unitary at {point:?} (deviation {deviation:.3e})")]
    NonUnitaryGauge { point: Vec<f64>, deviation: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("state left the admissible region at step {step}: {what}")]
    EvolutionEscaped { step: usize, what: String },
}

pub type Result<T> = std::result::Result<T, Error>;
