//! Error types shared across the engine.

use thiserror::Error;

/// Errors raised by exact linear algebra and the solvers built on top of it.
#[derive(Debug, Error)]
pub enum EngineError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("unsupported degree {degree} (only 0, 1, 2 are computed)")]
    UnsupportedDegree { degree: usize },

    #[error(
        "map is not well-defined on quotients: image of a relation is not a relation ({context})"
    )]
    MapNotWellDefined { context: String },

    #[error(
        "declared boundary lifts do not span the kernel of (i*,j*) in degree {degree}: {detail}"
    )]
    UnderdeterminedBoundary { degree: usize, detail: String },

    #[error("declared boundary lift is not a kernel vector: {detail}")]
    LiftNotInKernel { detail: String },

    #[error("contradictory relation ledger: {detail}")]
    Contradiction { detail: String },

    #[error("inconsistent scenario data: {detail}")]
    InconsistentScenario { detail: String },

    #[error("inconsistent cobordism model: {detail}")]
    InconsistentModel { detail: String },

    #[error("no rule applies to generator {generator}: {detail}")]
    WrongRule { generator: String, detail: String },

    #[error("unsupported input: {detail}")]
    Unsupported { detail: String },

    #[error("parse error: {detail}")]
    Parse { detail: String },

    #[error("pipeline stage `{stage}` failed: {source}")]
    Stage {
        stage: String,
        #[source]
        source: Box<EngineError>,
    },
}

impl EngineError {
    /// Wraps an error with the name of the pipeline stage it surfaced in.
    pub fn in_stage(self, stage: &str) -> EngineError {
        EngineError::Stage {
            stage: stage.to_string(),
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, EngineError>;
