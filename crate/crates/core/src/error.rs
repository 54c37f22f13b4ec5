use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    /// A shape chain, genome length, or other static setting is inconsistent.
    #[error("configuration error: {0}")]
    Config(String),

    /// A runtime input (observation, trace, action) has the wrong size or content.
    #[error("input error: {0}")]
    Input(String),

    /// Internal buffers disagree in shape; indicates a programming error upstream.
    #[error("internal error: {0}")]
    Internal(String),

    /// An individual produced a non-finite fitness.
    #[error("evaluation error: individual {index} produced non-finite fitness {value}")]
    Evaluation { index: usize, value: f64 },

    /// The walker state became non-finite.
    #[error("simulation fault at step {step}: {reason}")]
    SimulationFault { step: usize, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
