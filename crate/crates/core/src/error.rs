use thiserror::Error;

/// Errors shared across the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, got {got}")]
    DimensionMismatch {
        context: String,
        expected: usize,
        got: usize,
    },

    #[error("integration failure: state component {component} became non-finite at t = {t} s")]
    IntegrationFailure { component: usize, t: f64 },

    #[error("steady state not found for plant '{plant}': {reason}")]
    SteadyStateNotFound { plant: String, reason: String },

    #[error("index {index} out of range for {context} (len {len})")]
    IndexOutOfRange {
        context: String,
        index: usize,
        len: usize,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("channel {channel} is degenerate: min == max == {value}")]
    DegenerateChannel { channel: usize, value: f64 },

    #[error("log-transform channel {channel} has non-positive value {value}")]
    NonPositiveLogChannel { channel: usize, value: f64 },

    #[error("training diverged: non-finite gradient in parameter block '{block}' at epoch {epoch}")]
    TrainingDivergence { block: String, epoch: usize },

    #[error("Jacobian assembly produced a non-finite entry at stage {stage}")]
    JacobianAssembly { stage: usize },

    #[error("unknown plant '{0}'")]
    UnknownPlant(String),

    #[error("scenario mismatch: {0}")]
    ScenarioMismatch(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("{0}")]
    Other(String),
}

pub type Result<T> = std::result::Result<T, Error>;
