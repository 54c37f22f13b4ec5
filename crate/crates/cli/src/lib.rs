//! Configuration, persistence and experiment orchestration for plastic
//! walker runs.

pub mod checkpoint;
pub mod commands;
pub mod config;
pub mod error;

pub use checkpoint::{Checkpoint, LOG_HEADER};
pub use commands::{
    battery, cmd_analyze, cmd_compare, cmd_eval, cmd_train, evaluate_genome, train_resolved, AnalyzeOptions,
    CompareOptions, Condition, EvalOptions, EvalReport, TrainOptions, TrainSummary,
};
pub use config::{load_config, ResolvedConfig, RunConfig, Topology};
pub use error::{HarnessError, Result};
