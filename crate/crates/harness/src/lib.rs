//! Experiment harness: configuration, the five experiments and their CSV and
//! SVG outputs.

pub mod config;
pub mod experiments;
pub mod svg;

use thiserror::Error;

pub use config::{ConfigFile, Experiment, ExperimentConfig, FitDegrees};
pub use experiments::{run, Report};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Gen(#[from] sfmis_core::GenError),
    #[error(transparent)]
    Graph(#[from] sfmis_core::GraphError),
}
