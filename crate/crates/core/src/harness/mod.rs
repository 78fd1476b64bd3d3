//! Batch experiments: sampling, cycle statistics, figure grids and output.

use std::io;
use std::path::PathBuf;

pub mod cli;
pub mod emit;
pub mod grid;
pub mod histogram;
pub mod run;
pub mod spec;
pub mod verify;

pub use grid::{cell, figure, Figure, FigureCell, Reference, FIGURES};
pub use histogram::Histogram;
pub use run::{run_experiment, run_instance, run_instances, InstanceOutcome};
pub use spec::{ExperimentConfig, ExperimentSpec, StructureFamily};

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error(transparent)]
    Model(#[from] crate::error::Error),
    #[error("invalid experiment: {0}")]
    InvalidSpec(String),
    #[error("{}: {source}", path.display())]
    Config { path: PathBuf, source: toml::de::Error },
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{}: {source}", path.display())]
    Csv { path: PathBuf, source: csv::Error },
    #[error("worker pool: {0}")]
    ThreadPool(#[from] rayon::ThreadPoolBuildError),
}
