//! Command-line orchestration for bcibench: dataset registry, epoch-bundle
//! files, benchmark configuration and execution, statistics and reports.

pub mod bundle;
pub mod config;
pub mod reference;
pub mod registry;
pub mod report;
pub mod run;
pub mod stats_cmd;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("not found: {0}")]
    NotFound(String),
    #[error("corrupt bundle: {0}")]
    CorruptBundle(String),
    #[error("unsupported bundle schema version {0}")]
    UnsupportedVersion(u32),
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    #[error("every evaluation unit failed ({0} issues recorded)")]
    AllUnitsFailed(usize),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Dsp(#[from] bcibench::dsp::DspError),
    #[error(transparent)]
    Pipeline(#[from] bcibench::pipelines::PipelineError),
    #[error(transparent)]
    Eval(#[from] bcibench::eval::EvalError),
    #[error(transparent)]
    Synth(#[from] bcibench::synth::SynthError),
    #[error(transparent)]
    Stats(#[from] bcibench::stats::StatsError),
}

pub type Result<T> = std::result::Result<T, CliError>;

pub(crate) fn io_err(path: &std::path::Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.display().to_string(),
        source,
    }
}

pub use bundle::{load_bundle, save_bundle, EpochBundle};
pub use config::{BenchmarkConfig, DatasetSource, PipelineEntry};
pub use registry::{registry, registry_lookup, DatasetDescriptor};
pub use run::{run, RunReport};
pub use stats_cmd::{stats_command, StatsReport};
