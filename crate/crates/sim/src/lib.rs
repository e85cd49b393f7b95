//! Monte Carlo experiments for the `beamtrack-core` trackers: configuration,
//! parallel seeded runs, aggregation and CSV/JSON output.

use std::path::PathBuf;

use thiserror::Error;

pub mod config;
pub mod harness;
pub mod output;

pub use config::ExperimentConfig;
pub use harness::{run_monte_carlo, MetricsRow, MetricsTable};

#[derive(Debug, Error)]
pub enum SimError {
    #[error(transparent)]
    Core(#[from] beamtrack_core::Error),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}
