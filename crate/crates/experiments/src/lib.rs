//! Experiment runner for the `async-oco` learners: dataset and synthetic
//! runs, metrics, timing summaries, run metadata and figures.
//!
//! ```no_run
//! use async_oco_experiments::{run_experiment, Manifest, Preset};
//!
//! let spec = Preset::Paper2Agent.spec();
//! let out = run_experiment(&spec, &Manifest::defaults("data")).unwrap();
//! print!("{}", out.metrics.render());
//! ```

pub mod error;
pub mod manifest;
pub mod meta;
pub mod metrics;
pub mod plots;
pub mod run;
pub mod spec;
pub mod timing;

pub use error::{ExperimentError, Result};
pub use manifest::Manifest;
pub use metrics::MetricsTable;
pub use run::{run_experiment, run_single, ExperimentOutput, PreparedData, RunOutput};
pub use spec::{DatasetChoice, ExperimentSpec, Preset};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/experiments.md")]
    struct Experiments;
}
