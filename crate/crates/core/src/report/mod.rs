//! Overhead arithmetic and the end-to-end experiment that produces the
//! comparison tables.

mod experiment;
mod overhead;

pub use experiment::{
    run_experiment, run_experiment_config, BenchmarkInputs, CoverReport, CoverSpec, DeviceSpec,
    ExperimentConfig, GroupReport, Report,
};
pub use overhead::{byte_overhead, time_overhead, OverheadResult, TimeOverheadResult};
