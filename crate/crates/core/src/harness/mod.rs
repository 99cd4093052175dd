//! Reproducible studies, experiment configs and the file-writing runner
//! behind the `qsci` command.

mod config;
mod run;
mod studies;

pub use config::{
    ActiveSpace, AnsatzKind, AnsatzSpec, ExperimentConfig, InputKind, Kind, Scheme, SectorSpec, SCHEMA_VERSION,
};
pub use run::{evaluate, run_experiment, BoundCheck, Report, RunOutput, BOUND_TOLERANCE, VERSION};
pub use studies::{
    cisd, min_r_for_tolerance, noisy_demo, observable_suite, qwc_trials, sampling_trials, vqe_history,
    AllocationModel, NoisyDemo, NoisyRun, ObservableRecord, ScalingRecord, TrialSummary, VqeHistory,
};
