//! Scenario files, experiment suites and output writers for the formation
//! library, plus the `formation-lab` command line.

pub mod cli;
pub mod experiments;
pub mod output;
pub mod scenario;

pub use experiments::{
    run_bias_sweep, run_bias_sweep_records, run_comparison_trials, run_conversion, run_cost_comparison, run_demo,
    run_trial, run_trials, ComparisonRow, ComparisonTrial, CostKind, ExperimentRecord, SweepAxis, SweepRow,
};
pub use scenario::Scenario;
