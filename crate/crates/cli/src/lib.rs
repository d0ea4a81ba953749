//! Library backing the `fairdiv` binary: experiment orchestration, report
//! rendering and file emission. The binary itself only parses arguments and
//! maps errors to exit codes.

pub mod experiment;
pub mod files;
pub mod report;

pub use experiment::{
    classify_instance, dump_csv, per_instance_csv, plot_table, run_experiment, summary_csv,
    AllocationRecord, CellStats, ClassificationMatrix, ExperimentSummary,
};
pub use files::{read_instance, summary_path, write_instance_set, write_text, CliError, CliResult};
