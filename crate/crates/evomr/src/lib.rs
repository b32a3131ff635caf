//! Command-line harness, suite orchestration and report formats for `evomr-core`.

pub mod cli;
pub mod error;
pub mod harness;
pub mod report;

pub use error::{ExitStatus, HarnessError, Result};
pub use harness::{failure_rate_experiment, fault_coverage, run_suite, FitnessChoice, SuiteConfig};
pub use report::{emit_report, parse_report, Format, SuiteReport};
