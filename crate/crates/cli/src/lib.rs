//! Batch verification harness: spec files in, deterministic reports out.

pub mod explain;
pub mod report;
pub mod spec;
pub mod suite;

pub use report::SuiteReport;
pub use spec::{parse_spec, ModelSpec, SpecError, Suite};
pub use suite::{exit_code, run_suite, EXIT_SPEC_ERROR};
