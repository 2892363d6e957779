//! Named verification checks over `paperlab-core`, each producing a
//! versioned JSON report.

pub mod checks;
pub mod relations;
pub mod report;

pub use checks::{run, suite_pass, CheckConfig, CliError, CHECK_IDS, EXTENDED_ONLY};
pub use report::{CheckReport, Provenance, Status, SuiteReport};
