//! Configuration, orchestration and deterministic reports for the
//! `cstar-ideal` command-line tool.

pub mod catalog;
pub mod config;
pub mod paper;
pub mod report;
pub mod run;

pub use catalog::list_scenarios;
pub use config::{Audit, ConfigError, MetricChoice, RunConfig};
pub use paper::{audit_paper, Claim, PaperAudit};
pub use report::to_canonical_string;
pub use run::{run, RunOutcome, EXIT_CONFIG, EXIT_OK, EXIT_UNKNOWN, EXIT_VIOLATION};
