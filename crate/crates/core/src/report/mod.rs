//! Configuration, structured output, the self-test harness and the
//! findings report.

mod config;
mod findings;
mod selftest;
mod table;
pub mod tables;

pub use config::{exit, exit_code, RunConfig, DEFAULT_TOLERANCE, MAX_TOLERANCE, MIN_TOLERANCE};
pub use findings::{markdown_table, ClaimStatus, Findings, FindingsBuilder, FindingsEntry, CLAIMS};
pub use selftest::{
    emit_reports, run_selftest, CriterionOutcome, SelftestReport, Verdict, FULL_SUITE_BUDGET, FULL_SUITE_MAX_Q,
    REDUCED_SUITE_BUDGET,
};
pub use table::{write_file, Cell, OutputFormat, Table};
