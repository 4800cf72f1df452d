//! Command-line surface and orchestrated validation suites.
//!
//! The binary exposes six subcommands (`exact`, `estimate`, `saddle`,
//! `regime`, `validate`, `zeros`), emitting CSV or JSONL tables ordered
//! deterministically by `(N, t)`. `validate` runs the certification suites
//! (axis brackets, bound-lemma sweeps, off-center quadrature, exact-count
//! equivalences, estimator containment) and exits nonzero iff any record
//! fails.

pub mod config;
pub mod emit;
pub mod run;
pub mod suites;

pub use config::{Cli, Command, CommonArgs, InclusiveRange, OutputFormat};
pub use emit::{format_real, Field, TableSink};
pub use run::{run_command, RunError};
pub use suites::{run_all_suites, run_suite, SuiteOptions, ValidationRecord, SUITE_NAMES};
