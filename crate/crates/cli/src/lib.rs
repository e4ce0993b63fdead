//! Command-line front end for `structpass`.
//!
//! Every stage writes plain JSON, so `extract`, `sections` and `search` can
//! be chained by hand and give the same result as a single `search` run.
//!
//! Exit codes: 0 success (including empty results), 1 internal error,
//! 2 usage or input error, 3 unsupported input such as encrypted PDFs.

pub mod args;
pub mod commands;
pub mod error;
pub mod run;

pub use args::Cli;
pub use commands::{cmd_eval, cmd_extract, cmd_highlight, cmd_search, cmd_sections, PassagesJson, RunConfig};
pub use error::CliError;
pub use run::run;
