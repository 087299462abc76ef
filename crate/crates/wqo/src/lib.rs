//! File formats, reports and the command-line front end for `wqo-core`.

pub mod cli;
pub mod format;
pub mod report;

pub use cli::run;
pub use format::{parse_automatic, parse_automaton, write_dfa, FormatError};
pub use report::{report_json, report_text};
