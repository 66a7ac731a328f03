//! Command-line front end for `lss-core`: matrix-set files, subcommands and reports.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod input;
pub mod report;

pub use commands::{run, Cli, Command, Outcome, Status};
pub use input::{load_matrix_set, parse_matrix_set, write_matrix_set};
