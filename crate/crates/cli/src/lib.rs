//! Library surface of the command-line tool: the subcommand implementations
//! and the file formats they own, importable by integration tests.

pub mod commands;
pub mod formats;
