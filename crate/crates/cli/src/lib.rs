//! Workspace files, command dispatch and reports for the `topos` binary.

pub mod run;
mod text;
pub mod workspace;
