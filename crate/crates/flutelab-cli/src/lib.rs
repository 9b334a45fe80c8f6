//! Command-line front end for `flutelab`: reads an experiment
//! configuration, runs one command and writes a JSON report or an SVG.

pub mod commands;
pub mod config;
pub mod json;
pub mod svg;

/// Process exit codes.
pub mod exit {
    pub const PASS: i32 = 0;
    pub const CONFIG: i32 = 1;
    pub const VERIFICATION: i32 = 2;
    pub const IO: i32 = 3;
}
