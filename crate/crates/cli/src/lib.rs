//! Command implementations behind the `priority-engine` binary.

pub mod commands;
pub mod config;
pub mod demos;

pub use commands::{cmd_demo, cmd_oracle, cmd_run, cmd_verify, Outcome, RunOptions, Status};
