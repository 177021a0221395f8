//! Batch front end for the kgraph toolkit: graph loading, reports and the
//! uniqueness experiment.

pub mod commands;
pub mod config;
pub mod panel;

pub use commands::{render, run, Outcome};
pub use config::{Command, Format, RunConfig};
