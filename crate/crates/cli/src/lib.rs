//! Pipeline front end for collaborative-training memorization audits.
//!
//! Subcommands map one-to-one onto [`pipeline::Pipeline`] methods; every
//! artifact lands under the configured output directory.

pub mod artifacts;
pub mod config;
pub mod error;
pub mod passk;
pub mod pipeline;
pub mod report;

pub use config::{Overrides, RunConfig};
pub use error::{CliError, CliResult};
pub use pipeline::{Pipeline, TrainRequest};
