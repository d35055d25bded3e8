#![allow(clippy::neg_cmp_op_on_partial_ord)]

//! Command-line front end for the stripe register toolkit: JSON
//! configuration, the five data-producing commands and their file formats.

pub mod commands;
pub mod config;
pub mod output;

pub use commands::Outcome;
pub use config::{Bc, ConfigError, RunConfig};
