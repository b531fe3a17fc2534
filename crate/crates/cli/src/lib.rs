//! Experiment runner behind the `stressflex` binary.
//!
//! Every subcommand produces a versioned report (`"schema": 1`) that embeds
//! its seed, tolerances and a reproducing command line. Floats are printed
//! with 17 significant digits, so identical inputs give identical bytes.

pub mod args;
pub mod error;
pub mod json;
pub mod run;

pub use args::{Cli, Command};
pub use error::CliError;
pub use run::{run, Output};
