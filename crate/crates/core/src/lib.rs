//! A deterministic multi-agent grid-world engine.
//!
//! Game state is stored in flat columnar tables ([`datastore`]), advanced by
//! a fixed-order tick ([`sim`]), scored by float-valued predicates bound into
//! tasks ([`tasks`]) and exposed through a parallel multi-agent
//! reset/step environment ([`env`]). [`cli`] holds the run, replay and
//! throughput tooling behind the `gridmmo` binary.

pub mod cli;
pub mod config;
pub mod datastore;
pub mod env;
pub mod error;
pub mod rng;
pub mod sim;
pub mod tasks;
pub mod types;
pub mod worldgen;

pub use config::Config;
pub use error::{Error, Result};
