//! Experiment harness for the geomc samplers: validated configs, seeded chain
//! ensembles, MMD convergence curves, trace and metric files, and the `geomc`
//! command line.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod curve;
pub mod error;
pub mod metrics;
pub mod model;
pub mod run;
pub mod trace;

pub use config::ExperimentConfig;
pub use error::{HarnessError, Result};
