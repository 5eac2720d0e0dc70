//! Batch front-end for the equal-area conservation-law solver: config
//! ingestion, the solve/slice/godunov/validate/sweep/convergence commands,
//! and plot-ready CSV emission.

pub mod commands;
pub mod config;
pub mod expr;
pub mod parallel;
pub mod report;

pub use commands::CliError;
pub use config::{ConfigMap, RunConfig};
pub use expr::Expr;
