//! Command-line front end for the growth-law engine: panel CSV
//! ingestion and validation, grouped estimation runs with table, CSV,
//! or JSON-record output, synthetic panel generation with a
//! planted-truth sidecar, and cross-equation identity checks.

pub mod commands;
pub mod config;
pub mod error;
pub mod io;
pub mod render;
