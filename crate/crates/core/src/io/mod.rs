//! Output formats and the end-to-end runs behind the command-line tool.

pub mod config;
pub mod manifest;
pub mod pgm;
pub mod pipeline;
pub mod tables;

pub use config::{ConjectureConfig, SimulateConfig, VerifyConfig};
pub use manifest::RunManifest;
pub use pgm::{export_field_pgm, parse_pgm, render_field_pgm};
pub use pipeline::{run_conjecture, run_mc, run_simulate, run_verify, VerifyOutcome};
pub use tables::fmt_f64;
