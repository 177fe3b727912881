//! Front end for the write channel library: sweeps over parameter grids,
//! CSV and SVG output, and the `verify` self-check suite.

pub mod config;
mod error;
pub mod plot;
pub mod sweep;
pub mod verify;

pub use config::{parse_config, Output, SweepConfig, SweepOverrides};
pub use error::{CliError, Result};
pub use plot::{render_plot, render_svg, Figure};
pub use sweep::{parse_csv, read_csv, run_sweep, to_csv_string, write_csv, SweepResult, SweepRow, CSV_HEADER};

/// Environment variable holding the default master seed.
pub const SEED_ENV: &str = "BPMR_SEED";
