//! Sweep driver, CSV persistence, plot-script emission and the oracle
//! self-test behind the `fidmet` binary.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod fit_report;
pub mod plot;
pub mod selftest;
pub mod sweep;

pub use error::{CliError, Result};
pub use plot::{emit_plot_script, PlotKind};
pub use selftest::{run_selftest, SelftestReport};
pub use sweep::{compute_sweep, run_sweep, Axis, Coords, Grid, McSettings, Method, Model, SweepResult, SweepRow, SweepSpec};
