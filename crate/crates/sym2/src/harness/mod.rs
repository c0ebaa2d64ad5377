//! Sweeps, verification suites and report rendering behind the `sym2moment` binary.

pub mod config;
pub mod moment;
pub mod output;
pub mod plotdata;
pub mod verify;

pub use config::{Format, RunConfig, Suite, VERSION};
pub use moment::{cmd_moment, moment_weight, MomentRow};
pub use output::{read_moment_records, render_checks, render_moment, MomentRecord, CHECK_HEADER, MOMENT_HEADER};
pub use plotdata::{cmd_plotdata, plot_records, PlotRecord, PLOT_HEADER};
pub use verify::{cmd_verify, Check, Status};

use crate::error::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

/// One JSON object per line on stderr.
pub fn log_event(v: serde_json::Value) {
    eprintln!("{v}");
}

pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Config(_) | Error::ContourOutOfRange { .. } | Error::Io(_) => EXIT_CONFIG,
        _ => EXIT_CHECK_FAILED,
    }
}
