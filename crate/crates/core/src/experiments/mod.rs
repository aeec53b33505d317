//! SNR sweeps, their CSV and plot-script output, and the validation report.

mod csv;
mod plot;
mod sweep;
mod validate;

pub use csv::{emit_csv, format_sig, render_csv, row_order, CSV_HEADER};
pub use plot::{emit_plot_script, render_plot_script, PLOT_SCRIPT_VERSION};
pub use sweep::{run_sweep, Mode, SnrGrid, SweepRow, SweepSpec};
pub use validate::{validate, Check, Report, Status, ValidateOptions};
