//! Standalone matplotlib script for sweep results.
//!
//! The script reads the sweep CSV at run time, so it stays valid if the CSV is
//! regenerated with the same series. Usage:
//!
//! ```text
//! python3 plot.py [csv_path] [image_path]
//! ```
//!
//! Both arguments are optional; the defaults are the CSV path recorded at
//! generation time and the script path with a `.png` extension. Scripts carry a
//! `swipt-plot-script v1` marker; the version changes whenever the argument
//! convention or the expected CSV columns change.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::model::Scheme;
use crate::montecarlo::Metric;

use super::sweep::{Mode, SweepRow};

pub const PLOT_SCRIPT_VERSION: u32 = 1;

/// Python string literal for `s`.
fn py_str(s: &str) -> String {
    let mut out = String::from("'");
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '\'' => out.push_str("\\'"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
    out.push('\'');
    out
}

/// Metrics present in `rows`, outage first, each with its `(scheme, mode)` series
/// in first-appearance order.
fn panels(rows: &[SweepRow]) -> Vec<(Metric, Vec<(Scheme, Mode)>)> {
    let mut out: Vec<(Metric, Vec<(Scheme, Mode)>)> = Vec::new();
    for metric in [Metric::Outage, Metric::Capacity] {
        let mut series = Vec::new();
        for r in rows.iter().filter(|r| r.metric == metric) {
            if !series.contains(&(r.scheme, r.mode)) {
                series.push((r.scheme, r.mode));
            }
        }
        if !series.is_empty() {
            out.push((metric, series));
        }
    }
    out
}

pub fn render_plot_script(rows: &[SweepRow], csv_path: &Path) -> String {
    let mut s = String::new();
    let w = &mut s;
    let _ = writeln!(w, "#!/usr/bin/env python3");
    let _ = writeln!(w, "# swipt-plot-script v{PLOT_SCRIPT_VERSION}");
    let _ = writeln!(w, "# usage: python3 <script> [csv_path] [image_path]");
    let _ = writeln!(w, "import csv");
    let _ = writeln!(w, "import os");
    let _ = writeln!(w, "import sys");
    let _ = writeln!(w);
    let _ = writeln!(w, "import matplotlib");
    let _ = writeln!(w, "matplotlib.use('Agg')");
    let _ = writeln!(w, "import matplotlib.pyplot as plt");
    let _ = writeln!(w);
    let _ = writeln!(w, "HERE = os.path.dirname(os.path.abspath(__file__))");
    let _ = writeln!(w, "DEFAULT_CSV = {}", py_str(&csv_path.to_string_lossy()));
    let _ = writeln!(w, "PANELS = [");
    for (metric, series) in panels(rows) {
        let (scale, label) = match metric {
            Metric::Outage => ("log", "Outage probability"),
            Metric::Capacity => ("linear", "Ergodic capacity (bit/s/Hz)"),
        };
        let _ = writeln!(
            w,
            "    ({}, {}, {}, [",
            py_str(metric.name()),
            py_str(scale),
            py_str(label)
        );
        for (scheme, mode) in series {
            let _ = writeln!(
                w,
                "        ({}, {}),",
                py_str(&scheme.to_string()),
                py_str(mode.name())
            );
        }
        let _ = writeln!(w, "    ]),");
    }
    let _ = writeln!(w, "]");
    s.push_str(PLOT_BODY);
    s
}

const PLOT_BODY: &str = r#"

def resolve_csv(path):
    if os.path.isabs(path) or os.path.exists(path):
        return path
    return os.path.join(HERE, path)


def load(path):
    data = {}
    with open(path, newline="") as f:
        for row in csv.DictReader(f):
            key = (row["metric"], row["scheme"], row["mode"])
            data.setdefault(key, []).append((float(row["snr_db"]), float(row["value"])))
    for points in data.values():
        points.sort()
    return data


def main():
    csv_path = resolve_csv(sys.argv[1] if len(sys.argv) > 1 else DEFAULT_CSV)
    image = sys.argv[2] if len(sys.argv) > 2 else os.path.splitext(os.path.abspath(__file__))[0] + ".png"
    data = load(csv_path)
    fig, axes = plt.subplots(1, max(len(PANELS), 1), figsize=(6 * max(len(PANELS), 1), 4.5), squeeze=False)
    for ax, (metric, scale, label, series) in zip(axes[0], PANELS):
        for scheme, mode in series:
            points = data.get((metric, scheme, mode), [])
            if scale == "log":
                points = [(x, y) for x, y in points if y > 0]
            if not points:
                continue
            xs, ys = zip(*points)
            style = "o" if mode == "mc" else "-"
            ax.plot(xs, ys, style, label=f"{scheme} ({mode})", fillstyle="none")
        ax.set_yscale(scale)
        ax.set_xlabel("Transmit SNR (dB)")
        ax.set_ylabel(label)
        ax.grid(True, which="both", alpha=0.3)
        ax.legend(fontsize="small")
    fig.tight_layout()
    fig.savefig(image, dpi=120)
    print(image)


if __name__ == "__main__":
    main()
"#;

pub fn emit_plot_script(rows: &[SweepRow], csv_path: &Path, path: &Path) -> Result<()> {
    fs::write(path, render_plot_script(rows, csv_path)).map_err(|e| Error::io(path, e))
}
