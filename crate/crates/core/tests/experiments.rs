use std::process::Command;

use swipt_core::experiments::{
    emit_csv, emit_plot_script, render_csv, run_sweep, validate, Mode, SnrGrid, Status, SweepRow,
    SweepSpec, ValidateOptions, CSV_HEADER,
};
use swipt_core::montecarlo::{McConfig, Metric};
use swipt_core::Scheme;

fn small(spec: SweepSpec, trials: u64) -> SweepSpec {
    SweepSpec {
        mc: McConfig::new(trials, 17, 2).unwrap(),
        ..spec
    }
}

#[test]
fn fig1_sweep_has_every_row() {
    let rows = run_sweep(&small(SweepSpec::fig1(), 2000)).unwrap();
    // 9 points: 4 schemes by Monte Carlo plus exact and approx for the proposed one.
    assert_eq!(rows.len(), 9 * 6);
    assert_eq!(rows.iter().filter(|r| r.mode == Mode::Mc).count(), 36);
    for db in SweepSpec::fig1().grid.points() {
        for s in Scheme::comparison_set() {
            assert!(rows
                .iter()
                .any(|r| r.snr_db == db && r.scheme == s && r.mode == Mode::Mc));
        }
        for mode in [Mode::Exact, Mode::Approx] {
            let r = rows
                .iter()
                .find(|r| r.snr_db == db && r.mode == mode)
                .unwrap();
            assert_eq!(r.scheme, Scheme::ProposedDpss);
            assert!(r.std_err.is_none());
            assert!(r.value > 0.0 && r.value < 1.0);
        }
    }
    assert!(rows
        .iter()
        .filter(|r| r.mode == Mode::Mc)
        .all(|r| r.std_err.is_some()));
}

#[test]
fn csv_shapes_and_determinism() {
    assert_eq!(render_csv(&[]), format!("{CSV_HEADER}\n"));

    let one = SweepSpec {
        grid: SnrGrid::new(10.0, 10.0, 1.0).unwrap(),
        schemes: vec![Scheme::ProposedDpss],
        modes: vec![Mode::Exact],
        ..small(SweepSpec::fig1(), 10)
    };
    let text = render_csv(&run_sweep(&one).unwrap());
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(
        lines[1].starts_with("10,proposed,outage,exact,0.0276"),
        "{text}"
    );
    assert!(lines[1].ends_with(','));

    let dir = tempfile::tempdir().unwrap();
    let spec = small(SweepSpec::fig1(), 5000);
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    emit_csv(&run_sweep(&spec).unwrap(), &a).unwrap();
    let spec_one_worker = SweepSpec {
        mc: McConfig {
            workers: 1,
            ..spec.mc
        },
        ..spec
    };
    emit_csv(&run_sweep(&spec_one_worker).unwrap(), &b).unwrap();
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

fn has_matplotlib() -> bool {
    Command::new("python3")
        .args(["-c", "import matplotlib"])
        .output()
        .is_ok_and(|o| o.status.success())
}

#[test]
fn plot_script_renders_an_image() {
    if !has_matplotlib() {
        eprintln!("python3 with matplotlib not found; skipping");
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let spec = SweepSpec {
        metrics: vec![Metric::Outage, Metric::Capacity],
        grid: SnrGrid::new(0.0, 20.0, 10.0).unwrap(),
        ..small(SweepSpec::fig2(), 2000)
    };
    let rows = run_sweep(&spec).unwrap();
    let csv = dir.path().join("sweep.csv");
    let script = dir.path().join("plot.py");
    emit_csv(&rows, &csv).unwrap();
    emit_plot_script(&rows, &csv, &script).unwrap();
    let image = dir.path().join("out.png");
    let out = Command::new("python3")
        .arg(&script)
        .arg(&csv)
        .arg(&image)
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let png = std::fs::read(&image).unwrap();
    assert_eq!(&png[..8], b"\x89PNG\r\n\x1a\n");
}

#[test]
fn fig2_proposed_capacity_on_top() {
    let rows = run_sweep(&small(SweepSpec::fig2(), 50_000)).unwrap();
    let mc: Vec<&SweepRow> = rows.iter().filter(|r| r.mode == Mode::Mc).collect();
    for db in SweepSpec::fig2().grid.points() {
        let at = |s: Scheme| {
            mc.iter()
                .find(|r| r.snr_db == db && r.scheme == s)
                .unwrap()
                .value
        };
        let best = at(Scheme::ProposedDpss);
        for s in Scheme::comparison_set().into_iter().skip(1) {
            assert!(best > at(s), "{db} dB vs {s}");
        }
    }
}

fn check(report: &swipt_core::experiments::Report, id: u32) -> Status {
    report.checks.iter().find(|c| c.id == id).unwrap().status
}

#[test]
fn low_trial_counts_are_inconclusive_not_failures() {
    let opts = ValidateOptions {
        mc: McConfig::new(1000, 5, 2).unwrap(),
        ..ValidateOptions::default()
    };
    let report = validate(&opts).unwrap();
    assert_eq!(report.checks.len(), 9);
    assert_eq!(check(&report, 1), Status::Inconclusive);
    assert_eq!(check(&report, 6), Status::Inconclusive);
    assert_eq!(check(&report, 3), Status::Pass);
    assert_eq!(check(&report, 9), Status::Pass);
}

#[test]
fn negative_control_fails_the_monte_carlo_comparison() {
    let opts = ValidateOptions {
        mc: McConfig::new(200_000, 5, 2).unwrap(),
        corrupt_threshold: true,
        ..ValidateOptions::default()
    };
    let report = validate(&opts).unwrap();
    assert_eq!(check(&report, 1), Status::Fail);
    assert!(!report.passed());
    let json = report.to_json();
    assert!(json.contains("\"FAIL\""), "{json}");
}
