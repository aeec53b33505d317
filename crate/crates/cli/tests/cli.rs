use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn swipt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_swipt"))
        .args(args)
        .env("RUST_LOG", "error")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn field<'a>(text: &'a str, key: &str) -> &'a str {
    text.lines()
        .find_map(|l| l.strip_prefix(key)?.strip_prefix('='))
        .unwrap_or_else(|| panic!("no {key} in {text}"))
}

#[test]
fn rho_reports_the_balanced_factor() {
    let o = swipt(&[
        "rho", "--snr-db", "10", "--x", "0.5", "--y", "2", "--z", "1",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    // rho = (y - x) / (y + eta y z) = 1.5 / 3
    let rho: f64 = field(&text, "rho").parse().unwrap();
    assert!((rho - 0.5).abs() < 1e-15);
    assert_eq!(field(&text, "branch"), "relay");
    let gamma: f64 = field(&text, "gamma_op").parse().unwrap();
    assert!((gamma - 10.0).abs() < 1e-12);

    let direct = stdout(&swipt(&["rho", "--x", "3", "--y", "2", "--z", "1"]));
    assert_eq!(field(&direct, "branch"), "direct");
    assert_eq!(field(&direct, "rho"), "0");
}

#[test]
fn outage_csv_on_stdout() {
    let o = swipt(&["outage", "--snr-db", "10"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "snr_db,scheme,metric,mode,value,std_err");
    assert!(
        lines[1].starts_with("10,proposed,outage,exact,0.0276"),
        "{text}"
    );
    assert_eq!(lines.len(), 2);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["outage", "--snr-db", "nope"][..],
        &["outage", "--eta", "1.5"],
        &["outage", "--schemes", "bogus"],
        &["outage", "--lambda0", "1", "--mean-gain0", "1"],
        &["outage", "--plot", "p.py"],
        &["sweep", "--trials", "0"],
        &["frobnicate"],
    ] {
        let o = swipt(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
    assert_eq!(swipt(&["--help"]).status.code(), Some(0));
}

#[test]
fn io_errors_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.conf");
    let o = swipt(&["outage", "--config", missing.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));

    let bad_out = dir.path().join("no/such/dir/out.csv");
    let o = swipt(&[
        "outage",
        "--snr-db",
        "10",
        "--out",
        bad_out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(3));
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn flags_override_config_which_overrides_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let conf = write(
        dir.path(),
        "a.conf",
        "# reference channel, stronger direct link\nsnr_db = 20\nmean-gain0 = 2\nrth = 0.5\n",
    );
    let value = |extra: &[&str]| -> f64 {
        let mut args = vec!["outage", "--config", conf.as_str()];
        args.extend_from_slice(extra);
        let o = swipt(&args);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let text = stdout(&o);
        let row = text.lines().nth(1).unwrap();
        row.split(',').nth(4).unwrap().parse().unwrap()
    };
    let from_config = value(&[]);
    let lambda_flag = value(&["--lambda0", "0.5"]);
    assert_eq!(from_config, lambda_flag);
    let mean_flag = value(&["--mean-gain0", "1"]);
    assert!(mean_flag > from_config);
    let defaults = stdout(&swipt(&["outage", "--snr-db", "20"]));
    let flag_only = stdout(&swipt(&[
        "outage",
        "--config",
        &conf,
        "--rth",
        "1",
        "--mean-gain0",
        "1",
    ]));
    assert_eq!(defaults, flag_only);

    let both = write(dir.path(), "b.conf", "lambda0 = 1\nmean_gain0 = 1\n");
    assert_eq!(swipt(&["outage", "--config", &both]).status.code(), Some(2));
    let unknown = write(dir.path(), "c.conf", "colour = blue\n");
    assert_eq!(
        swipt(&["outage", "--config", &unknown]).status.code(),
        Some(2)
    );
}

#[test]
fn sweep_files_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, workers: &str| {
        let csv = dir.path().join(format!("{name}.csv"));
        let plot = dir.path().join(format!("{name}.py"));
        let o = swipt(&[
            "sweep",
            "--snr-db",
            "0:20:10",
            "--trials",
            "20000",
            "--seed",
            "9",
            "--workers",
            workers,
            "--out",
            csv.to_str().unwrap(),
            "--plot",
            plot.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let script = fs::read_to_string(&plot).unwrap();
        assert!(script.contains("swipt-plot-script v1"));
        fs::read(csv).unwrap()
    };
    let a = run("a", "1");
    let b = run("b", "3");
    assert_eq!(a, b);
    // 3 points x (4 Monte Carlo + exact + approx)
    assert_eq!(String::from_utf8(a).unwrap().lines().count(), 1 + 3 * 6);
}

#[test]
fn validate_json_reports_every_check() {
    let o = swipt(&["validate", "--json", "--trials", "2000"]);
    // Two checks cannot pass at any trial count, so the run reports failure.
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    for id in 1..=9 {
        assert!(text.contains(&format!("\"id\": {id}")) || text.contains(&format!("\"id\":{id}")));
    }
    assert!(text.contains("INCONCLUSIVE"));
}
