mod args;
mod config;
mod error;

use std::io::Write;
use std::path::Path;
use std::process::ExitCode;
use std::str::FromStr;

use clap::Parser;
use swipt_core::analytic::QuadratureSpec;
use swipt_core::experiments::{
    emit_csv, emit_plot_script, render_csv, run_sweep, validate, Mode, SnrGrid, SweepRow,
    SweepSpec, ValidateOptions,
};
use swipt_core::model::{achievable_rate, optimal_rho, snr_components};
use swipt_core::montecarlo::{McConfig, Metric};
use swipt_core::{ChannelGains, Scheme, SystemParams};

use args::{Cli, Command, EvalArgs, McArgs, ModelArgs, Preset, RhoArgs, SweepArgs, ValidateArgs};
use config::ConfigFile;
use error::CliError;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn run(command: Command) -> Result<ExitCode, CliError> {
    match command {
        Command::Rho(a) => rho(&a),
        Command::Outage(a) => evaluate(&a, Metric::Outage),
        Command::Capacity(a) => evaluate(&a, Metric::Capacity),
        Command::Sweep(a) => sweep(&a),
        Command::Validate(a) => run_validate(&a),
    }
}

fn load_config(model: &ModelArgs) -> Result<ConfigFile, CliError> {
    match &model.config {
        Some(path) => ConfigFile::load(path),
        None => Ok(ConfigFile::default()),
    }
}

/// Rate of one gain: `--lambdaK`, else `--mean-gainK`, else the config file
/// (which may hold either, not both), else `default`.
fn gain_rate(
    cfg: &ConfigFile,
    k: usize,
    lambda: Option<f64>,
    mean: Option<f64>,
    default: f64,
) -> Result<f64, CliError> {
    if let Some(l) = lambda {
        return Ok(l);
    }
    if let Some(m) = mean {
        return Ok(1.0 / m);
    }
    let lambda_key = format!("lambda{k}");
    let mean_key = format!("mean-gain{k}");
    match (cfg.get::<f64>(&lambda_key)?, cfg.get::<f64>(&mean_key)?) {
        (Some(_), Some(_)) => Err(CliError::Usage(format!(
            "config sets both {lambda_key} and {mean_key}"
        ))),
        (Some(l), None) => Ok(l),
        (None, Some(m)) => Ok(1.0 / m),
        (None, None) => Ok(default),
    }
}

/// System parameters at 0 dB; callers set the SNR.
fn resolve_params(model: &ModelArgs, cfg: &ConfigFile) -> Result<SystemParams, CliError> {
    let d = SystemParams::reference(1.0);
    let p = SystemParams {
        gamma_in: 1.0,
        eta: cfg.pick(model.eta, "eta")?.unwrap_or(d.eta),
        lambda0: gain_rate(cfg, 0, model.lambda0, model.mean_gain0, d.lambda0)?,
        lambda1: gain_rate(cfg, 1, model.lambda1, model.mean_gain1, d.lambda1)?,
        lambda2: gain_rate(cfg, 2, model.lambda2, model.mean_gain2, d.lambda2)?,
        r_th: cfg.pick(model.rth, "rth")?.unwrap_or(d.r_th),
    };
    p.validate()?;
    Ok(p)
}

fn resolve_mc(mc: &McArgs, cfg: &ConfigFile) -> Result<(McConfig, QuadratureSpec), CliError> {
    let d = McConfig::default();
    let config = McConfig::new(
        cfg.pick(mc.trials, "trials")?.unwrap_or(d.trials),
        cfg.pick(mc.seed, "seed")?.unwrap_or(d.seed),
        cfg.pick(mc.workers, "workers")?.unwrap_or(d.workers),
    )?;
    let quad = match cfg.pick(mc.quad.clone(), "quad")? {
        Some(s) => s.parse::<QuadratureSpec>()?,
        None => QuadratureSpec::default(),
    };
    Ok((config, quad))
}

fn parse_list<T>(s: &str) -> Result<Vec<T>, CliError>
where
    T: FromStr<Err = swipt_core::Error>,
{
    let items = s
        .split(',')
        .filter(|v| !v.trim().is_empty())
        .map(T::from_str)
        .collect::<Result<Vec<T>, _>>()?;
    Ok(items)
}

fn rho(a: &RhoArgs) -> Result<ExitCode, CliError> {
    let cfg = load_config(&a.model)?;
    let snr_db = match a.snr_db {
        Some(db) => db,
        None => match cfg.raw("snr-db") {
            Some(raw) => raw.parse::<f64>().map_err(|_| {
                CliError::Usage(format!("rho takes a single --snr-db value, got {raw:?}"))
            })?,
            None => 10.0,
        },
    };
    let p = resolve_params(&a.model, &cfg)?.with_snr_db(snr_db);
    p.validate()?;
    let g = ChannelGains::new(a.x, a.y, a.z)?;
    let d = optimal_rho(&p, &g);
    let c = snr_components(&p, &g, d.rho)?;
    let mut out = std::io::stdout().lock();
    let lines = [
        format!("snr_db={snr_db}"),
        format!("gamma_in={}", p.gamma_in),
        format!("gamma_th={}", p.gamma_th()),
        format!("branch={}", if d.used_relay { "relay" } else { "direct" }),
        format!("rho={}", d.rho),
        format!("gamma_op={}", d.gamma_end),
        format!("gamma_r={}", c.gamma_r),
        format!("gamma_sd={}", c.gamma_sd),
        format!("gamma_rd={}", c.gamma_rd),
        format!("rate={}", achievable_rate(d.gamma_end)),
        format!("outage={}", d.gamma_end < p.gamma_th()),
    ];
    for l in lines {
        writeln!(out, "{l}").map_err(|e| CliError::Io(format!("stdout: {e}")))?;
    }
    Ok(ExitCode::SUCCESS)
}

/// Builds the sweep from `base`, overriding anything given by flag or config.
fn build_spec(
    eval: &EvalArgs,
    cfg: &ConfigFile,
    base: SweepSpec,
    metrics: Option<Vec<Metric>>,
) -> Result<SweepSpec, CliError> {
    let params = resolve_params(&eval.model, cfg)?;
    let (mc, quadrature) = resolve_mc(&eval.mc, cfg)?;
    let grid = match cfg.pick(eval.snr_db.clone(), "snr-db")? {
        Some(s) => s.parse::<SnrGrid>()?,
        None => base.grid,
    };
    let schemes = match cfg.pick(eval.schemes.clone(), "schemes")? {
        Some(s) => parse_list::<Scheme>(&s)?,
        None => base.schemes,
    };
    let modes = match cfg.pick(eval.modes.clone(), "modes")? {
        Some(s) => parse_list::<Mode>(&s)?,
        None => base.modes,
    };
    let spec = SweepSpec {
        grid,
        schemes,
        metrics: metrics.unwrap_or(base.metrics),
        modes,
        params,
        quadrature,
        mc,
    };
    spec.validate()?;
    Ok(spec)
}

fn write_outputs(rows: &[SweepRow], eval: &EvalArgs, cfg: &ConfigFile) -> Result<(), CliError> {
    let out = cfg.pick(eval.output.out.clone(), "out")?;
    let plot = cfg.pick(eval.output.plot.clone(), "plot")?;
    match (&out, &plot) {
        (None, Some(_)) => {
            return Err(CliError::Usage(
                "--plot needs --out: the script reads the CSV file".into(),
            ))
        }
        (Some(csv), _) => emit_csv(rows, csv)?,
        (None, None) => {
            std::io::stdout()
                .lock()
                .write_all(render_csv(rows).as_bytes())
                .map_err(|e| CliError::Io(format!("stdout: {e}")))?;
        }
    }
    if let (Some(csv), Some(script)) = (&out, &plot) {
        emit_plot_script(rows, Path::new(csv), script)?;
    }
    Ok(())
}

fn evaluate(a: &EvalArgs, metric: Metric) -> Result<ExitCode, CliError> {
    let cfg = load_config(&a.model)?;
    let base = SweepSpec {
        schemes: vec![Scheme::ProposedDpss],
        modes: vec![match metric {
            Metric::Outage => Mode::Exact,
            Metric::Capacity => Mode::Approx,
        }],
        ..SweepSpec::fig1()
    };
    let spec = build_spec(a, &cfg, base, Some(vec![metric]))?;
    let rows = run_sweep(&spec)?;
    write_outputs(&rows, a, &cfg)?;
    Ok(ExitCode::SUCCESS)
}

fn sweep(a: &SweepArgs) -> Result<ExitCode, CliError> {
    let cfg = load_config(&a.eval.model)?;
    let preset = match a.preset {
        Some(p) => p,
        None => match cfg.raw("preset") {
            Some("fig1") | None => Preset::Fig1,
            Some("fig2") => Preset::Fig2,
            Some(other) => {
                return Err(CliError::Usage(format!(
                    "config key preset: expected fig1 or fig2, got {other:?}"
                )))
            }
        },
    };
    let base = match preset {
        Preset::Fig1 => SweepSpec::fig1(),
        Preset::Fig2 => SweepSpec::fig2(),
    };
    let metrics = cfg
        .pick(a.metrics.clone(), "metrics")?
        .map(|s| parse_list::<Metric>(&s))
        .transpose()?;
    let spec = build_spec(&a.eval, &cfg, base, metrics)?;
    let rows = run_sweep(&spec)?;
    log::info!("{} rows", rows.len());
    write_outputs(&rows, &a.eval, &cfg)?;
    Ok(ExitCode::SUCCESS)
}

fn run_validate(a: &ValidateArgs) -> Result<ExitCode, CliError> {
    let cfg = load_config(&a.model)?;
    let params = resolve_params(&a.model, &cfg)?;
    let (mc, quadrature) = resolve_mc(&a.mc, &cfg)?;
    let report = validate(&ValidateOptions {
        params,
        quadrature,
        mc,
        corrupt_threshold: a.negative_control,
    })?;
    let text = if a.json {
        report.to_json() + "\n"
    } else {
        report.to_string()
    };
    std::io::stdout()
        .lock()
        .write_all(text.as_bytes())
        .map_err(|e| CliError::Io(format!("stdout: {e}")))?;
    Ok(if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
