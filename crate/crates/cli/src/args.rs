use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "swipt",
    version,
    about = "Outage and capacity analysis of DF SWIPT relaying with a direct link",
    long_about = "Outage and capacity analysis of decode-and-forward SWIPT relaying with a \
                  direct link. Values come from flags, then from --config, then from defaults."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Optimal power-splitting factor and end-to-end SNR for given channel gains.
    Rho(RhoArgs),
    /// Outage probability over an SNR grid.
    Outage(EvalArgs),
    /// Ergodic capacity over an SNR grid.
    Capacity(EvalArgs),
    /// Full sweep over schemes, metrics and evaluation modes.
    Sweep(SweepArgs),
    /// Check analytic results against Monte Carlo and numerical references.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    /// Flat key = value file supplying defaults for any long flag.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Energy conversion efficiency in (0, 1).
    #[arg(long)]
    pub eta: Option<f64>,

    /// Rate of the source-destination power gain (1 / mean).
    #[arg(long, conflicts_with = "mean_gain0")]
    pub lambda0: Option<f64>,
    /// Rate of the source-relay power gain (1 / mean).
    #[arg(long, conflicts_with = "mean_gain1")]
    pub lambda1: Option<f64>,
    /// Rate of the relay-destination power gain (1 / mean).
    #[arg(long, conflicts_with = "mean_gain2")]
    pub lambda2: Option<f64>,

    /// Mean source-destination power gain.
    #[arg(long = "mean-gain0", value_name = "MEAN")]
    pub mean_gain0: Option<f64>,
    /// Mean source-relay power gain.
    #[arg(long = "mean-gain1", value_name = "MEAN")]
    pub mean_gain1: Option<f64>,
    /// Mean relay-destination power gain.
    #[arg(long = "mean-gain2", value_name = "MEAN")]
    pub mean_gain2: Option<f64>,

    /// Target rate in bit/s/Hz.
    #[arg(long)]
    pub rth: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct McArgs {
    /// Monte Carlo trials per SNR point.
    #[arg(long)]
    pub trials: Option<u64>,
    /// Random seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads (results do not depend on this).
    #[arg(long)]
    pub workers: Option<usize>,
    /// Gauss-Chebyshev node counts N,M,N1,N2,N3.
    #[arg(long, value_name = "N,M,N1,N2,N3")]
    pub quad: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Write the CSV here instead of standard output.
    #[arg(long, value_name = "CSV")]
    pub out: Option<PathBuf>,
    /// Also write a matplotlib script that plots the CSV (requires --out).
    #[arg(long, value_name = "SCRIPT")]
    pub plot: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct RhoArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Transmit SNR in dB.
    #[arg(long = "snr-db", value_name = "DB")]
    pub snr_db: Option<f64>,
    /// Source-destination power gain.
    #[arg(long)]
    pub x: f64,
    /// Source-relay power gain.
    #[arg(long)]
    pub y: f64,
    /// Relay-destination power gain.
    #[arg(long)]
    pub z: f64,
}

#[derive(Debug, Clone, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub mc: McArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    /// SNR grid in dB, start:stop:step or a single value.
    #[arg(long = "snr-db", value_name = "START:STOP:STEP")]
    pub snr_db: Option<String>,
    /// Comma-separated schemes: proposed, legacy, legacy-dl, random, noncoop, fixed:RHO.
    #[arg(long)]
    pub schemes: Option<String>,
    /// Comma-separated evaluation modes: exact, approx, mc.
    #[arg(long)]
    pub modes: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    /// Outage of the compared schemes, 0..40 dB.
    Fig1,
    /// Ergodic capacity of the compared schemes, 0..40 dB.
    Fig2,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub eval: EvalArgs,
    /// Starting point for unspecified options [default: fig1].
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    /// Comma-separated metrics: outage, capacity.
    #[arg(long)]
    pub metrics: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub mc: McArgs,
    /// Print the report as JSON.
    #[arg(long)]
    pub json: bool,
    /// Evaluate the analytic side with the threshold 2^(2 Rth - 1); checks
    /// comparing against Monte Carlo should then fail.
    #[arg(long = "negative-control")]
    pub negative_control: bool,
}
