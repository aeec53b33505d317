//! Monte Carlo estimators for outage probability and ergodic capacity.
//!
//! Every trial draws four uniforms (three channel gains and one power-splitting
//! factor for the random scheme) from a ChaCha8 stream addressed by trial index:
//! trial `k` always reads words `8k .. 8k + 8` of the keystream for the seed.
//! Trials are processed in fixed-size chunks, each summed sequentially, and the
//! chunk partials are combined by pairwise summation in chunk order. The result
//! is therefore bit-identical for a given `(seed, trials)` whatever the number of
//! worker threads.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{
    achievable_rate, deterministic_snr, legacy_rho, optimal_rho, snr_components, ChannelGains,
    Scheme, SystemParams,
};

/// Trials per chunk; chunk boundaries never depend on the worker count.
const CHUNK: u64 = 1 << 16;

/// Keystream words consumed per trial (four `f64` draws of two words each).
const WORDS_PER_TRIAL: u128 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McConfig {
    pub trials: u64,
    pub seed: u64,
    pub workers: usize,
}

impl McConfig {
    pub fn new(trials: u64, seed: u64, workers: usize) -> Result<Self> {
        let cfg = McConfig {
            trials,
            seed,
            workers,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::invalid("trials", "need at least one trial"));
        }
        if self.workers == 0 {
            return Err(Error::invalid("workers", "need at least one worker"));
        }
        Ok(())
    }

    pub fn with_trials(self, trials: u64) -> Self {
        McConfig { trials, ..self }
    }
}

impl Default for McConfig {
    fn default() -> Self {
        McConfig {
            trials: 1_000_000,
            seed: 0x5eed_5eed,
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub std_err: f64,
    pub trials: u64,
}

impl McEstimate {
    /// Number of standard errors separating `value` from the estimate.
    pub fn z_score(&self, value: f64) -> f64 {
        (self.mean - value) / self.std_err
    }
}

/// Performance measure estimated per trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Metric {
    Outage,
    Capacity,
}

impl Metric {
    pub fn name(&self) -> &'static str {
        match self {
            Metric::Outage => "outage",
            Metric::Capacity => "capacity",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "outage" => Ok(Metric::Outage),
            "capacity" => Ok(Metric::Capacity),
            other => Err(Error::invalid(
                "metric",
                format!("unknown metric {other:?} (expected outage or capacity)"),
            )),
        }
    }
}

/// One trial: a fading realization and the factor drawn for the random scheme.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Realization {
    pub gains: ChannelGains,
    pub rho_draw: f64,
}

fn exponential<R: Rng + ?Sized>(rng: &mut R, rate: f64) -> f64 {
    // 1 - U lies in (0, 1], so the logarithm is finite.
    -(1.0 - rng.random::<f64>()).ln() / rate
}

/// Draws the three exponential power gains by inverse CDF.
pub fn sample_gains<R: Rng + ?Sized>(p: &SystemParams, rng: &mut R) -> ChannelGains {
    ChannelGains {
        x: exponential(rng, p.lambda0),
        y: exponential(rng, p.lambda1),
        z: exponential(rng, p.lambda2),
    }
}

pub fn sample_realization<R: Rng + ?Sized>(p: &SystemParams, rng: &mut R) -> Realization {
    let gains = sample_gains(p, rng);
    Realization {
        gains,
        rho_draw: rng.random::<f64>(),
    }
}

/// Random stream positioned at the first draw of trial `trial`.
pub fn trial_stream(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_word_pos(trial as u128 * WORDS_PER_TRIAL);
    rng
}

/// End-to-end SNR of `scheme` on `r`.
pub fn realization_snr(scheme: Scheme, p: &SystemParams, r: &Realization) -> f64 {
    match scheme {
        Scheme::RandomPs => snr_components(p, &r.gains, r.rho_draw)
            .expect("drawn factor lies in [0, 1)")
            .combined(),
        other => deterministic_snr(other, p, &r.gains),
    }
}

#[derive(Debug, Clone)]
struct Moments {
    sum: Vec<f64>,
    sum_sq: Vec<f64>,
}

impl Moments {
    fn zeros(width: usize) -> Self {
        Moments {
            sum: vec![0.0; width],
            sum_sq: vec![0.0; width],
        }
    }

    fn merge(mut self, other: &Moments) -> Self {
        for k in 0..self.sum.len() {
            self.sum[k] += other.sum[k];
            self.sum_sq[k] += other.sum_sq[k];
        }
        self
    }
}

fn pairwise(parts: &[Moments], width: usize) -> Moments {
    match parts {
        [] => Moments::zeros(width),
        [one] => one.clone(),
        _ => {
            let (left, right) = parts.split_at(parts.len() / 2);
            pairwise(left, width).merge(&pairwise(right, width))
        }
    }
}

/// Runs `cfg.trials` trials, recording `width` statistics per trial through
/// `stat`, and returns their sums and sums of squares.
fn accumulate<F>(p: &SystemParams, cfg: &McConfig, width: usize, stat: F) -> Result<Moments>
where
    F: Fn(&Realization, &mut [f64]) + Sync,
{
    cfg.validate()?;
    let chunks = cfg.trials.div_ceil(CHUNK);
    let run_chunk = |c: u64| {
        let start = c * CHUNK;
        let end = (start + CHUNK).min(cfg.trials);
        let mut rng = trial_stream(cfg.seed, start);
        let mut acc = Moments::zeros(width);
        let mut values = vec![0.0; width];
        for _ in start..end {
            let r = sample_realization(p, &mut rng);
            stat(&r, &mut values);
            for (k, &v) in values.iter().enumerate() {
                acc.sum[k] += v;
                acc.sum_sq[k] += v * v;
            }
        }
        acc
    };
    let partials: Vec<Moments> = if cfg.workers == 1 {
        (0..chunks).map(run_chunk).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.workers)
            .build()
            .map_err(|e| Error::invalid("workers", e.to_string()))?;
        pool.install(|| (0..chunks).into_par_iter().map(run_chunk).collect())
    };
    Ok(pairwise(&partials, width))
}

fn finish(metric: Metric, sum: f64, sum_sq: f64, n: u64) -> McEstimate {
    let nf = n as f64;
    let mean = sum / nf;
    let std_err = match metric {
        Metric::Outage => (mean * (1.0 - mean) / nf).max(0.0).sqrt(),
        Metric::Capacity if n > 1 => {
            ((sum_sq - sum * mean) / (nf - 1.0)).max(0.0).sqrt() / nf.sqrt()
        }
        Metric::Capacity => 0.0,
    };
    McEstimate {
        mean,
        std_err,
        trials: n,
    }
}

/// Estimates `metric` for several schemes on common realizations.
pub fn estimate_many(
    schemes: &[Scheme],
    metric: Metric,
    p: &SystemParams,
    cfg: &McConfig,
) -> Result<Vec<McEstimate>> {
    p.validate()?;
    for s in schemes {
        if let Scheme::FixedPs(rho) = s {
            if !(0.0..=1.0).contains(rho) {
                return Err(Error::invalid(
                    "scheme",
                    format!("fixed factor {rho} outside [0, 1]"),
                ));
            }
        }
    }
    let gamma_th = p.gamma_th();
    let moments = accumulate(p, cfg, schemes.len(), |r, out| {
        for (slot, &s) in out.iter_mut().zip(schemes) {
            let snr = realization_snr(s, p, r);
            *slot = match metric {
                Metric::Outage => f64::from(u8::from(snr < gamma_th)),
                Metric::Capacity => achievable_rate(snr),
            };
        }
    })?;
    Ok((0..schemes.len())
        .map(|k| finish(metric, moments.sum[k], moments.sum_sq[k], cfg.trials))
        .collect())
}

/// Fraction of realizations whose rate falls below the target.
pub fn estimate_outage(scheme: Scheme, p: &SystemParams, cfg: &McConfig) -> Result<McEstimate> {
    Ok(estimate_many(&[scheme], Metric::Outage, p, cfg)?[0])
}

/// Sample mean of the achievable rate.
pub fn estimate_capacity(scheme: Scheme, p: &SystemParams, cfg: &McConfig) -> Result<McEstimate> {
    Ok(estimate_many(&[scheme], Metric::Capacity, p, cfg)?[0])
}

/// Whether the optimal factor meets the SNR threshold and whether the legacy
/// rate-driven factor does, in the model with direct-link combining and fallback.
pub fn success_events(p: &SystemParams, g: &ChannelGains) -> (bool, bool) {
    let gamma_th = p.gamma_th();
    let proposed = optimal_rho(p, g).gamma_end >= gamma_th;
    let legacy = snr_components(p, g, legacy_rho(p, g))
        .expect("legacy factor lies in [0, 1)")
        .with_direct_fallback()
        >= gamma_th;
    (proposed, legacy)
}

/// Counts realizations on which the two success events of [`success_events`] differ.
pub fn outage_event_mismatches(p: &SystemParams, cfg: &McConfig) -> Result<u64> {
    p.validate()?;
    let moments = accumulate(p, cfg, 1, |r, out| {
        let (a, b) = success_events(p, &r.gains);
        out[0] = f64::from(u8::from(a != b));
    })?;
    Ok(moments.sum[0] as u64)
}
