use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::analytic::{ergodic_capacity_with, outage_probability, EvalMode, QuadratureSpec};
use crate::error::{Error, Result};
use crate::model::{Scheme, SystemParams};
use crate::montecarlo::{estimate_many, McConfig, Metric};

/// Inclusive dB grid `start, start + step, ..., <= stop`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnrGrid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl SnrGrid {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self> {
        let g = SnrGrid { start, stop, step };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.start.is_finite() && self.stop.is_finite()) {
            return Err(Error::invalid("snr_db", "grid bounds must be finite"));
        }
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(Error::invalid(
                "snr_db",
                format!("step must be > 0, got {}", self.step),
            ));
        }
        if self.stop < self.start {
            return Err(Error::invalid(
                "snr_db",
                format!("stop {} is below start {}", self.stop, self.start),
            ));
        }
        Ok(())
    }

    /// Grid points, computed as `start + k step` so no error accumulates.
    pub fn points(&self) -> Vec<f64> {
        let count = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..count)
            .map(|k| self.start + k as f64 * self.step)
            .collect()
    }
}

impl FromStr for SnrGrid {
    type Err = Error;

    /// Parses `start:stop:step`, or a single value for a one-point grid.
    fn from_str(s: &str) -> Result<Self> {
        let parts = s
            .split(':')
            .map(|v| v.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::invalid("snr_db", format!("{s:?}: {e}")))?;
        match parts[..] {
            [v] => SnrGrid::new(v, v, 1.0),
            [start, stop, step] => SnrGrid::new(start, stop, step),
            _ => Err(Error::invalid(
                "snr_db",
                format!("expected start:stop:step, got {s:?}"),
            )),
        }
    }
}

impl fmt::Display for SnrGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.stop, self.step)
    }
}

/// Evaluator behind a sweep row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    Exact,
    Approx,
    Mc,
}

impl Mode {
    pub const ALL: [Mode; 3] = [Mode::Exact, Mode::Approx, Mode::Mc];

    pub fn name(&self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Approx => "approx",
            Mode::Mc => "mc",
        }
    }

    pub fn analytic(&self) -> Option<EvalMode> {
        match self {
            Mode::Exact => Some(EvalMode::Exact),
            Mode::Approx => Some(EvalMode::Approx),
            Mode::Mc => None,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "exact" => Ok(Mode::Exact),
            "approx" => Ok(Mode::Approx),
            "mc" => Ok(Mode::Mc),
            other => Err(Error::invalid(
                "mode",
                format!("unknown mode {other:?} (expected exact, approx or mc)"),
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub grid: SnrGrid,
    pub schemes: Vec<Scheme>,
    pub metrics: Vec<Metric>,
    pub modes: Vec<Mode>,
    /// Channel and rate parameters; `gamma_in` is replaced at every grid point.
    pub params: SystemParams,
    pub quadrature: QuadratureSpec,
    pub mc: McConfig,
}

impl SweepSpec {
    /// Outage of the four compared schemes over 0..40 dB.
    pub fn fig1() -> Self {
        SweepSpec {
            grid: SnrGrid {
                start: 0.0,
                stop: 40.0,
                step: 5.0,
            },
            schemes: Scheme::comparison_set(),
            metrics: vec![Metric::Outage],
            modes: Mode::ALL.to_vec(),
            params: SystemParams::reference(1.0),
            quadrature: QuadratureSpec::default(),
            mc: McConfig::default(),
        }
    }

    /// Ergodic capacity of the four compared schemes over 0..40 dB, 20-node rules.
    pub fn fig2() -> Self {
        SweepSpec {
            metrics: vec![Metric::Capacity],
            quadrature: QuadratureSpec::default().with_capacity_nodes(20),
            ..SweepSpec::fig1()
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.grid.validate()?;
        if self.schemes.is_empty() {
            return Err(Error::invalid("schemes", "need at least one scheme"));
        }
        if self.metrics.is_empty() {
            return Err(Error::invalid("metrics", "need at least one metric"));
        }
        if self.modes.is_empty() {
            return Err(Error::invalid("modes", "need at least one mode"));
        }
        for s in &self.schemes {
            if let Scheme::FixedPs(rho) = s {
                if !(0.0..=1.0).contains(rho) {
                    return Err(Error::invalid(
                        "schemes",
                        format!("fixed factor {rho} outside [0, 1]"),
                    ));
                }
            }
        }
        self.params.validate()?;
        self.quadrature.validate()?;
        self.mc.validate()
    }

    /// Whether a `(scheme, mode)` pair has an evaluator. Closed forms exist only
    /// for the proposed scheme; Monte Carlo covers every scheme.
    pub fn applicable(scheme: Scheme, mode: Mode) -> bool {
        mode == Mode::Mc || scheme == Scheme::ProposedDpss
    }

    /// Requested `(scheme, metric, mode)` combinations that will produce no rows.
    pub fn skipped(&self) -> Vec<(Scheme, Metric, Mode)> {
        let mut out = Vec::new();
        for &s in &self.schemes {
            for &m in &self.metrics {
                for &mode in &self.modes {
                    if !Self::applicable(s, mode) {
                        out.push((s, m, mode));
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub snr_db: f64,
    pub scheme: Scheme,
    pub metric: Metric,
    pub mode: Mode,
    pub value: f64,
    /// Monte Carlo standard error; `None` for analytic rows.
    pub std_err: Option<f64>,
}

fn analytic_value(
    metric: Metric,
    mode: EvalMode,
    p: &SystemParams,
    q: &QuadratureSpec,
) -> Result<f64> {
    match metric {
        Metric::Outage => Ok(outage_probability(p, mode, q)?.total),
        Metric::Capacity => ergodic_capacity_with(p, mode, q),
    }
}

/// Evaluates every applicable `(point, scheme, metric, mode)` combination.
///
/// Rows come out ordered by grid point, then scheme, metric and mode in the
/// order given in `spec`. Monte Carlo uses the same seed at every point, so
/// all schemes and all points share common random numbers.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let points = spec.grid.points();
    for (s, m, mode) in spec.skipped() {
        log::warn!(
            "skipping {s} {m} {mode}: no analytic evaluator for this scheme ({} points)",
            points.len()
        );
    }

    let mc_schemes: Vec<Scheme> = spec
        .schemes
        .iter()
        .copied()
        .filter(|&s| spec.modes.contains(&Mode::Mc) && SweepSpec::applicable(s, Mode::Mc))
        .collect();
    let analytic_wanted = spec.schemes.contains(&Scheme::ProposedDpss)
        && spec.modes.iter().any(|m| m.analytic().is_some());

    // Analytic values per point, evaluated in parallel; keyed by (metric, mode).
    let analytic = |db: f64| -> Result<Vec<(Metric, Mode, f64)>> {
        let p = spec.params.with_snr_db(db);
        let mut out = Vec::new();
        if !analytic_wanted {
            return Ok(out);
        }
        for &metric in &spec.metrics {
            for &mode in &spec.modes {
                if let Some(eval) = mode.analytic() {
                    out.push((
                        metric,
                        mode,
                        analytic_value(metric, eval, &p, &spec.quadrature)?,
                    ));
                }
            }
        }
        Ok(out)
    };
    let analytic_rows: Vec<Vec<(Metric, Mode, f64)>> = if spec.mc.workers == 1 {
        points
            .iter()
            .map(|&db| analytic(db))
            .collect::<Result<_>>()?
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(spec.mc.workers)
            .build()
            .map_err(|e| Error::invalid("workers", e.to_string()))?
            .install(|| {
                points
                    .par_iter()
                    .map(|&db| analytic(db))
                    .collect::<Result<_>>()
            })?
    };

    let mut rows = Vec::new();
    for (&db, analytic_at) in points.iter().zip(&analytic_rows) {
        let p = spec.params.with_snr_db(db);
        let mut mc_at = Vec::new();
        if !mc_schemes.is_empty() {
            for &metric in &spec.metrics {
                mc_at.push((metric, estimate_many(&mc_schemes, metric, &p, &spec.mc)?));
            }
        }
        for &scheme in &spec.schemes {
            for &metric in &spec.metrics {
                for &mode in &spec.modes {
                    if !SweepSpec::applicable(scheme, mode) {
                        continue;
                    }
                    let (value, std_err) = if mode == Mode::Mc {
                        let k = mc_schemes
                            .iter()
                            .position(|&s| s == scheme)
                            .expect("mc scheme");
                        let (_, ests) =
                            mc_at.iter().find(|(m, _)| *m == metric).expect("mc metric");
                        (ests[k].mean, Some(ests[k].std_err))
                    } else {
                        let &(_, _, v) = analytic_at
                            .iter()
                            .find(|(m, md, _)| *m == metric && *md == mode)
                            .expect("analytic value");
                        (v, None)
                    };
                    rows.push(SweepRow {
                        snr_db: db,
                        scheme,
                        metric,
                        mode,
                        value,
                        std_err,
                    });
                }
            }
        }
    }
    Ok(rows)
}
