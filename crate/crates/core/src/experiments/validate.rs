//! Self-consistency report: analytic evaluators against Monte Carlo and against
//! independent numerical references.
//!
//! Monte Carlo checks are gated on resolution. A point whose expected event
//! count (or capacity noise) cannot resolve the tolerance is reported as
//! inconclusive rather than failed.

use std::fmt;

use serde::Serialize;

use crate::analytic::{
    diversity_order, ergodic_capacity, noncooperative_diversity_order, outage_probability,
    EvalMode, QuadratureSpec,
};
use crate::error::Result;
use crate::model::{optimal_rho, snr_components, Scheme, SystemParams};
use crate::montecarlo::{
    estimate_many, estimate_outage, outage_event_mismatches, sample_gains, trial_stream, McConfig,
    McEstimate, Metric,
};
use crate::quad::{self, Tolerance};
use crate::specfun::{bessel_k1, exp_integral_ei, ChebyshevRule};

use super::csv::render_csv;
use super::sweep::{run_sweep, SweepSpec};

/// Expected events below which an outage estimate is too coarse to test.
const MIN_EVENTS: f64 = 25.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl Status {
    fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    /// Fail dominates, then inconclusive.
    fn combine(items: impl IntoIterator<Item = Status>) -> Status {
        items
            .into_iter()
            .fold(Status::Pass, |acc, s| match (acc, s) {
                (Status::Fail, _) | (_, Status::Fail) => Status::Fail,
                (Status::Inconclusive, _) | (_, Status::Inconclusive) => Status::Inconclusive,
                _ => Status::Pass,
            })
    }

    pub fn label(&self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Inconclusive => "INCONCLUSIVE",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub id: u32,
    pub name: String,
    pub status: Status,
    pub details: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    /// True when no check failed; inconclusive checks do not count as failures.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "[{}] {} {}", c.status, c.id, c.name)?;
            for d in &c.details {
                writeln!(f, "    {d}")?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidateOptions {
    /// Channel and rate parameters; `gamma_in` is set per check.
    pub params: SystemParams,
    pub quadrature: QuadratureSpec,
    pub mc: McConfig,
    /// Negative control: evaluate the analytic side with the threshold
    /// `2^(2 R_th - 1)` instead of `2^(2 R_th) - 1`. Monte Carlo is unchanged.
    pub corrupt_threshold: bool,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        ValidateOptions {
            params: SystemParams::reference(1.0),
            quadrature: QuadratureSpec::default(),
            mc: McConfig::default(),
            corrupt_threshold: false,
        }
    }
}

impl ValidateOptions {
    fn analytic_params(&self, db: f64) -> SystemParams {
        let p = self.params.with_snr_db(db);
        if self.corrupt_threshold {
            // r' with 2^(2 r') - 1 = 2^(2 R - 1)
            let literal = (2.0 * p.r_th - 1.0).exp2();
            SystemParams {
                r_th: 0.5 * literal.ln_1p() / std::f64::consts::LN_2,
                ..p
            }
        } else {
            p
        }
    }
}

fn resolvable(n: u64, p: f64) -> bool {
    let n = n as f64;
    n * p >= MIN_EVENTS && n * (1.0 - p) >= MIN_EVENTS
}

fn joint_se(a: &McEstimate, b: &McEstimate) -> f64 {
    a.std_err.hypot(b.std_err)
}

fn outage_vs_mc(opts: &ValidateOptions) -> Result<Check> {
    let mut statuses = Vec::new();
    let mut details = Vec::new();
    for db in [5.0, 10.0, 15.0, 20.0, 25.0] {
        let exact =
            outage_probability(&opts.analytic_params(db), EvalMode::Exact, &opts.quadrature)?.total;
        let mc = estimate_outage(Scheme::ProposedDpss, &opts.params.with_snr_db(db), &opts.mc)?;
        let status = if !resolvable(mc.trials, exact) {
            Status::Inconclusive
        } else {
            Status::from_bool((mc.mean - exact).abs() <= 3.0 * mc.std_err)
        };
        details.push(format!(
            "{db} dB: exact {exact:.6e}, mc {:.6e} +/- {:.2e}, z = {:.2} [{status}]",
            mc.mean,
            mc.std_err,
            mc.z_score(exact)
        ));
        statuses.push(status);
    }
    Ok(Check {
        id: 1,
        name: "analytic outage agrees with Monte Carlo within 3 standard errors".into(),
        status: Status::combine(statuses),
        details,
    })
}

fn approximation_regime(opts: &ValidateOptions) -> Result<Check> {
    let mut gaps = Vec::new();
    let mut details = Vec::new();
    for db in [10.0, 15.0, 20.0, 25.0, 30.0] {
        let p = opts.analytic_params(db);
        let exact = outage_probability(&p, EvalMode::Exact, &opts.quadrature)?.total;
        let approx = outage_probability(&p, EvalMode::Approx, &opts.quadrature)?.total;
        let gap = (approx - exact).abs() / exact;
        details.push(format!(
            "{db} dB: exact {exact:.6e}, approx {approx:.6e}, gap {:.4}%",
            100.0 * gap
        ));
        gaps.push(gap);
    }
    let at25 = gaps[3] < 0.05;
    let at30 = gaps[4] < 0.02;
    let shrinking = gaps.windows(2).all(|w| w[1] < w[0]);
    details.push(format!(
        "gap < 5% at 25 dB: {at25}; gap < 2% at 30 dB: {at30}; monotonically shrinking: {shrinking}"
    ));
    Ok(Check {
        id: 2,
        name: "high-SNR approximation converges to the exact outage".into(),
        status: Status::from_bool(at25 && at30 && shrinking),
        details,
    })
}

fn outage_equivalence(opts: &ValidateOptions) -> Result<Check> {
    let mut total = 0;
    let mut details = Vec::new();
    for db in [0.0, 10.0, 20.0, 30.0, 40.0] {
        let n = outage_event_mismatches(&opts.params.with_snr_db(db), &opts.mc)?;
        details.push(format!(
            "{db} dB: {n} mismatches in {} realizations",
            opts.mc.trials
        ));
        total += n;
    }
    Ok(Check {
        id: 3,
        name: "optimal and legacy-with-direct-link factors have identical outage events".into(),
        status: Status::from_bool(total == 0),
        details,
    })
}

fn outage_ordering(opts: &ValidateOptions) -> Result<Check> {
    let schemes = Scheme::comparison_set();
    let mut statuses = Vec::new();
    let mut details = Vec::new();
    for db in SweepSpec::fig1().grid.points() {
        let est = estimate_many(
            &schemes,
            Metric::Outage,
            &opts.params.with_snr_db(db),
            &opts.mc,
        )?;
        let proposed = est[0];
        for (s, b) in schemes.iter().zip(&est).skip(1) {
            if b.mean < 1e-5 {
                continue;
            }
            let margin = b.mean - proposed.mean;
            let se = joint_se(b, &proposed);
            let status = if !resolvable(b.trials, b.mean) {
                Status::Inconclusive
            } else {
                Status::from_bool(margin > 2.0 * se)
            };
            if status != Status::Pass {
                details.push(format!(
                    "{db} dB vs {s}: margin {margin:.3e}, joint se {se:.3e} [{status}]"
                ));
            }
            statuses.push(status);
        }
    }
    let status = Status::combine(statuses.iter().copied());
    if details.is_empty() {
        details.push(format!(
            "{} gated comparisons, all margins above 2 joint standard errors",
            statuses.len()
        ));
    }
    Ok(Check {
        id: 4,
        name: "proposed scheme has the lowest outage".into(),
        status,
        details,
    })
}

fn diversity(opts: &ValidateOptions) -> Result<Check> {
    let p = opts.analytic_params(0.0);
    let mid = diversity_order(&p, 30.0, 40.0)?;
    let high = diversity_order(&p, 40.0, 50.0)?;
    let control = noncooperative_diversity_order(&p, 30.0, 40.0)?;
    let ok =
        (1.6..=2.2).contains(&mid) && (1.8..=2.1).contains(&high) && (0.9..=1.1).contains(&control);
    Ok(Check {
        id: 5,
        name: "diversity order".into(),
        status: Status::from_bool(ok),
        details: vec![
            format!("slope over [30, 40] dB: {mid:.4} (want [1.6, 2.2])"),
            format!("slope over [40, 50] dB: {high:.4} (want [1.8, 2.1])"),
            format!("direct-link-only slope over [30, 40] dB: {control:.4} (want [0.9, 1.1])"),
        ],
    })
}

fn capacity_vs_mc(opts: &ValidateOptions) -> Result<Check> {
    let schemes = Scheme::comparison_set();
    let mut statuses = Vec::new();
    let mut details = Vec::new();
    for db in [10.0, 15.0, 20.0, 25.0, 30.0] {
        let analytic = ergodic_capacity(&opts.analytic_params(db), &opts.quadrature)?;
        let est = estimate_many(
            &schemes,
            Metric::Capacity,
            &opts.params.with_snr_db(db),
            &opts.mc,
        )?;
        let mc = est[0];
        let rel = (analytic - mc.mean).abs() / mc.mean;
        let agree = if 3.0 * mc.std_err > 0.005 * mc.mean {
            Status::Inconclusive
        } else {
            Status::from_bool(rel < 0.02)
        };
        let best = est[1..].iter().all(|b| mc.mean > b.mean);
        details.push(format!(
            "{db} dB: analytic {analytic:.6}, mc {:.6} +/- {:.1e}, rel {:.3}% [{agree}]; \
             proposed above every baseline: {best}",
            mc.mean,
            mc.std_err,
            100.0 * rel
        ));
        statuses.push(agree);
        statuses.push(Status::from_bool(best));
    }
    Ok(Check {
        id: 6,
        name: "ergodic capacity agrees with Monte Carlo within 2% and is highest".into(),
        status: Status::combine(statuses),
        details,
    })
}

/// `K1(x) = int_0^inf e^{-x cosh t} cosh t dt`.
fn k1_reference(x: f64) -> f64 {
    let scale = 1.0 + (1.0 + 1.0 / x).ln();
    quad::integrate_to_infinity(
        |t| (-x * t.cosh()).exp() * t.cosh(),
        0.0,
        scale,
        Tolerance::relative(1e-13),
    )
    .value
}

/// `Ei(-x) = -e^{-x} int_0^inf e^{-x s} / (1 + s) ds`.
fn ei_reference(x: f64) -> f64 {
    let tail = quad::integrate_to_infinity(
        |s| (-x * s).exp() / (1.0 + s),
        0.0,
        1.0 / x,
        Tolerance::relative(1e-13),
    );
    -(-x).exp() * tail.value
}

fn special_functions() -> Result<Check> {
    let grid: Vec<f64> = (0..100)
        .map(|k| 10f64.powf(-4.0 + k as f64 * (30f64.log10() + 4.0) / 99.0))
        .collect();
    let mut worst_k1: f64 = 0.0;
    let mut worst_ei: f64 = 0.0;
    for &x in &grid {
        worst_k1 = worst_k1.max((bessel_k1(x)? / k1_reference(x) - 1.0).abs());
        worst_ei = worst_ei.max((exp_integral_ei(-x)? / ei_reference(x) - 1.0).abs());
    }
    let mut bad_n = Vec::new();
    for n in 1..=64 {
        let area = ChebyshevRule::new(n)?.integrate_unit(|t| (1.0 - t * t).sqrt());
        if (area / std::f64::consts::FRAC_PI_2 - 1.0).abs() > 1e-13 {
            bad_n.push(format!("n={n}: {area}"));
        }
    }
    let ok = worst_k1 <= 1e-9 && worst_ei <= 1e-9 && bad_n.is_empty();
    let mut details = vec![
        format!("K1 worst relative error on [1e-4, 30]: {worst_k1:.2e}"),
        format!("Ei worst relative error on [-30, -1e-4]: {worst_ei:.2e}"),
    ];
    if bad_n.is_empty() {
        details.push("Chebyshev half-circle area is pi/2 for n = 1..=64".into());
    } else {
        details.push(format!(
            "Chebyshev half-circle area differs from pi/2 at {}",
            bad_n.join(", ")
        ));
    }
    Ok(Check {
        id: 7,
        name: "special functions match integral representations".into(),
        status: Status::from_bool(ok),
        details,
    })
}

fn optimality(opts: &ValidateOptions) -> Result<Check> {
    let mut worst = f64::NEG_INFINITY;
    let mut stream = trial_stream(opts.mc.seed, 0);
    for db in [0.0, 10.0, 20.0, 30.0] {
        let p = opts.params.with_snr_db(db);
        for _ in 0..2500 {
            let g = sample_gains(&p, &mut stream);
            let best = optimal_rho(&p, &g).gamma_end;
            for k in 0..=10_000 {
                let grid = snr_components(&p, &g, k as f64 * 1e-4)?.combined();
                worst = worst.max(grid / best - 1.0);
            }
        }
    }
    Ok(Check {
        id: 8,
        name: "optimal factor is not beaten by a 1e-4 grid search".into(),
        status: Status::from_bool(worst <= 1e-6),
        details: vec![format!(
            "largest relative excess of the grid optimum over 10^4 realizations: {worst:.3e}"
        )],
    })
}

fn determinism(opts: &ValidateOptions) -> Result<Check> {
    let spec = |workers: usize| SweepSpec {
        params: opts.params,
        quadrature: opts.quadrature,
        mc: McConfig { workers, ..opts.mc },
        ..SweepSpec::fig1()
    };
    let w = opts.mc.workers;
    let a = render_csv(&run_sweep(&spec(w))?);
    let b = render_csv(&run_sweep(&spec(w))?);
    let other = if w == 1 { 3 } else { 1 };
    let c = render_csv(&run_sweep(&spec(other))?);
    Ok(Check {
        id: 9,
        name: "outage sweep output is byte-identical across runs and worker counts".into(),
        status: Status::from_bool(a == b && a == c),
        details: vec![format!(
            "{} bytes; repeat identical: {}; {w} vs {other} workers identical: {}",
            a.len(),
            a == b,
            a == c
        )],
    })
}

/// Runs every check and collects the report.
pub fn validate(opts: &ValidateOptions) -> Result<Report> {
    opts.params.validate()?;
    opts.quadrature.validate()?;
    opts.mc.validate()?;
    let checks = vec![
        outage_vs_mc(opts)?,
        approximation_regime(opts)?,
        outage_equivalence(opts)?,
        outage_ordering(opts)?,
        diversity(opts)?,
        capacity_vs_mc(opts)?,
        special_functions()?,
        optimality(opts)?,
        determinism(opts)?,
    ];
    Ok(Report { checks })
}
