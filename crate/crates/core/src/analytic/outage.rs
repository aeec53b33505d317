use crate::error::{Error, Result};
use crate::model::SystemParams;
use crate::quad::{self, Tolerance};
use crate::specfun::{one_minus_x_k1, x_k1, ChebyshevRule};

use super::{EvalMode, QuadratureSpec};

/// `e^-t` underflows beyond this `t`; integrands carrying `e^(-lambda0 x)` are
/// truncated there.
const EXP_UNDERFLOW: f64 = 745.0;

/// Assembled outage probability together with its partial terms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutageTerms {
    /// `gamma_th / gamma_in`.
    pub a: f64,
    /// Direct-link branch, `P(x < a, y < x)`.
    pub p1: f64,
    /// `P(0 < x < y < a)`.
    pub p21: f64,
    /// `P(x < a) P(y > a)`.
    pub p221: f64,
    /// The Bessel-kernel double integral subtracted from `p221`.
    pub p222: f64,
    /// `p221 - lambda0 lambda1 p222`.
    pub p22: f64,
    /// Constant multiplying the `ln(lambda1 lambda2 / eta)` term of the expansion.
    pub phi_out: f64,
    /// Constant multiplying the logarithmic term of the expansion.
    pub lambda_cap: f64,
    /// `p1 + p21 + p22` before clamping.
    pub total_raw: f64,
    /// `total_raw` clamped to `[0, 1]`.
    pub total: f64,
}

/// `P1 = lambda1/(lambda0+lambda1) (1 - e^{-(lambda0+lambda1) a}) - e^{-lambda0 a} (1 - e^{-lambda1 a})`.
pub fn outage_p1(p: &SystemParams) -> f64 {
    let a = p.threshold_ratio();
    let sum = p.lambda0 + p.lambda1;
    let v =
        -p.lambda1 / sum * (-sum * a).exp_m1() + (-p.lambda0 * a).exp() * (-p.lambda1 * a).exp_m1();
    v.clamp(0.0, 1.0)
}

/// `P21 = lambda0/(lambda0+lambda1) + lambda1/(lambda0+lambda1) e^{-(lambda0+lambda1) a} - e^{-lambda1 a}`.
pub fn outage_p21(p: &SystemParams) -> f64 {
    let a = p.threshold_ratio();
    let sum = p.lambda0 + p.lambda1;
    let v = -(-p.lambda1 * a).exp_m1() + p.lambda1 / sum * (-sum * a).exp_m1();
    v.clamp(0.0, 1.0)
}

/// `P221 = (1 - e^{-lambda0 a}) e^{-lambda1 a}`.
pub fn outage_p221(p: &SystemParams) -> f64 {
    let a = p.threshold_ratio();
    -(-p.lambda0 * a).exp_m1() * (-p.lambda1 * a).exp()
}

/// `theta(x) = sqrt(4 (a - x) lambda1 lambda2 / eta)`.
fn bessel_argument(p: &SystemParams, a: f64, x: f64) -> f64 {
    (4.0 * (a - x).max(0.0) * p.lambda1 * p.lambda2 / p.eta).sqrt()
}

/// The double integral
///
/// ```text
/// P222 = int_a^inf int_0^a exp(-lambda2 (a - x) / (eta (y - a))) e^{-lambda0 x} e^{-lambda1 y} dx dy
/// ```
///
/// `Exact` reduces the inner `y` integral to `K1` and integrates
/// `(e^{-lambda1 a} / lambda1) int_0^a e^{-lambda0 x} theta K1(theta) dx` adaptively.
/// `Approx` replaces `theta K1(theta)` by `1 + (theta^2/2) ln(theta/2)` and
/// integrates in closed form, leaving `int_0^a e^{lambda0 x} ln x dx` to an
/// `n_outage`-node Gauss-Chebyshev rule.
pub fn outage_p222(p: &SystemParams, mode: EvalMode, q: &QuadratureSpec) -> Result<f64> {
    let a = p.threshold_ratio();
    match mode {
        EvalMode::Exact => Ok(p222_exact(p, a)),
        EvalMode::Approx => {
            q.validate()?;
            let rule = ChebyshevRule::new(q.n_outage)?;
            Ok(p222_approx(p, a, &rule))
        }
    }
}

fn p222_exact(p: &SystemParams, a: f64) -> f64 {
    let upper = a.min(EXP_UNDERFLOW / p.lambda0);
    let inner = quad::integrate(
        |x| (-p.lambda0 * x).exp() * x_k1(bessel_argument(p, a, x)),
        0.0,
        upper,
        Tolerance::absolute(1e-12),
    );
    (-p.lambda1 * a).exp() / p.lambda1 * inner.value
}

/// `P22 = lambda0 e^{-lambda1 a} int_0^a e^{-lambda0 x} (1 - theta K1(theta)) dx`,
/// identical to `P221 - lambda0 lambda1 P222` without cancelling two `O(a)` terms.
fn p22_exact(p: &SystemParams, a: f64) -> f64 {
    let upper = a.min(EXP_UNDERFLOW / p.lambda0);
    let inner = quad::integrate(
        |x| (-p.lambda0 * x).exp() * one_minus_x_k1(bessel_argument(p, a, x)),
        0.0,
        upper,
        Tolerance {
            abs: 1e-300,
            rel: 1e-12,
            max_intervals: 4000,
        },
    );
    p.lambda0 * (-p.lambda1 * a).exp() * inner.value
}

/// Gauss-Chebyshev approximation of `int_0^a e^{lambda0 x} ln x dx`:
///
/// ```text
/// (a/2) omega sum_i sqrt(1 - f_i^2) e^{lambda0 a c_i / 2} ln(a c_i / 2),   c_i = f_i + 1
/// ```
pub fn exp_log_integral(lambda0: f64, a: f64, rule: &ChebyshevRule) -> f64 {
    rule.integrate(0.0, a, |x| (lambda0 * x).exp() * x.ln())
}

/// `e^{-lambda0 a}` times [`exp_log_integral`], evaluated without overflow for large `a`.
fn damped_exp_log_integral(lambda0: f64, a: f64, rule: &ChebyshevRule) -> f64 {
    rule.integrate(0.0, a, |x| (lambda0 * (x - a)).exp() * x.ln())
}

/// `(phi_out, lambda_cap)` of the closed-form expansion.
fn expansion_constants(p: &SystemParams, a: f64) -> (f64, f64) {
    let damp = (-(p.lambda0 + p.lambda1) * a).exp();
    let lambda_cap = p.lambda2 * damp / (p.eta * p.lambda0);
    let phi_out = lambda_cap * (p.lambda1 * p.lambda2 / p.eta).ln();
    (phi_out, lambda_cap)
}

fn p222_approx(p: &SystemParams, a: f64, rule: &ChebyshevRule) -> f64 {
    let l0 = p.lambda0;
    let e1a = (-p.lambda1 * a).exp();
    let em1 = (-l0 * a).exp_m1();
    // Phi and Lambda carry e^{-(l0+l1) a}; fold e^{-l0 a} into the bracketed
    // terms, which grow like e^{l0 a}.
    let phi_base = p.lambda2 * (p.lambda1 * p.lambda2 / p.eta).ln() / (p.eta * l0);
    let lambda_base = p.lambda2 / (p.eta * l0);
    let head = -e1a * em1 / (l0 * p.lambda1);
    let phi_term = phi_base * e1a * (a + em1 / l0);
    let lambda_term =
        lambda_base * e1a * (a * a.ln() + em1 / l0 - damped_exp_log_integral(l0, a, rule));
    head + phi_term + lambda_term
}

/// Outage probability of the proposed scheme, `P(gamma_op < gamma_th)`.
pub fn outage_probability(
    p: &SystemParams,
    mode: EvalMode,
    q: &QuadratureSpec,
) -> Result<OutageTerms> {
    p.validate()?;
    let a = p.threshold_ratio();
    let p1 = outage_p1(p);
    let p21 = outage_p21(p);
    let p221 = outage_p221(p);
    let p222 = outage_p222(p, mode, q)?;
    let p22 = match mode {
        EvalMode::Exact => p22_exact(p, a),
        EvalMode::Approx => p221 - p.lambda0 * p.lambda1 * p222,
    };
    let (phi_out, lambda_cap) = expansion_constants(p, a);
    let total_raw = p1 + p21 + p22;
    Ok(OutageTerms {
        a,
        p1,
        p21,
        p221,
        p222,
        p22,
        phi_out,
        lambda_cap,
        total_raw,
        total: total_raw.clamp(0.0, 1.0),
    })
}

/// Outage of direct transmission alone, `P(gamma_in x < gamma_th) = 1 - e^{-lambda0 a}`.
pub fn outage_noncooperative(p: &SystemParams) -> f64 {
    -(-p.lambda0 * p.threshold_ratio()).exp_m1()
}

fn slope(
    p: &SystemParams,
    snr_lo_db: f64,
    snr_hi_db: f64,
    outage: impl Fn(&SystemParams) -> Result<f64>,
) -> Result<f64> {
    if !(snr_lo_db >= 20.0 && snr_hi_db > snr_lo_db) {
        return Err(Error::invalid(
            "snr window",
            format!(
                "need 20 dB <= low < high for the asymptotic slope, got [{snr_lo_db}, {snr_hi_db}]"
            ),
        ));
    }
    let lo = outage(&p.with_snr_db(snr_lo_db))?;
    let hi = outage(&p.with_snr_db(snr_hi_db))?;
    for (db, v) in [(snr_lo_db, lo), (snr_hi_db, hi)] {
        if !(v >= 1e-300) {
            return Err(Error::Range(format!(
                "outage {v:e} at {db} dB is below 1e-300; use a lower SNR window"
            )));
        }
    }
    Ok(-(hi.log10() - lo.log10()) / ((snr_hi_db - snr_lo_db) / 10.0))
}

/// High-SNR log-log slope of the exact outage between two SNRs (dB, both >= 20).
pub fn diversity_order(p: &SystemParams, snr_lo_db: f64, snr_hi_db: f64) -> Result<f64> {
    let q = QuadratureSpec::default();
    slope(p, snr_lo_db, snr_hi_db, |p| {
        Ok(outage_probability(p, EvalMode::Exact, &q)?.total_raw)
    })
}

/// Slope of [`outage_noncooperative`], the single-branch control.
pub fn noncooperative_diversity_order(
    p: &SystemParams,
    snr_lo_db: f64,
    snr_hi_db: f64,
) -> Result<f64> {
    slope(p, snr_lo_db, snr_hi_db, |p| Ok(outage_noncooperative(p)))
}
