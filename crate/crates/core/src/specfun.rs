//! Special functions and quadrature rules used by the analytic evaluators.
//!
//! - [`bessel_k1`]: modified Bessel function of the second kind, order one.
//! - [`exp_integral_ei`] / [`exp_integral_e1`]: exponential integrals on the
//!   negative (resp. positive) half-line.
//! - [`ChebyshevRule`]: Gauss-Chebyshev nodes in the form used by the closed-form
//!   outage and capacity expressions.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use crate::error::{Error, Result};

/// Euler-Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const MAX_ITER: usize = 500;

/// Largest value of `tan(theta)` used when mapping `[0, inf)` onto `[0, pi/2)`.
pub const TAN_CAP: f64 = 1e15;

/// `K1(x)` for `x > 0`.
///
/// Power series below `x = 2`, Steed's continued fraction (Temme's form) above.
/// Relative error is near machine precision over `[1e-300, 700]`; the result
/// underflows to zero beyond roughly `x = 745`.
pub fn bessel_k1(x: f64) -> Result<f64> {
    if !(x > 0.0) || x.is_nan() {
        return Err(Error::Domain {
            function: "bessel_k1",
            arg: x,
        });
    }
    if x.is_infinite() {
        return Ok(0.0);
    }
    Ok(if x <= 2.0 {
        k1_series(x).0
    } else {
        k1_continued_fraction(x)
    })
}

/// `x K1(x)`, extended continuously by its limit 1 at `x = 0`.
pub fn x_k1(x: f64) -> f64 {
    debug_assert!(x >= 0.0);
    if x == 0.0 {
        1.0
    } else if x <= 2.0 {
        1.0 - k1_series(x).1
    } else {
        x * k1_continued_fraction(x)
    }
}

/// `1 - x K1(x)` without the cancellation of the leading 1 for small `x`.
/// Behaves like `-(x^2/2) ln(x/2)` as `x -> 0`.
pub fn one_minus_x_k1(x: f64) -> f64 {
    debug_assert!(x >= 0.0);
    if x == 0.0 {
        0.0
    } else if x <= 2.0 {
        k1_series(x).1
    } else {
        1.0 - x * k1_continued_fraction(x)
    }
}

/// Returns `(K1(x), 1 - x K1(x))` from
///
/// ```text
/// K1(x) = 1/x + ln(x/2) I1(x) - (x/4) sum_k [psi(k+1) + psi(k+2)] (x^2/4)^k / (k! (k+1)!)
/// ```
fn k1_series(x: f64) -> (f64, f64) {
    let t = 0.25 * x * x;
    let mut term = 1.0;
    let mut psi_a = -EULER_GAMMA;
    let mut psi_b = 1.0 - EULER_GAMMA;
    let mut i_sum = 0.0;
    let mut psi_sum = 0.0;
    for k in 0..MAX_ITER {
        i_sum += term;
        psi_sum += (psi_a + psi_b) * term;
        if term < 1e-18 * i_sum {
            break;
        }
        let k1 = (k + 1) as f64;
        term *= t / (k1 * (k1 + 1.0));
        psi_a += 1.0 / k1;
        psi_b += 1.0 / (k1 + 1.0);
    }
    let half = 0.5 * x;
    let i1 = half * i_sum;
    // x K1(x) = 1 + x ln(x/2) I1(x) - (x^2/4) S
    let defect = -x * half.ln() * i1 + t * psi_sum;
    ((1.0 - defect) / x, defect)
}

fn k1_continued_fraction(x: f64) -> f64 {
    let a1 = 0.25;
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut delh = d;
    let mut h = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 1..MAX_ITER {
        let fi = i as f64;
        a -= 2.0 * fi;
        c = -a * c / (fi + 1.0);
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < 1e-16 {
            break;
        }
    }
    h *= a1;
    let k0 = (FRAC_PI_2 / x).sqrt() * (-x).exp() / s;
    k0 * (x + 0.5 - h) / x
}

/// `E1(x) = int_x^inf e^-t / t dt` for `x > 0`.
pub fn exp_integral_e1(x: f64) -> Result<f64> {
    if !(x > 0.0) || x.is_nan() {
        return Err(Error::Domain {
            function: "exp_integral_e1",
            arg: x,
        });
    }
    if x.is_infinite() {
        return Ok(0.0);
    }
    Ok(if x <= 1.0 {
        e1_series(x)
    } else {
        e1_continued_fraction(x)
    })
}

/// `Ei(x)` for `x < 0`, i.e. `-E1(-x)`.
pub fn exp_integral_ei(x: f64) -> Result<f64> {
    if !(x < 0.0) {
        return Err(Error::Domain {
            function: "exp_integral_ei",
            arg: x,
        });
    }
    Ok(-exp_integral_e1(-x)?)
}

/// `e^x E1(x)` for `x > 0`, finite where `e^x` alone would overflow.
pub fn exp_scaled_e1(x: f64) -> Result<f64> {
    if !(x > 0.0) || x.is_nan() {
        return Err(Error::Domain {
            function: "exp_scaled_e1",
            arg: x,
        });
    }
    Ok(if x <= 1.0 {
        x.exp() * e1_series(x)
    } else {
        e1_cf_scaled(x)
    })
}

fn e1_series(x: f64) -> f64 {
    // E1(x) = -gamma - ln x - sum_{k>=1} (-x)^k / (k k!)
    let mut sum = 0.0;
    let mut fact = 1.0;
    for k in 1..MAX_ITER {
        let kf = k as f64;
        fact *= -x / kf;
        let del = fact / kf;
        sum += del;
        if del.abs() < sum.abs() * 1e-17 {
            break;
        }
    }
    -EULER_GAMMA - x.ln() - sum
}

fn e1_continued_fraction(x: f64) -> f64 {
    e1_cf_scaled(x) * (-x).exp()
}

fn e1_cf_scaled(x: f64) -> f64 {
    if x.is_infinite() {
        return 0.0;
    }
    // Modified Lentz evaluation of e^x E1(x) = 1/(x+1-) 1/(x+3-) 4/(x+5-) ...
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..MAX_ITER {
        let an = -((i * i) as f64);
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).abs() < 1e-16 {
            break;
        }
    }
    h
}

/// Gauss-Chebyshev rule with nodes `f_i = cos((2i - 1) pi / (2n))` and weight
/// `omega = pi / n`.
///
/// The integration helpers apply the rule to plain integrals through the factor
/// `sqrt(1 - f_i^2)`:
///
/// ```text
/// int_{-1}^{1} g(t) dt  ~  omega * sum_i sqrt(1 - f_i^2) g(f_i)
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct ChebyshevRule {
    n: usize,
    nodes: Vec<f64>,
    root_weights: Vec<f64>,
    weight: f64,
}

impl ChebyshevRule {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid(
                "n",
                "Chebyshev rule needs at least one node",
            ));
        }
        let mut nodes = vec![0.0; n];
        let mut root_weights = vec![0.0; n];
        // Fill the first half and mirror so that f_i = -f_{n+1-i} holds exactly.
        for i in 0..n.div_ceil(2) {
            let angle = (2 * i + 1) as f64 * PI / (2 * n) as f64;
            let j = n - 1 - i;
            let (node, root) = if i == j {
                (0.0, 1.0)
            } else {
                (angle.cos(), angle.sin())
            };
            nodes[j] = -node;
            nodes[i] = node;
            root_weights[i] = root;
            root_weights[j] = root;
        }
        Ok(ChebyshevRule {
            n,
            nodes,
            root_weights,
            weight: PI / n as f64,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `f_1 > f_2 > ... > f_n`.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// `sqrt(1 - f_i^2)`, evaluated as `sin((2i - 1) pi / (2n))`.
    pub fn root_weights(&self) -> &[f64] {
        &self.root_weights
    }

    /// `omega = pi / n`.
    pub fn weight(&self) -> f64 {
        self.weight
    }

    /// Approximates `int_{-1}^{1} g(t) dt`.
    pub fn integrate_unit(&self, mut g: impl FnMut(f64) -> f64) -> f64 {
        self.weight
            * self
                .nodes
                .iter()
                .zip(&self.root_weights)
                .map(|(&f, &r)| r * g(f))
                .sum::<f64>()
    }

    /// Approximates `int_a^b g(x) dx` with nodes `a + (b - a) c_i / 2`, `c_i = f_i + 1`.
    pub fn integrate(&self, a: f64, b: f64, mut g: impl FnMut(f64) -> f64) -> f64 {
        let half = 0.5 * (b - a);
        half * self.integrate_unit(|f| g(a + half * (f + 1.0)))
    }

    /// Approximates `int_0^inf g(y) dy` through `y = tan(theta)`,
    /// `theta_i = pi/4 (f_i + 1)`.
    pub fn integrate_half_line(&self, mut g: impl FnMut(f64) -> f64) -> f64 {
        FRAC_PI_4
            * self.integrate_unit(|f| {
                let (y, sec2) = tan_node(f);
                g(y) * sec2
            })
    }
}

/// `(tan(theta), sec^2(theta))` at `theta = pi/4 (f + 1)`, with `tan` capped at
/// [`TAN_CAP`].
pub fn tan_node(f: f64) -> (f64, f64) {
    let theta = FRAC_PI_4 * (f + 1.0);
    let t = theta.tan().min(TAN_CAP);
    (t, 1.0 + t * t)
}
