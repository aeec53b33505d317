use std::f64::consts::{LN_2, PI};

use crate::error::Result;
use crate::model::SystemParams;
use crate::quad::{self, Tolerance};
use crate::specfun::{exp_scaled_e1, tan_node, ChebyshevRule};

use super::{EvalMode, QuadratureSpec};

/// Capacity of the direct-link branch (`y < x`, `rho = 0`):
///
/// ```text
/// C1 = -lambda1 / (2 (lambda0+lambda1) ln2) e^{mu} Ei(-mu)
///      - (pi lambda1 e^{lambda0/g} / (8 ln2)) zeta sum_j sqrt(1-f_j^2) e^{-lambda1 tan t_j}
///        Ei(-lambda0 tan t_j - lambda0/g) sec^2 t_j
/// ```
///
/// with `mu = (lambda0 + lambda1) / gamma_in`, `zeta = pi / M` and
/// `t_j = pi/4 (f_j + 1)`. Each `e^{u} Ei(-u)` pair is evaluated as
/// `-e^u E1(u)` so that neither factor overflows at low SNR.
pub fn capacity_c1(p: &SystemParams, q: &QuadratureSpec) -> Result<f64> {
    p.validate()?;
    q.validate()?;
    let rule = ChebyshevRule::new(q.m_cap)?;
    let (l0, l1, g) = (p.lambda0, p.lambda1, p.gamma_in);
    let mu = (l0 + l1) / g;
    let head = l1 / (2.0 * (l0 + l1) * LN_2) * exp_scaled_e1(mu)?;

    let offset = l0 / g;
    let mut sum = 0.0;
    for (&f, &root) in rule.nodes().iter().zip(rule.root_weights()) {
        let (t, sec2) = tan_node(f);
        // e^{lambda0/g} e^{-lambda1 t} E1(lambda0 t + lambda0/g)
        //   = e^{-(lambda0+lambda1) t} [e^u E1(u)],  u = lambda0 t + lambda0/g
        let decay = (-(l0 + l1) * t).exp();
        if decay == 0.0 {
            continue;
        }
        sum += root * decay * exp_scaled_e1(l0 * t + offset)? * sec2;
    }
    let tail = PI * l1 / (8.0 * LN_2) * rule.weight() * sum;
    Ok(head + tail)
}

/// `C1` by adaptive integration of
/// `(1/2) int_0^inf int_y^inf lambda0 e^{-lambda0 x} lambda1 e^{-lambda1 y} log2(1 + g x) dx dy`.
pub fn capacity_c1_exact(p: &SystemParams) -> f64 {
    let (l0, l1, g) = (p.lambda0, p.lambda1, p.gamma_in);
    let inner_tol = Tolerance::relative(1e-12);
    let outer = quad::integrate_to_infinity(
        |y| {
            let inner = quad::integrate_to_infinity(
                |x| l0 * (-l0 * x).exp() * (g * x).ln_1p(),
                y,
                1.0 / l0,
                inner_tol,
            );
            l1 * (-l1 * y).exp() * inner.value
        },
        0.0,
        1.0 / (l0 + l1),
        Tolerance::absolute(1e-12),
    );
    0.5 * outer.value / LN_2
}

/// Capacity of the relay branch (`x <= y`), a triple Gauss-Chebyshev sum:
/// `n1` nodes over `x` in `[0, y]`, then `n2` and `n3` nodes over `y` and `z`
/// after the substitution `y, z = tan(theta)`.
pub fn capacity_c2(p: &SystemParams, q: &QuadratureSpec) -> Result<f64> {
    p.validate()?;
    q.validate()?;
    let rule_x = ChebyshevRule::new(q.n1)?;
    let rule_y = ChebyshevRule::new(q.n2)?;
    let rule_z = ChebyshevRule::new(q.n3)?;
    let (l0, l1, l2, eta, g) = (p.lambda0, p.lambda1, p.lambda2, p.eta, p.gamma_in);

    // z nodes: weight * e^{-l2 t3} sec^2 t3, plus the pieces of the SNR ratio.
    let z_nodes: Vec<(f64, f64)> = rule_z
        .nodes()
        .iter()
        .zip(rule_z.root_weights())
        .filter_map(|(&f, &root)| {
            let (t, sec2) = tan_node(f);
            let w = root * (-l2 * t).exp() * sec2;
            (w > 0.0).then_some((w, t))
        })
        .collect();
    let y_nodes: Vec<(f64, f64, f64)> = rule_y
        .nodes()
        .iter()
        .zip(rule_y.root_weights())
        .map(|(&f, &root)| {
            let (t, sec2) = tan_node(f);
            (root, t, sec2)
        })
        .collect();

    let mut total = 0.0;
    for (&f1, &root1) in rule_x.nodes().iter().zip(rule_x.root_weights()) {
        let c = f1 + 1.0;
        let mut sum_y = 0.0;
        for &(root2, t2, sec2) in &y_nodes {
            let decay = (-(0.5 * l0 * c + l1) * t2).exp();
            if decay == 0.0 {
                continue;
            }
            let wy = root2 * decay * t2 * sec2;
            let mut sum_z = 0.0;
            for &(wz, t3) in &z_nodes {
                let snr = g * (0.5 * c * t2 + eta * t2 * t3) / (1.0 + eta * t3);
                sum_z += wz * snr.ln_1p();
            }
            sum_y += wy * sum_z;
        }
        total += root1 * sum_y;
    }
    let scale =
        l0 * l1 * l2 * PI * PI / 64.0 * rule_x.weight() * rule_y.weight() * rule_z.weight() / LN_2;
    Ok(scale * total)
}

/// `C2` by nested adaptive integration of
/// `(1/2) E[log2(1 + g (x + eta y z) / (1 + eta z)) 1{x <= y}]`.
pub fn capacity_c2_exact(p: &SystemParams) -> f64 {
    let (l0, l1, l2, eta, g) = (p.lambda0, p.lambda1, p.lambda2, p.eta, p.gamma_in);
    let tol = Tolerance::relative(1e-10);
    let outer = quad::integrate_to_infinity(
        |z| {
            let middle = quad::integrate_to_infinity(
                |y| {
                    let inner = quad::integrate(
                        |x| {
                            l0 * (-l0 * x).exp() * (g * (x + eta * y * z) / (1.0 + eta * z)).ln_1p()
                        },
                        0.0,
                        y,
                        tol,
                    );
                    l1 * (-l1 * y).exp() * inner.value
                },
                0.0,
                1.0 / l1,
                tol,
            );
            l2 * (-l2 * z).exp() * middle.value
        },
        0.0,
        1.0 / l2,
        tol,
    );
    0.5 * outer.value / LN_2
}

/// Ergodic capacity of the proposed scheme, `C1 + C2`, from the Gauss-Chebyshev forms.
pub fn ergodic_capacity(p: &SystemParams, q: &QuadratureSpec) -> Result<f64> {
    Ok(capacity_c1(p, q)? + capacity_c2(p, q)?)
}

/// Ergodic capacity by adaptive integration of both branches.
pub fn ergodic_capacity_exact(p: &SystemParams) -> Result<f64> {
    p.validate()?;
    Ok(capacity_c1_exact(p) + capacity_c2_exact(p))
}

pub fn ergodic_capacity_with(p: &SystemParams, mode: EvalMode, q: &QuadratureSpec) -> Result<f64> {
    match mode {
        EvalMode::Exact => ergodic_capacity_exact(p),
        EvalMode::Approx => ergodic_capacity(p, q),
    }
}

/// Direct transmission only:
/// `E[log2(1 + g x) / 2] = e^{lambda0/g} E1(lambda0/g) / (2 ln 2)`.
pub fn capacity_noncooperative(p: &SystemParams) -> Result<f64> {
    Ok(exp_scaled_e1(p.lambda0 / p.gamma_in)? / (2.0 * LN_2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn reference_db(db: f64) -> SystemParams {
        SystemParams::reference(1.0).with_snr_db(db)
    }

    #[test]
    fn capacities_vanish_at_low_snr() {
        let q = QuadratureSpec::default();
        let p = SystemParams::reference(1e-9);
        assert!(capacity_c1(&p, &q).unwrap() < 1e-8);
        assert!(capacity_c2(&p, &q).unwrap() < 1e-7);
        assert!(ergodic_capacity(&p, &q).unwrap() < 1e-7);
    }

    #[test]
    fn c1_with_dominant_direct_link() {
        // lambda1 huge: y < x almost surely, C1 -> full direct-link capacity.
        let p = SystemParams {
            lambda1: 1e4,
            ..reference_db(10.0)
        };
        let direct = capacity_noncooperative(&p).unwrap();
        assert_relative_eq!(capacity_c1_exact(&p), direct, max_relative = 1e-3);
    }

    #[test]
    fn c1_chebyshev_tracks_exact_over_lambda1() {
        let q = QuadratureSpec::default();
        for lambda1 in [0.05, 0.2, 1.0, 3.0] {
            let p = SystemParams {
                lambda1,
                ..reference_db(10.0)
            };
            let approx = capacity_c1(&p, &q).unwrap();
            let exact = capacity_c1_exact(&p);
            assert!(
                (approx / exact - 1.0).abs() < 0.02,
                "{lambda1}: {approx} vs {exact}"
            );
        }
    }

    #[test]
    fn c1_matches_exact_integration() {
        let q = QuadratureSpec::default();
        let p = reference_db(15.0);
        let approx = capacity_c1(&p, &q).unwrap();
        let exact = capacity_c1_exact(&p);
        assert!((approx / exact - 1.0).abs() < 0.01, "{approx} vs {exact}");
    }

    #[test]
    fn c2_converges_with_nodes() {
        let p = reference_db(15.0);
        let c20 = capacity_c2(&p, &QuadratureSpec::default()).unwrap();
        let c40 = capacity_c2(&p, &QuadratureSpec::default().with_capacity_nodes(40)).unwrap();
        assert!((c20 / c40 - 1.0).abs() < 5e-3, "{c20} vs {c40}");
    }

    #[test]
    fn capacity_monotone_in_snr() {
        let q = QuadratureSpec::default();
        let mut last = 0.0;
        for db in (0..=30).step_by(3) {
            let c = ergodic_capacity(&reference_db(db as f64), &q).unwrap();
            assert!(c >= last);
            last = c;
        }
    }
}
