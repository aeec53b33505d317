//! Globally adaptive Gauss-Kronrod (7/15) integration.
//!
//! Used by the exact evaluation paths; the closed-form expressions use the
//! Gauss-Chebyshev rules in [`crate::specfun`] instead.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

// Kronrod abscissae (descending, last is the centre) and weights; every other
// abscissa is a 7-point Gauss node. Digits are kept as published.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Tolerances and subdivision budget.
#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_intervals: usize,
}

impl Tolerance {
    pub const fn absolute(abs: f64) -> Self {
        Tolerance {
            abs,
            rel: 0.0,
            max_intervals: 2000,
        }
    }

    pub const fn relative(rel: f64) -> Self {
        Tolerance {
            abs: 0.0,
            rel,
            max_intervals: 2000,
        }
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance::absolute(1e-12)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    /// False when the interval budget ran out before the tolerance was met.
    pub converged: bool,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Segment {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(centre);
    let mut gauss = fc * WG[3];
    let mut kron = fc * WGK[7];
    for (j, (&x, &w)) in XGK[..7].iter().zip(&WGK[..7]).enumerate() {
        let dx = half * x;
        let pair = f(centre - dx) + f(centre + dx);
        kron += w * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Segment {
        a,
        b,
        value: kron * half,
        error: ((kron - gauss) * half).abs(),
    }
}

/// Integrates `f` over the finite interval `[a, b]`.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: Tolerance) -> Estimate {
    if a == b {
        return Estimate {
            value: 0.0,
            error: 0.0,
            converged: true,
        };
    }
    let first = kronrod(&mut f, a, b);
    let mut value = first.value;
    let mut error = first.error;
    let mut heap = BinaryHeap::new();
    heap.push(first);
    let target = |value: f64| tol.abs.max(tol.rel * value.abs());
    while error > target(value) {
        if heap.len() >= tol.max_intervals {
            return Estimate {
                value,
                error,
                converged: false,
            };
        }
        let worst = heap.pop().expect("heap holds at least one segment");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Interval can no longer be split in floating point.
            heap.push(worst);
            return Estimate {
                value,
                error,
                converged: false,
            };
        }
        let left = kronrod(&mut f, worst.a, mid);
        let right = kronrod(&mut f, mid, worst.b);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    // Re-sum to shed the drift of the running updates.
    let value = heap.iter().map(|s| s.value).sum();
    let error = heap.iter().map(|s| s.error).sum();
    Estimate {
        value,
        error,
        converged: true,
    }
}

/// Integrates `f` over `[a, inf)` through `x = a + scale t / (1 - t)`, `t` in `[0, 1)`.
///
/// `scale` should be near the length over which `f` decays; a mapping far off
/// that scale can hide the mass inside one panel and converge to a wrong value.
pub fn integrate_to_infinity<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    scale: f64,
    tol: Tolerance,
) -> Estimate {
    integrate(
        |t| {
            if t >= 1.0 {
                return 0.0;
            }
            let s = 1.0 - t;
            let v = scale * f(a + scale * t / s) / (s * s);
            if v.is_finite() {
                v
            } else {
                0.0
            }
        },
        0.0,
        1.0,
        tol,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn kronrod_exact_for_degree_22() {
        for k in 0..=22 {
            let s = kronrod(&mut |x: f64| x.powi(k), 0.0, 1.0);
            assert_relative_eq!(s.value, 1.0 / (k as f64 + 1.0), max_relative = 1e-14);
        }
    }

    #[test]
    fn gauss_part_exact_for_degree_13() {
        for k in 0..=13 {
            let s = kronrod(&mut |x: f64| x.powi(k), 0.0, 1.0);
            assert!(s.error < 1e-14, "k={k} err={}", s.error);
        }
        let s = kronrod(&mut |x: f64| x.powi(14), 0.0, 1.0);
        assert!(s.error > 1e-10);
    }

    #[test]
    fn adaptive_handles_endpoint_singularity() {
        let e = integrate(|x| x.sqrt().ln(), 0.0, 1.0, Tolerance::absolute(1e-12));
        assert!(e.converged);
        assert!((e.value + 0.5).abs() < 1e-11);
    }

    #[test]
    fn half_line() {
        let e = integrate_to_infinity(|x| (-x).exp(), 0.0, 1.0, Tolerance::absolute(1e-13));
        assert!((e.value - 1.0).abs() < 1e-12);
        let e = integrate_to_infinity(
            |x| 1.0 / (1.0 + x * x),
            0.0,
            1.0,
            Tolerance::absolute(1e-12),
        );
        assert!((e.value - std::f64::consts::FRAC_PI_2).abs() < 1e-11);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let tol = Tolerance {
            abs: 0.0,
            rel: 0.0,
            max_intervals: 4,
        };
        let e = integrate(|x: f64| (1.0 / x).sin(), 1e-6, 1.0, tol);
        assert!(!e.converged);
    }
}
