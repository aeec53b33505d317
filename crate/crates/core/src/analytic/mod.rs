//! Closed-form and numerically exact evaluators for the proposed scheme.
//!
//! Outage probability splits on the branch of the optimal power-splitting factor:
//!
//! ```text
//! P_out = P1 + P2,   P2 = P21 + P22,   P22 = P221 - lambda0 lambda1 P222
//! ```
//!
//! where `P1` covers the direct-link branch (`y < x`), `P21` the region
//! `x < y < a`, and `P22` the region `x < a < y` in which the relay-destination
//! gain decides. Ergodic capacity splits the same way into `C1 + C2`.

mod capacity;
mod outage;

pub use capacity::{
    capacity_c1, capacity_c1_exact, capacity_c2, capacity_c2_exact, capacity_noncooperative,
    ergodic_capacity, ergodic_capacity_exact, ergodic_capacity_with,
};
pub use outage::{
    diversity_order, exp_log_integral, noncooperative_diversity_order, outage_noncooperative,
    outage_p1, outage_p21, outage_p221, outage_p222, outage_probability, OutageTerms,
};

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Node counts of every Gauss-Chebyshev approximation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadratureSpec {
    /// Nodes for the `int_0^a e^(lambda0 x) ln x dx` term of the approximate outage.
    pub n_outage: usize,
    /// Nodes for the `C1` half-line integral.
    pub m_cap: usize,
    /// Nodes over `x`, `y` and `z` in `C2`.
    pub n1: usize,
    pub n2: usize,
    pub n3: usize,
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        for (name, n) in [
            ("n_outage", self.n_outage),
            ("m_cap", self.m_cap),
            ("n1", self.n1),
            ("n2", self.n2),
            ("n3", self.n3),
        ] {
            if n == 0 {
                return Err(Error::invalid(name, "node count must be >= 1"));
            }
        }
        Ok(())
    }

    pub fn with_capacity_nodes(self, n: usize) -> Self {
        QuadratureSpec {
            m_cap: n,
            n1: n,
            n2: n,
            n3: n,
            ..self
        }
    }
}

impl Default for QuadratureSpec {
    /// 20 nodes for every capacity rule. The outage log-integral gets 1000: its
    /// quadrature error is amplified by a cancellation against terms of order
    /// `a`, and 20 nodes are already off by tens of percent at 30 dB.
    fn default() -> Self {
        QuadratureSpec {
            n_outage: 1000,
            m_cap: 20,
            n1: 20,
            n2: 20,
            n3: 20,
        }
    }
}

impl FromStr for QuadratureSpec {
    type Err = Error;

    /// Parses `N,M,N1,N2,N3`.
    fn from_str(s: &str) -> Result<Self> {
        let counts = s
            .split(',')
            .map(|v| v.trim().parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::invalid("quad", format!("{s:?}: {e}")))?;
        let [n_outage, m_cap, n1, n2, n3] = counts[..] else {
            return Err(Error::invalid(
                "quad",
                format!("expected five counts N,M,N1,N2,N3, got {s:?}"),
            ));
        };
        let q = QuadratureSpec {
            n_outage,
            m_cap,
            n1,
            n2,
            n3,
        };
        q.validate()?;
        Ok(q)
    }
}

impl fmt::Display for QuadratureSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{},{},{},{},{}",
            self.n_outage, self.m_cap, self.n1, self.n2, self.n3
        )
    }
}

/// How an analytic quantity is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EvalMode {
    /// Adaptive numerical integration of the exact expressions.
    Exact,
    /// The closed forms with their small-argument expansion and Gauss-Chebyshev rules.
    Approx,
}

impl EvalMode {
    pub fn name(&self) -> &'static str {
        match self {
            EvalMode::Exact => "exact",
            EvalMode::Approx => "approx",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadrature_spec_parsing() {
        let q: QuadratureSpec = "100, 20,20,30,40".parse().unwrap();
        assert_eq!(
            q,
            QuadratureSpec {
                n_outage: 100,
                m_cap: 20,
                n1: 20,
                n2: 30,
                n3: 40
            }
        );
        assert_eq!(q.to_string().parse::<QuadratureSpec>().unwrap(), q);
        assert!("1,2,3".parse::<QuadratureSpec>().is_err());
        assert!("1,2,3,0,5".parse::<QuadratureSpec>().is_err());
        assert!("a,2,3,4,5".parse::<QuadratureSpec>().is_err());
    }
}
