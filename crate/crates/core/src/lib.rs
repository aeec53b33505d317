//! Analysis toolkit for decode-and-forward SWIPT relay networks with a direct link.
//!
//! The relay splits its received power between an energy harvester (fraction `rho`)
//! and an information decoder (fraction `1 - rho`), then forwards with the harvested
//! energy. The destination combines the relayed and direct signals.
//!
//! Modules:
//!
//! - [`model`]: system parameters, per-realization SNRs, the optimal dynamic
//!   power-splitting factor and the comparison schemes.
//! - [`specfun`]: `K1`, `Ei`/`E1` and Gauss-Chebyshev rules.
//! - [`quad`]: adaptive Gauss-Kronrod integration used by the exact evaluators.
//! - [`analytic`]: outage probability, diversity order and ergodic capacity.
//! - [`montecarlo`]: reproducible parallel Monte Carlo estimators.
//! - [`experiments`]: SNR sweeps, CSV and plot-script output, validation report.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod error;
pub mod experiments;
pub mod model;
pub mod montecarlo;
pub mod quad;
pub mod specfun;

pub use error::{Error, Result};
pub use model::{ChannelGains, PsDecision, Scheme, SnrComponents, SystemParams};
