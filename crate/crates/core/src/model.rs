//! System model: parameters, channel realizations, per-hop SNRs and the
//! power-splitting policies compared in the analysis.
//!
//! All SNRs are linear. The source transmit SNR `gamma_in = P_s / sigma^2` absorbs
//! the transmit power and the (common) noise variance at relay and destination.

use std::f64::consts::LN_2;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Converts a value in dB to linear scale.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

/// The physical scenario evaluated at one SNR point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    /// Source transmit SNR (linear).
    pub gamma_in: f64,
    /// Energy conversion efficiency of the relay harvester, in (0, 1).
    pub eta: f64,
    /// Rate of the exponential direct-link power gain `|h0|^2` (mean `1/lambda0`).
    pub lambda0: f64,
    /// Rate of the source-relay power gain `|h1|^2`.
    pub lambda1: f64,
    /// Rate of the relay-destination power gain `|h2|^2`.
    pub lambda2: f64,
    /// Target rate in bits/s/Hz.
    pub r_th: f64,
}

impl SystemParams {
    pub fn new(
        gamma_in: f64,
        eta: f64,
        lambda0: f64,
        lambda1: f64,
        lambda2: f64,
        r_th: f64,
    ) -> Result<Self> {
        let p = SystemParams {
            gamma_in,
            eta,
            lambda0,
            lambda1,
            lambda2,
            r_th,
        };
        p.validate()?;
        Ok(p)
    }

    /// Reference scenario of the numerical study: `eta = 0.5`, mean gains
    /// 1, 5 and 5 for the direct, source-relay and relay-destination links,
    /// and a 1 bit/s/Hz target rate.
    pub fn reference(gamma_in: f64) -> Self {
        SystemParams {
            gamma_in,
            eta: 0.5,
            lambda0: 1.0,
            lambda1: 0.2,
            lambda2: 0.2,
            r_th: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        fn positive(name: &'static str, v: f64) -> Result<()> {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::invalid(
                    name,
                    format!("must be finite and > 0, got {v}"),
                ))
            }
        }
        positive("gamma_in", self.gamma_in)?;
        positive("lambda0", self.lambda0)?;
        positive("lambda1", self.lambda1)?;
        positive("lambda2", self.lambda2)?;
        positive("r_th", self.r_th)?;
        if !(self.eta > 0.0 && self.eta < 1.0) {
            return Err(Error::invalid(
                "eta",
                format!("must lie in (0, 1), got {}", self.eta),
            ));
        }
        Ok(())
    }

    pub fn with_gamma_in(self, gamma_in: f64) -> Self {
        SystemParams { gamma_in, ..self }
    }

    pub fn with_snr_db(self, snr_db: f64) -> Self {
        self.with_gamma_in(db_to_linear(snr_db))
    }

    /// SNR threshold matching the target rate: `R < r_th` with `R = log2(1 + g) / 2`
    /// is the event `g < 2^(2 r_th) - 1`.
    pub fn gamma_th(&self) -> f64 {
        (2.0 * self.r_th * LN_2).exp_m1()
    }

    /// `a = gamma_th / gamma_in`, the threshold on the channel power gains.
    pub fn threshold_ratio(&self) -> f64 {
        self.gamma_th() / self.gamma_in
    }
}

/// One fading realization: the three channel power gains.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelGains {
    /// Direct link `|h0|^2`.
    pub x: f64,
    /// Source to relay `|h1|^2`.
    pub y: f64,
    /// Relay to destination `|h2|^2`.
    pub z: f64,
}

impl ChannelGains {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        for (name, v) in [("x", x), ("y", y), ("z", z)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::invalid(
                    name,
                    format!("channel gain must be finite and >= 0, got {v}"),
                ));
            }
        }
        Ok(ChannelGains { x, y, z })
    }
}

/// The three link SNRs for a given power-splitting factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnrComponents {
    /// Information branch at the relay, `(1 - rho) gamma_in y`.
    pub gamma_r: f64,
    /// Direct link at the destination, `gamma_in x`.
    pub gamma_sd: f64,
    /// Relayed signal at the destination, `eta rho gamma_in y z`.
    pub gamma_rd: f64,
}

impl SnrComponents {
    /// DF with MRC of the direct and relayed signals: `min(gamma_r, gamma_sd + gamma_rd)`.
    pub fn combined(&self) -> f64 {
        self.gamma_r.min(self.gamma_sd + self.gamma_rd)
    }

    /// DF over the relay hops only, ignoring the direct link.
    pub fn relay_only(&self) -> f64 {
        self.gamma_r.min(self.gamma_rd)
    }

    /// [`combined`](Self::combined), falling back to the direct link alone when that
    /// is better. An energy-harvesting relay may have nothing to forward, in which
    /// case the destination still has the direct signal.
    pub fn with_direct_fallback(&self) -> f64 {
        self.gamma_sd.max(self.combined())
    }
}

fn components(p: &SystemParams, g: &ChannelGains, rho: f64) -> SnrComponents {
    SnrComponents {
        gamma_r: (1.0 - rho) * p.gamma_in * g.y,
        gamma_sd: p.gamma_in * g.x,
        gamma_rd: p.eta * rho * p.gamma_in * g.y * g.z,
    }
}

fn check_rho(name: &'static str, rho: f64) -> Result<()> {
    if (0.0..=1.0).contains(&rho) {
        Ok(())
    } else {
        Err(Error::invalid(
            name,
            format!("must lie in [0, 1], got {rho}"),
        ))
    }
}

/// Link SNRs at power-splitting factor `rho`.
pub fn snr_components(p: &SystemParams, g: &ChannelGains, rho: f64) -> Result<SnrComponents> {
    check_rho("rho", rho)?;
    Ok(components(p, g, rho))
}

/// Outcome of a power-splitting decision for one realization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsDecision {
    pub rho: f64,
    /// End-to-end SNR at the destination.
    pub gamma_end: f64,
    /// Whether the relay path contributes to `gamma_end`.
    pub used_relay: bool,
}

/// Power-splitting factor maximizing the end-to-end SNR.
///
/// When the source-relay gain is below the direct-link gain the relay cannot
/// improve on the direct link and the destination relies on it alone
/// (`rho = 0`, SNR `gamma_in x`). Otherwise `rho` equalizes the relay decoding
/// SNR with the combined SNR at the destination:
///
/// ```text
/// rho = (y - x) / (y + eta y z),   gamma_end = gamma_in (x + eta y z) / (1 + eta z)
/// ```
pub fn optimal_rho(p: &SystemParams, g: &ChannelGains) -> PsDecision {
    let direct = PsDecision {
        rho: 0.0,
        gamma_end: p.gamma_in * g.x,
        used_relay: false,
    };
    // y = x = 0 and z = 0 make the relay useless; both land on the direct link.
    if g.y < g.x || g.y == 0.0 || g.z == 0.0 {
        return direct;
    }
    let harvest = p.eta * g.y * g.z;
    let rho = (g.y - g.x) / (g.y + harvest);
    if rho == 0.0 {
        return direct;
    }
    PsDecision {
        rho,
        gamma_end: p.gamma_in * (g.x + harvest) / (1.0 + p.eta * g.z),
        used_relay: true,
    }
}

/// Rate-driven dynamic power splitting: harvest everything the relay's decoder
/// does not need to reach the SNR threshold, `rho = max(1 - gamma_th / (gamma_in y), 0)`.
///
/// The result is the largest representable factor whose information branch still
/// meets the threshold, so `(1 - rho) gamma_in y >= gamma_th` holds in floating
/// point whenever it holds at `rho = 0`.
pub fn legacy_rho(p: &SystemParams, g: &ChannelGains) -> f64 {
    let full = p.gamma_in * g.y;
    let gamma_th = p.gamma_th();
    if !(full > gamma_th) {
        return 0.0;
    }
    let mut rho = 1.0 - gamma_th / full;
    // Same association as the relay SNR so the guard sees the value used downstream.
    while rho > 0.0 && (1.0 - rho) * p.gamma_in * g.y < gamma_th {
        rho = rho.next_down();
    }
    rho.max(0.0)
}

/// Power-splitting policy under evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scheme {
    /// Optimal dynamic factor with direct-link combining.
    ProposedDpss,
    /// Rate-driven dynamic factor, relay path only (no direct link).
    LegacyDpss,
    /// Rate-driven dynamic factor with direct-link combining and fallback.
    LegacyDpssDl,
    /// Factor drawn uniformly on [0, 1] per block, direct-link combining.
    RandomPs,
    /// Direct link only.
    NonCooperative,
    /// Constant factor, direct-link combining.
    FixedPs(f64),
}

impl Scheme {
    pub fn name(&self) -> String {
        match self {
            Scheme::ProposedDpss => "proposed".into(),
            Scheme::LegacyDpss => "legacy".into(),
            Scheme::LegacyDpssDl => "legacy-dl".into(),
            Scheme::RandomPs => "random".into(),
            Scheme::NonCooperative => "noncoop".into(),
            Scheme::FixedPs(rho) => format!("fixed:{rho}"),
        }
    }

    /// The four curves of the outage/capacity comparison.
    pub fn comparison_set() -> Vec<Scheme> {
        vec![
            Scheme::ProposedDpss,
            Scheme::LegacyDpss,
            Scheme::RandomPs,
            Scheme::NonCooperative,
        ]
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "proposed" => Ok(Scheme::ProposedDpss),
            "legacy" => Ok(Scheme::LegacyDpss),
            "legacy-dl" => Ok(Scheme::LegacyDpssDl),
            "random" => Ok(Scheme::RandomPs),
            "noncoop" => Ok(Scheme::NonCooperative),
            "fixed" => Ok(Scheme::FixedPs(0.5)),
            _ => {
                if let Some(rho) = s.strip_prefix("fixed:") {
                    let rho: f64 = rho.parse().map_err(|_| {
                        Error::invalid("scheme", format!("bad fixed factor in {s:?}"))
                    })?;
                    check_rho("scheme", rho)?;
                    Ok(Scheme::FixedPs(rho))
                } else {
                    Err(Error::invalid(
                        "scheme",
                        format!(
                            "unknown scheme {s:?} (expected proposed, legacy, legacy-dl, random, noncoop, fixed[:rho])"
                        ),
                    ))
                }
            }
        }
    }
}

/// End-to-end SNR delivered by `scheme` on one realization.
///
/// `rho_random` is the factor drawn for [`Scheme::RandomPs`] and must be absent
/// for every other scheme.
pub fn effective_snr(
    scheme: Scheme,
    p: &SystemParams,
    g: &ChannelGains,
    rho_random: Option<f64>,
) -> Result<f64> {
    match (scheme, rho_random) {
        (Scheme::RandomPs, None) => Err(Error::invalid(
            "rho_random",
            "the random scheme needs a drawn power-splitting factor",
        )),
        (Scheme::RandomPs, Some(rho)) => {
            check_rho("rho_random", rho)?;
            Ok(components(p, g, rho).combined())
        }
        (_, Some(_)) => Err(Error::invalid(
            "rho_random",
            format!("only the random scheme takes a drawn factor, not {scheme}"),
        )),
        (Scheme::FixedPs(rho), None) => {
            check_rho("scheme", rho)?;
            Ok(components(p, g, rho).combined())
        }
        (scheme, None) => Ok(deterministic_snr(scheme, p, g)),
    }
}

/// [`effective_snr`] for the schemes that take no random draw. Panics on
/// [`Scheme::RandomPs`].
pub(crate) fn deterministic_snr(scheme: Scheme, p: &SystemParams, g: &ChannelGains) -> f64 {
    match scheme {
        Scheme::ProposedDpss => optimal_rho(p, g).gamma_end,
        Scheme::LegacyDpss => components(p, g, legacy_rho(p, g)).relay_only(),
        Scheme::LegacyDpssDl => components(p, g, legacy_rho(p, g)).with_direct_fallback(),
        Scheme::NonCooperative => p.gamma_in * g.x,
        Scheme::FixedPs(rho) => components(p, g, rho).combined(),
        Scheme::RandomPs => unreachable!("random scheme needs a drawn factor"),
    }
}

/// `log2(1 + gamma) / 2` bits/s/Hz; the half accounts for the two time slots.
pub fn achievable_rate(gamma_end: f64) -> f64 {
    debug_assert!(gamma_end >= 0.0);
    0.5 * gamma_end.ln_1p() / LN_2
}
