use serde::{Deserialize, Serialize};

use super::params::{floor_pow, gamma_floor, ParamSet};
use crate::error::{Error, Result};

/// Which formula to use for the rate exponent `η`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EtaVariant {
    /// `min(1-m-t, 1/γ - 1, δ - t/2 - s, ζ)`, negative for every `γ > 1`.
    Paper,
    /// `min(1-m-t, 1/γ, δ - t/2 - s, ζ)`.
    #[default]
    Positive,
}

impl std::str::FromStr for EtaVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(Self::Paper),
            "positive" => Ok(Self::Positive),
            other => Err(Error::Config(format!(
                "unknown eta variant {other:?} (expected \"paper\" or \"positive\")"
            ))),
        }
    }
}

pub fn eta(p: &ParamSet, variant: EtaVariant) -> f64 {
    let gamma_term = match variant {
        EtaVariant::Paper => 1.0 / p.gamma - 1.0,
        EtaVariant::Positive => 1.0 / p.gamma,
    };
    (1.0 - p.m - p.t)
        .min(gamma_term)
        .min(p.delta - p.t / 2.0 - p.s)
        .min(p.zeta)
}

/// Derived integers at a given `N`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    pub n: u64,
    /// `T = ⌊N^t⌋`.
    pub subdivisions: u64,
    /// `M = ⌊N^m⌋`.
    pub pair_threshold: u64,
    /// `N' = max{n ∈ ℕ^γ : n <= N - T - M(T-1)}`.
    pub n_prime: u64,
    pub eta: f64,
    pub variant: EtaVariant,
}

impl Schedule {
    /// `T + M(T-1)`.
    pub fn shift(&self) -> u64 {
        self.subdivisions + self.pair_threshold * (self.subdivisions - 1)
    }

    /// Whether `T(M+1) < N`, the hypothesis of the decomposition sandwich.
    pub fn sandwich_applies(&self) -> bool {
        self.subdivisions * (self.pair_threshold + 1) < self.n
    }

    /// Empirical `(N - N') / N'`.
    pub fn gap_ratio(&self) -> f64 {
        (self.n - self.n_prime) as f64 / self.n_prime as f64
    }
}

pub fn make_schedule(n: u64, p: &ParamSet, variant: EtaVariant) -> Result<Schedule> {
    if n == 0 {
        return Err(Error::NTooSmall("N must be positive".into()));
    }
    let nf = n as f64;
    let subdivisions = floor_pow(nf, p.t).max(1);
    let pair_threshold = floor_pow(nf, p.m);
    let shift = subdivisions + pair_threshold * (subdivisions - 1);
    let target = n.checked_sub(shift).filter(|&v| v >= 1).ok_or_else(|| {
        Error::NTooSmall(format!(
            "N = {n} does not exceed T + M(T-1) = {shift} (T = {subdivisions}, M = {pair_threshold})"
        ))
    })?;
    let n_prime = gamma_floor(p.gamma, target)?.expect("target >= 1 contains 1");
    Ok(Schedule {
        n,
        subdivisions,
        pair_threshold,
        n_prime,
        eta: eta(p, variant),
        variant,
    })
}
