use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exponents of the rate argument.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamSet {
    pub t: f64,
    pub alpha: f64,
    pub m: f64,
    pub zeta: f64,
    pub s: f64,
    pub delta: f64,
    pub gamma: f64,
}

impl Default for ParamSet {
    /// `t = 1/5`, `α = 1/4`, completed to a point satisfying every constraint.
    fn default() -> Self {
        Self {
            t: 0.2,
            alpha: 0.25,
            m: 0.7,
            zeta: 0.2,
            s: 0.1,
            delta: 0.3,
            gamma: 6.0,
        }
    }
}

/// One failed inequality of the admissible parameter chain.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub inequality: &'static str,
    pub detail: String,
}

impl ParamSet {
    /// Lower bound that `γ` must exceed; infinite when `4m - t - 2 - 2ζ <= 0`.
    pub fn gamma_threshold(&self) -> f64 {
        let denom = 4.0 * self.m - self.t - 2.0 - 2.0 * self.zeta;
        let second = if denom > 0.0 {
            1.0 / denom
        } else {
            f64::INFINITY
        };
        let first = if self.s > 0.0 {
            1.0 / (2.0 * self.s)
        } else {
            f64::INFINITY
        };
        first.max(second)
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let v = validate_params(self);
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidParams(v))
        }
    }
}

/// Checks each inequality group independently; an empty list means valid.
pub fn validate_params(p: &ParamSet) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut check = |ok: bool, inequality: &'static str, detail: String| {
        if !ok {
            out.push(Violation { inequality, detail });
        }
    };
    let ParamSet {
        t,
        alpha,
        m,
        zeta,
        s,
        delta,
        gamma,
    } = *p;
    check(
        0.0 < alpha && alpha < 0.5,
        "0<α<1/2",
        format!("α = {alpha}"),
    );
    check(0.0 < t && t < 0.4, "0<t<2/5", format!("t = {t}"));
    check(
        0.5 + t / 4.0 < m && m < 1.0 - t,
        "1/2+t/4<m<1−t",
        format!("m = {m} not in ({}, {})", 0.5 + t / 4.0, 1.0 - t),
    );
    let zeta_hi = 2.0 * m - 1.0 - t / 2.0;
    check(
        0.0 < zeta && zeta < zeta_hi,
        "0<ζ<2m−1−t/2",
        format!("ζ = {zeta} not in (0, {zeta_hi})"),
    );
    let s_hi = 0.5 - t / 2.0;
    check(
        0.0 < s && s < s_hi,
        "0<s<1/2−t/2",
        format!("s = {s} not in (0, {s_hi})"),
    );
    check(
        t / 2.0 + s < delta && delta < 0.5,
        "t/2+s<δ<1/2",
        format!("δ = {delta} not in ({}, 1/2)", t / 2.0 + s),
    );
    let g = p.gamma_threshold();
    check(
        gamma > g,
        "γ>max(1/(2s),1/(4m−t−2−2ζ))",
        format!("γ = {gamma} must exceed {g}"),
    );
    out
}

/// `⌊k^γ⌋`, nudged up by a few ulps so exact powers are not lost to rounding.
pub fn floor_pow(k: f64, gamma: f64) -> u64 {
    let r = k.powf(gamma);
    (r * (1.0 + 4.0 * f64::EPSILON)).floor() as u64
}

/// `{⌊K^γ⌋ : K >= 1} ∩ [1, n_max]`, ascending.
pub fn gamma_grid(gamma: f64, n_max: u64) -> Result<Vec<u64>> {
    if gamma.is_nan() || gamma <= 1.0 {
        return Err(Error::GammaTooSmall(gamma));
    }
    let mut out: Vec<u64> = Vec::new();
    let mut k = 1u64;
    loop {
        let v = floor_pow(k as f64, gamma);
        if v > n_max {
            break;
        }
        if v > 0 && out.last() != Some(&v) {
            out.push(v);
        }
        k += 1;
    }
    Ok(out)
}

/// Largest element of the γ-grid not exceeding `target`, if any.
pub fn gamma_floor(gamma: f64, target: u64) -> Result<Option<u64>> {
    if gamma.is_nan() || gamma <= 1.0 {
        return Err(Error::GammaTooSmall(gamma));
    }
    if target == 0 {
        return Ok(None);
    }
    let mut k = (target as f64).powf(1.0 / gamma).floor().max(1.0);
    while floor_pow(k + 1.0, gamma) <= target {
        k += 1.0;
    }
    while k > 1.0 && floor_pow(k, gamma) > target {
        k -= 1.0;
    }
    Ok(Some(floor_pow(k, gamma)))
}
