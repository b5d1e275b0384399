use std::f64::consts::TAU;

use serde::Serialize;

use super::params::ParamSet;
use super::schedule::{eta, EtaVariant};
use crate::error::{Error, Result};
use crate::measures::{mu_n_f, nu_f, threshold_area, Banded, TestFunction, ThresholdSet};
use crate::sampling::{holder_norm, PlanarPath};
use crate::winding::WindingField;

/// `2πN |D_N|`.
pub fn werner_statistic(field: &WindingField, n: i32) -> Result<Banded> {
    if n < 1 {
        return Err(Error::Precondition(format!("N must be >= 1, got {n}")));
    }
    Ok(threshold_area(&ThresholdSet::one_sided(field, n))?.scale(TAU * n as f64))
}

/// `|μ_N(f) - ν(f)|`.
pub fn theorem_discrepancy(
    path: &PlanarPath,
    field: &WindingField,
    f: &TestFunction,
    n: i32,
) -> Result<Banded> {
    let mu = mu_n_f(field, n, f)?;
    let nu = nu_f(path, f);
    Ok(Banded {
        off_curve: (mu.off_curve - nu).abs(),
        inclusive: (mu.inclusive - nu).abs(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RateBound {
    pub bound: f64,
    pub discrepancy: Banded,
    /// `discrepancy / bound` for each band variant.
    pub ratio: Banded,
}

/// Right-hand side of the rate estimate without its unknown constant,
/// `ω_f(2 ||X||_α N^{-αt}) + ||f||_∞ N^{-η}`, and the observed ratio.
pub fn rate_bound(
    path: &PlanarPath,
    field: &WindingField,
    f: &TestFunction,
    n: i32,
    p: &ParamSet,
    variant: EtaVariant,
) -> Result<RateBound> {
    p.ensure_valid()?;
    if !(f.lipschitz.is_finite() || f.sup_norm.is_finite()) {
        return Err(Error::Precondition(
            "test function needs a finite Lipschitz constant or sup norm".into(),
        ));
    }
    let holder = holder_norm(path, p.alpha)?;
    let bound = rate_bound_value(f, holder, n, p, variant);
    let discrepancy = theorem_discrepancy(path, field, f, n)?;
    Ok(RateBound {
        bound,
        discrepancy,
        ratio: Banded {
            off_curve: discrepancy.off_curve / bound,
            inclusive: discrepancy.inclusive / bound,
        },
    })
}

pub fn rate_bound_value(
    f: &TestFunction,
    holder: f64,
    n: i32,
    p: &ParamSet,
    variant: EtaVariant,
) -> f64 {
    let nf = n as f64;
    f.modulus(2.0 * holder * nf.powf(-p.alpha * p.t)) + f.sup_norm * nf.powf(-eta(p, variant))
}
