use std::f64::consts::TAU;

use serde::Serialize;

use super::params::ParamSet;
use super::schedule::{make_schedule, EtaVariant, Schedule};
use crate::error::{Error, Result};
use crate::measures::{threshold_area, Banded, ThresholdSet};
use crate::sampling::PlanarPath;
use crate::winding::{subloop_fields, GridSpec, WindingField};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EventFlags {
    /// Every subloop area at `N'` is within the prescribed deviation of `1/T`.
    pub e: bool,
    /// The pair sets at level `M` have small total area.
    pub f: bool,
    /// Every normalized subloop area at `N'` is at most `2/T`.
    pub g: bool,
}

/// Areas entering the event definitions.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EventInputs {
    pub schedule: Schedule,
    /// `|D^i_{N'}|`, `i = 1..T`.
    pub subloop_areas: Vec<f64>,
    /// `Σ_{i<j} |D^{i,j}_M|`.
    pub pair_area: f64,
}

impl EventInputs {
    pub fn flags(&self, p: &ParamSet) -> EventFlags {
        let s = &self.schedule;
        let t = s.subdivisions as f64;
        let np = s.n_prime as f64;
        let nf = s.n as f64;
        let e_tol = t.powf(-0.5 + p.s / p.t);
        let e = self
            .subloop_areas
            .iter()
            .all(|&a| np.powf(p.delta) * (TAU * np * a - 1.0 / t).abs() <= e_tol);
        let f = self.pair_area <= nf.powf(-1.0 - p.zeta);
        let g = self.subloop_areas.iter().all(|&a| TAU * nf * a <= 2.0 / t);
        EventFlags { e, f, g }
    }
}

/// `Σ_{i<j} |{|θ^i| >= m, |θ^j| >= m}|` by counting, per cell, how many
/// fields reach the threshold. The off-curve variant only counts a field at a
/// cell that is off that field's curve.
pub fn pair_area_sum(fields: &[WindingField], m: i32) -> Result<Banded> {
    let Some(first) = fields.first() else {
        return Ok(Banded::default());
    };
    if fields.iter().any(|f| !f.same_grid(first)) {
        return Err(Error::GridMismatch);
    }
    let grid = first.grid;
    let (mut off, mut incl) = (0u64, 0u64);
    for k in 0..grid.cells() {
        let (mut big, mut big_off) = (0u64, 0u64);
        for f in fields {
            if f.theta[k].abs() >= m {
                big += 1;
                big_off += u64::from(!f.on_curve[k]);
            }
        }
        incl += big * big.saturating_sub(1) / 2;
        off += big_off * big_off.saturating_sub(1) / 2;
    }
    let a = grid.cell_area();
    Ok(Banded {
        off_curve: off as f64 * a,
        inclusive: incl as f64 * a,
    })
}

/// Event inputs from the subloop fields at subdivision count `T`.
pub fn event_inputs_from_fields(
    schedule: Schedule,
    subs: &[WindingField],
    inclusive: bool,
) -> Result<EventInputs> {
    if subs.len() as u64 != schedule.subdivisions {
        return Err(Error::Precondition(format!(
            "expected {} subloop fields, got {}",
            schedule.subdivisions,
            subs.len()
        )));
    }
    let pick = |b: Banded| if inclusive { b.inclusive } else { b.off_curve };
    let n_prime = i32::try_from(schedule.n_prime)
        .map_err(|_| Error::Precondition("N' exceeds the winding range".into()))?;
    let m = i32::try_from(schedule.pair_threshold)
        .map_err(|_| Error::Precondition("M exceeds the winding range".into()))?;
    let subloop_areas = subs
        .iter()
        .map(|s| threshold_area(&ThresholdSet::one_sided(s, n_prime)).map(pick))
        .collect::<Result<Vec<_>>>()?;
    let pair_area = pick(pair_area_sum(subs, m)?);
    Ok(EventInputs {
        schedule,
        subloop_areas,
        pair_area,
    })
}

/// Evaluates `E_N`, `F_N`, `G_N` with grid areas (band-inclusive counting).
pub fn event_flags(
    path: &PlanarPath,
    n: u64,
    p: &ParamSet,
    grid: &GridSpec,
) -> Result<(EventFlags, EventInputs)> {
    let schedule = make_schedule(n, p, EtaVariant::default())?;
    let parts = schedule.subdivisions as usize;
    let subs = subloop_fields(path, parts, grid, grid.default_eps())?;
    let inputs = event_inputs_from_fields(schedule, &subs, true)?;
    Ok((inputs.flags(p), inputs))
}
