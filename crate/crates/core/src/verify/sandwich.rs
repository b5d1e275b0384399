//! Two-sided decomposition bound of `μ(D_N)` by subloop sets.
//!
//! With `K = T + M(T-1)` and `T(M+1) < N`:
//!
//! ```text
//! Σ_i μ(D^i_{N+K}) - Σ_{i<j} μ(D^{i,j}_M) <= μ(D_N) <= Σ_i μ(D^i_{N-K}) + Σ_{i<j} μ(D^{i,j}_M)
//! ```
//!
//! Both sides are also checked cell by cell on the indicator functions.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::measures::TestFunction;
use crate::sampling::PlanarPath;
use crate::winding::{subloop_fields, winding_field, ClosedLoop, GridSpec, WindingField};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SandwichReport {
    pub n: i32,
    pub subdivisions: usize,
    pub pair_threshold: i32,
    pub lower: f64,
    pub center: f64,
    pub upper: f64,
    pub measure_holds: bool,
    /// Off-curve cells where `1{θ >= N}` exceeds the upper indicator sum.
    pub upper_violations: usize,
    /// Off-curve cells where the lower indicator sum exceeds `1{θ >= N}`.
    pub lower_violations: usize,
    pub cells_checked: usize,
}

impl SandwichReport {
    pub fn holds(&self) -> bool {
        self.measure_holds && self.upper_violations == 0 && self.lower_violations == 0
    }
}

fn check_pre(n: i32, parts: usize, m: i32) -> Result<()> {
    if parts == 0 || m < 1 || n < 1 {
        return Err(Error::Precondition(format!(
            "need N, T, M >= 1 (got N = {n}, T = {parts}, M = {m})"
        )));
    }
    if (parts as i64) * (m as i64 + 1) >= n as i64 {
        return Err(Error::Precondition(format!(
            "T(M+1) = {} must be < N = {n}",
            parts as i64 * (m as i64 + 1)
        )));
    }
    Ok(())
}

/// Computes every field involved and checks the sandwich.
pub fn verify_decomposition(
    path: &PlanarPath,
    n: i32,
    parts: usize,
    m: i32,
    grid: &GridSpec,
    f: &TestFunction,
) -> Result<SandwichReport> {
    check_pre(n, parts, m)?;
    let eps = grid.default_eps();
    let full = winding_field(&ClosedLoop::from_path(path), grid, eps)?;
    let subs = subloop_fields(path, parts, grid, eps)?;
    decomposition_from_fields(&full, &subs, n, m, f)
}

/// Sandwich check on precomputed fields of the loop and its `T` subloops.
pub fn decomposition_from_fields(
    full: &WindingField,
    subs: &[WindingField],
    n: i32,
    m: i32,
    f: &TestFunction,
) -> Result<SandwichReport> {
    let parts = subs.len();
    check_pre(n, parts, m)?;
    if subs.iter().any(|s| !s.same_grid(full)) {
        return Err(Error::GridMismatch);
    }
    let grid = full.grid;
    let area = grid.cell_area();
    let shift = parts as i32 + m * (parts as i32 - 1);
    let (up_thr, lo_thr) = (n - shift, n + shift);

    let mut report = SandwichReport {
        n,
        subdivisions: parts,
        pair_threshold: m,
        lower: 0.0,
        center: 0.0,
        upper: 0.0,
        measure_holds: true,
        upper_violations: 0,
        lower_violations: 0,
        cells_checked: 0,
    };
    // Gaps accumulate nonnegative terms whenever the pointwise inclusions hold.
    let (mut upper_gap, mut lower_gap) = (0.0f64, 0.0f64);
    for k in 0..grid.cells() {
        if full.on_curve[k] || subs.iter().any(|s| s.on_curve[k]) {
            continue;
        }
        report.cells_checked += 1;
        let w = f.eval(grid.center_of(k));
        if w < 0.0 {
            return Err(Error::Precondition(format!(
                "test function must be nonnegative, got {w} at cell {k}"
            )));
        }
        let center = i64::from(full.theta[k] >= n);
        let (mut up, mut lo, mut big) = (0i64, 0i64, 0i64);
        for s in subs {
            let th = s.theta[k];
            up += i64::from(th >= up_thr);
            lo += i64::from(th >= lo_thr);
            big += i64::from(th.abs() >= m);
        }
        let pairs = big * (big - 1) / 2;
        let upper = up + pairs;
        let lower = lo - pairs;
        if center > upper {
            report.upper_violations += 1;
        }
        if lower > center {
            report.lower_violations += 1;
        }
        let wa = w * area;
        report.center += wa * center as f64;
        report.upper += wa * upper as f64;
        report.lower += wa * lower as f64;
        upper_gap += wa * (upper - center) as f64;
        lower_gap += wa * (center - lower) as f64;
    }
    report.measure_holds = upper_gap >= 0.0 && lower_gap >= 0.0;
    Ok(report)
}
