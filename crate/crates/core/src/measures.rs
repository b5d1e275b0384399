//! Measures built from winding fields: areas of threshold sets, integrals of
//! test functions over them, the normalized measure `2πN 1{θ ≥ N} dz`, and
//! the occupation measure of a path.

use std::f64::consts::TAU;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::sampling::PlanarPath;
use crate::winding::{GridSpec, WindingField};

/// Bounded test function with known sup norm and (optional) Lipschitz constant.
#[derive(Clone)]
pub struct TestFunction {
    pub name: String,
    eval: Arc<dyn Fn(Point) -> f64 + Send + Sync>,
    pub sup_norm: f64,
    /// `f64::INFINITY` when unknown.
    pub lipschitz: f64,
}

impl fmt::Debug for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TestFunction")
            .field("name", &self.name)
            .field("sup_norm", &self.sup_norm)
            .field("lipschitz", &self.lipschitz)
            .finish()
    }
}

impl TestFunction {
    pub fn new(
        name: impl Into<String>,
        sup_norm: f64,
        lipschitz: f64,
        eval: impl Fn(Point) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            eval: Arc::new(eval),
            sup_norm,
            lipschitz,
        }
    }

    pub fn constant(c: f64) -> Self {
        let name = if c == 1.0 {
            "one".to_string()
        } else {
            format!("const_{c}")
        };
        Self::new(name, c.abs(), 0.0, move |_| c)
    }

    /// `exp(-|z - center|^2 / (2 width^2))`.
    pub fn gaussian_bump(center: Point, width: f64) -> Self {
        let inv = 1.0 / (2.0 * width * width);
        Self::new("gaussian_bump", 1.0, (-0.5f64).exp() / width, move |z| {
            let (dx, dy) = (z.x - center.x, z.y - center.y);
            (-(dx * dx + dy * dy) * inv).exp()
        })
    }

    #[inline]
    pub fn eval(&self, z: Point) -> f64 {
        (self.eval)(z)
    }

    /// Bound on the modulus of continuity: `min(2 ||f||_inf, L t)`.
    pub fn modulus(&self, t: f64) -> f64 {
        let cap = 2.0 * self.sup_norm;
        if self.lipschitz.is_finite() {
            cap.min(self.lipschitz * t)
        } else {
            cap
        }
    }
}

/// Grid set defined by thresholds on one or two winding fields.
#[derive(Clone, Copy, Debug)]
pub enum ThresholdSet<'a> {
    /// `{θ >= n}`.
    OneSided { field: &'a WindingField, n: i32 },
    /// `{|θ_a| >= m and |θ_b| >= m}`.
    PairAbsolute {
        a: &'a WindingField,
        b: &'a WindingField,
        m: i32,
    },
    /// `{θ_a >= n and θ_b >= n}`.
    Joint {
        a: &'a WindingField,
        b: &'a WindingField,
        n: i32,
    },
}

/// Area (or integral) counted off the on-curve band and including it.
#[derive(Clone, Copy, Debug, Default, PartialEq, serde::Serialize)]
pub struct Banded {
    pub off_curve: f64,
    pub inclusive: f64,
}

impl Banded {
    pub fn scale(self, c: f64) -> Banded {
        Banded {
            off_curve: c * self.off_curve,
            inclusive: c * self.inclusive,
        }
    }
}

impl<'a> ThresholdSet<'a> {
    pub fn one_sided(field: &'a WindingField, n: i32) -> Self {
        Self::OneSided { field, n }
    }

    pub fn pair_absolute(a: &'a WindingField, b: &'a WindingField, m: i32) -> Self {
        Self::PairAbsolute { a, b, m }
    }

    pub fn joint(a: &'a WindingField, b: &'a WindingField, n: i32) -> Self {
        Self::Joint { a, b, n }
    }

    pub fn grid(&self) -> &'a GridSpec {
        match self {
            Self::OneSided { field, .. } => &field.grid,
            Self::PairAbsolute { a, .. } | Self::Joint { a, .. } => &a.grid,
        }
    }

    fn check(&self) -> Result<()> {
        match self {
            Self::OneSided { .. } => Ok(()),
            Self::PairAbsolute { a, b, .. } | Self::Joint { a, b, .. } => {
                if a.same_grid(b) {
                    Ok(())
                } else {
                    Err(Error::GridMismatch)
                }
            }
        }
    }

    /// Membership of cell `k`, and whether it lies off every involved curve.
    #[inline]
    pub fn member(&self, k: usize) -> (bool, bool) {
        match *self {
            Self::OneSided { field, n } => (field.theta[k] >= n, !field.on_curve[k]),
            Self::PairAbsolute { a, b, m } => (
                a.theta[k].abs() >= m && b.theta[k].abs() >= m,
                !a.on_curve[k] && !b.on_curve[k],
            ),
            Self::Joint { a, b, n } => (
                a.theta[k] >= n && b.theta[k] >= n,
                !a.on_curve[k] && !b.on_curve[k],
            ),
        }
    }

    fn integrate(&self, weight: impl Fn(usize) -> f64) -> Result<Banded> {
        self.check()?;
        let grid = self.grid();
        let mut out = Banded::default();
        for k in 0..grid.cells() {
            let (inside, off) = self.member(k);
            if inside {
                let w = weight(k);
                out.inclusive += w;
                if off {
                    out.off_curve += w;
                }
            }
        }
        Ok(out.scale(grid.cell_area()))
    }
}

/// Area of the set: member cell count times cell area.
pub fn threshold_area(set: &ThresholdSet<'_>) -> Result<Banded> {
    set.integrate(|_| 1.0)
}

/// Midpoint quadrature of `∫_E f(z) dz`.
pub fn f_measure(set: &ThresholdSet<'_>, f: &TestFunction) -> Result<Banded> {
    let grid = *set.grid();
    set.integrate(|k| f.eval(grid.center_of(k)))
}

/// `μ_N(f) = 2πN ∫ f 1{θ >= N} dz`.
pub fn mu_n_f(field: &WindingField, n: i32, f: &TestFunction) -> Result<Banded> {
    if n < 1 {
        return Err(Error::Precondition(format!("N must be >= 1, got {n}")));
    }
    let m = f_measure(&ThresholdSet::one_sided(field, n), f)?;
    Ok(m.scale(TAU * n as f64))
}

/// `∫_0^1 f(X_t) dt` by the left-endpoint rule on the path's time grid.
pub fn nu_f(path: &PlanarPath, f: &TestFunction) -> f64 {
    let pts = path.points();
    let s: f64 = pts[..pts.len() - 1].iter().map(|&p| f.eval(p)).sum();
    s * path.dt()
}

/// Time spent by the path in each grid cell.
#[derive(Clone, Debug, PartialEq)]
pub struct OccupationHistogram {
    pub grid: GridSpec,
    pub mass: Vec<f64>,
}

impl OccupationHistogram {
    pub fn total(&self) -> f64 {
        self.mass.iter().sum()
    }

    /// `Σ f(center) mass`.
    pub fn integrate(&self, f: &TestFunction) -> f64 {
        self.mass
            .iter()
            .enumerate()
            .filter(|(_, &m)| m > 0.0)
            .map(|(k, &m)| f.eval(self.grid.center_of(k)) * m)
            .sum()
    }
}

/// Occupation measure of the polyline: each step's time increment is split
/// among the cells it crosses in proportion to the clipped length.
pub fn occupation_measure(path: &PlanarPath, grid: &GridSpec) -> Result<OccupationHistogram> {
    grid.validate()?;
    let pts = path.points();
    if let Some(k) = pts.iter().position(|&p| grid.locate(p).is_none()) {
        return Err(Error::PathExitsGrid(k));
    }
    let dt = path.dt();
    let mut mass = vec![0.0; grid.cells()];
    let mut params: Vec<f64> = Vec::new();
    for w in pts.windows(2) {
        deposit_segment(grid, w[0], w[1], dt, &mut params, &mut mass);
    }
    Ok(OccupationHistogram { grid: *grid, mass })
}

/// Digital-differential traversal of one segment: the parameters at which it
/// crosses grid lines cut it into pieces lying in single cells.
fn deposit_segment(
    grid: &GridSpec,
    a: Point,
    b: Point,
    dt: f64,
    params: &mut Vec<f64>,
    mass: &mut [f64],
) {
    if a == b {
        let (i, j) = grid.locate(a).expect("checked inside");
        mass[grid.index(i, j)] += dt;
        return;
    }
    params.clear();
    params.push(0.0);
    let (dx, dy) = (grid.dx(), grid.dy());
    let mut cuts = |p0: f64, p1: f64, origin: f64, step: f64, n: usize| {
        if p0 == p1 {
            return;
        }
        let (lo, hi) = (p0.min(p1), p0.max(p1));
        let first = ((lo - origin) / step).floor() as i64 + 1;
        let last = ((hi - origin) / step).ceil() as i64 - 1;
        for l in first.max(1)..=last.min(n as i64 - 1) {
            let t = (origin + l as f64 * step - p0) / (p1 - p0);
            if t > 0.0 && t < 1.0 {
                params.push(t);
            }
        }
    };
    cuts(a.x, b.x, grid.x0, dx, grid.nx);
    cuts(a.y, b.y, grid.y0, dy, grid.ny);
    params.push(1.0);
    params.sort_unstable_by(f64::total_cmp);
    for w in params.windows(2) {
        let (t0, t1) = (w[0], w[1]);
        if t1 <= t0 {
            continue;
        }
        let tm = 0.5 * (t0 + t1);
        let mid = Point::new(a.x + tm * (b.x - a.x), a.y + tm * (b.y - a.y));
        let (i, j) = grid.locate(mid).expect("segment inside grid");
        mass[grid.index(i, j)] += dt * (t1 - t0);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::sample_bm;
    use crate::winding::{winding_field, ClosedLoop};

    fn circle_field(turns: i32, res: usize) -> WindingField {
        let lp = ClosedLoop::polygon_circle(Point::ORIGIN, 1.0, 64, turns);
        let grid = GridSpec::new(-2.0, -2.0, 2.0, 2.0, res, res).unwrap();
        winding_field(&lp, &grid, grid.default_eps()).unwrap()
    }

    #[test]
    fn circle_threshold_areas() {
        let f = circle_field(3, 512);
        let band = 2.0 * std::f64::consts::PI * f.eps * 2.0 + 0.01;
        let a2 = threshold_area(&ThresholdSet::one_sided(&f, 2)).unwrap();
        assert!((a2.inclusive - std::f64::consts::PI).abs() < band);
        assert!((a2.off_curve - std::f64::consts::PI).abs() < band);
        let a4 = threshold_area(&ThresholdSet::one_sided(&f, 4)).unwrap();
        assert_eq!(a4, Banded::default());
    }

    #[test]
    fn f_measure_constant_functions() {
        let f = circle_field(2, 256);
        let set = ThresholdSet::one_sided(&f, 1);
        let area = threshold_area(&set).unwrap();
        let one = f_measure(&set, &TestFunction::constant(1.0)).unwrap();
        assert_eq!(one, area);
        let c = f_measure(&set, &TestFunction::constant(2.5)).unwrap();
        assert!((c.inclusive - 2.5 * area.inclusive).abs() < 1e-12);
    }

    #[test]
    fn mu_n_values() {
        let f = circle_field(3, 512);
        let one = TestFunction::constant(1.0);
        let mu = mu_n_f(&f, 2, &one).unwrap();
        let expect = TAU * 2.0 * std::f64::consts::PI;
        assert!((mu.inclusive - expect).abs() / expect < 0.02, "{mu:?}");
        assert_eq!(mu_n_f(&f, 4, &one).unwrap().inclusive, 0.0);
        assert!(mu_n_f(&f, 0, &one).is_err());
    }

    #[test]
    fn grid_mismatch_rejected() {
        let a = circle_field(1, 64);
        let b = circle_field(1, 32);
        assert!(matches!(
            threshold_area(&ThresholdSet::pair_absolute(&a, &b, 1)),
            Err(Error::GridMismatch)
        ));
    }

    #[test]
    fn occupation_constant_path() {
        let path = PlanarPath::from_points(vec![Point::ORIGIN; 9]).unwrap();
        let grid = GridSpec::new(-1.0, -1.0, 1.0, 1.0, 4, 4).unwrap();
        let h = occupation_measure(&path, &grid).unwrap();
        let k = grid.index(2, 2);
        assert_eq!(h.mass[k], 1.0);
        assert_eq!(h.total(), 1.0);
    }

    #[test]
    fn occupation_straight_segment_halves() {
        let path = PlanarPath::from_points(vec![Point::ORIGIN, Point::new(1.0, 0.0)]).unwrap();
        let grid = GridSpec::new(-0.5, -1.0, 1.5, 1.0, 2, 1).unwrap();
        let h = occupation_measure(&path, &grid).unwrap();
        assert!((h.mass[0] - 0.5).abs() < 1e-15);
        assert!((h.mass[1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn occupation_conserves_mass_and_rejects_exits() {
        let path = sample_bm(31, 12).unwrap();
        let grid = GridSpec::for_path(&path, 128).unwrap();
        let h = occupation_measure(&path, &grid).unwrap();
        assert!((h.total() - 1.0).abs() < 1e-12);
        assert!(h.mass.iter().all(|&m| m >= 0.0));

        let small = GridSpec::new(-0.01, -0.01, 0.01, 0.01, 4, 4).unwrap();
        assert!(matches!(
            occupation_measure(&path, &small),
            Err(Error::PathExitsGrid(_))
        ));
    }

    #[test]
    fn nu_f_basics() {
        let path = sample_bm(3, 10).unwrap();
        assert_eq!(nu_f(&path, &TestFunction::constant(1.0)), 1.0);

        // f(x, y) = x on the straight path t -> (t, 0): integral 1/2, left
        // rule error 1/(2n).
        let n = 256;
        let pts = (0..=n)
            .map(|k| Point::new(k as f64 / n as f64, 0.0))
            .collect();
        let straight = PlanarPath::from_points(pts).unwrap();
        let lin = TestFunction::new("x", 1.0, 1.0, |z| z.x);
        let v = nu_f(&straight, &lin);
        assert!((v - 0.5).abs() <= 0.5 / n as f64 + 1e-15);
    }

    #[test]
    fn nu_f_matches_histogram_within_modulus() {
        let bump = TestFunction::gaussian_bump(Point::new(0.2, -0.1), 0.5);
        for seed in 0..4 {
            let path = sample_bm(seed, 14).unwrap();
            let grid = GridSpec::for_path(&path, 256).unwrap();
            let h = occupation_measure(&path, &grid).unwrap();
            let diag = grid.dx().hypot(grid.dy());
            // Cell-center snapping plus the left-rule error along each step.
            let max_step = path
                .points()
                .windows(2)
                .map(|w| w[0].dist(w[1]))
                .fold(0.0, f64::max);
            let tol = bump.modulus(diag) + bump.modulus(max_step);
            assert!((h.integrate(&bump) - nu_f(&path, &bump)).abs() <= tol);
        }
    }

    #[test]
    fn modulus_bound() {
        let bump = TestFunction::gaussian_bump(Point::ORIGIN, 0.5);
        assert_eq!(bump.modulus(100.0), 2.0);
        assert!((bump.modulus(0.01) - 0.01 * (-0.5f64).exp() / 0.5).abs() < 1e-15);
        let rough = TestFunction::new("rough", 3.0, f64::INFINITY, |_| 0.0);
        assert_eq!(rough.modulus(1e-9), 6.0);
    }
}
