//! Winding numbers of closed polylines.
//!
//! Both the single-point query and the grid field count signed crossings of
//! the rightward horizontal ray with the half-open rule: an edge `(p, q)`
//! counts `+1` when `p.y <= y < q.y`, `-1` when `q.y <= y < p.y`, and only if
//! it meets the ray strictly to the right of the query point. The two entry
//! points share the crossing arithmetic and agree exactly.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{crossing_abscissa, point_segment_distance, ray_crossing, BBox, Point};
use crate::sampling::PlanarPath;

/// Closed polyline; the edge from the last vertex back to the first is implicit.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosedLoop {
    vertices: Vec<Point>,
}

impl ClosedLoop {
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::Precondition(
                "a loop needs at least one vertex".into(),
            ));
        }
        Ok(Self { vertices })
    }

    /// `X̄`: the whole path closed by the chord from `X_1` back to `X_0`.
    pub fn from_path(path: &PlanarPath) -> Self {
        Self {
            vertices: path.points().to_vec(),
        }
    }

    /// The `i`-th of `parts` subloops (1-based), closed by its own chord.
    pub fn subloop(path: &PlanarPath, i: usize, parts: usize) -> Result<Self> {
        let view = path.subpath(i, parts)?;
        Ok(Self {
            vertices: view.points().to_vec(),
        })
    }

    /// Regular `sides`-gon of the given radius around `center`, traversed
    /// `turns` times; counter-clockwise when `turns > 0`.
    pub fn polygon_circle(center: Point, radius: f64, sides: usize, turns: i32) -> Self {
        let dir = turns.signum() as f64;
        let total = sides * turns.unsigned_abs() as usize;
        let vertices = (0..total.max(1))
            .map(|k| {
                let a = dir * std::f64::consts::TAU * (k % sides) as f64 / sides as f64;
                Point::new(center.x + radius * a.cos(), center.y + radius * a.sin())
            })
            .collect();
        Self { vertices }
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    /// Edges in order, closing edge last.
    pub fn edges(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |k| (self.vertices[k], self.vertices[(k + 1) % n]))
    }

    pub fn bbox(&self) -> BBox {
        BBox::of(&self.vertices).expect("loop has vertices")
    }

    pub fn reversed(&self) -> Self {
        let mut vertices = self.vertices.clone();
        vertices.reverse();
        Self { vertices }
    }

    pub fn translated(&self, dx: f64, dy: f64) -> Self {
        Self {
            vertices: self.vertices.iter().map(|p| p.translate(dx, dy)).collect(),
        }
    }
}

/// Polygon through `X_0, X_{1/T}, ..., X_1`, closed by `X_1 -> X_0`.
///
/// Off all curves, the winding of the full loop equals the sum of the
/// windings of the `T` subloops plus the winding of this polygon.
pub fn chord_polygon(path: &PlanarPath, parts: usize) -> Result<ClosedLoop> {
    ClosedLoop::new(path.subdivision_points(parts)?)
}

/// Subloops and chord polygon for any `T >= 1`, splitting the polyline at
/// the exact times `i/T`. A split time between two vertices gets a linearly
/// interpolated vertex, which leaves the curve unchanged. For `T` dividing
/// the step count this equals [`ClosedLoop::subloop`] and [`chord_polygon`].
pub fn split_at_times(path: &PlanarPath, parts: usize) -> Result<(Vec<ClosedLoop>, ClosedLoop)> {
    if parts == 0 {
        return Err(Error::NotDivisible {
            parts,
            steps: path.steps(),
        });
    }
    let pts = path.points();
    let steps = path.steps();
    // Split k sits at vertex index k*steps/parts, possibly fractional.
    let split = |k: usize| -> (usize, usize, Point) {
        let num = k * steps;
        let (idx, rem) = (num / parts, num % parts);
        let p = if rem == 0 {
            pts[idx]
        } else {
            let w = rem as f64 / parts as f64;
            let (a, b) = (pts[idx], pts[idx + 1]);
            Point::new(a.x + w * (b.x - a.x), a.y + w * (b.y - a.y))
        };
        (idx, rem, p)
    };
    let splits: Vec<(usize, usize, Point)> = (0..=parts).map(split).collect();
    let mut loops = Vec::with_capacity(parts);
    for w in splits.windows(2) {
        let ((i0, _, p0), (i1, r1, p1)) = (w[0], w[1]);
        let last = if r1 == 0 { i1 } else { i1 + 1 };
        let mut v = vec![p0];
        v.extend_from_slice(&pts[(i0 + 1).min(last)..last]);
        v.push(p1);
        loops.push(ClosedLoop::new(v)?);
    }
    let chord = ClosedLoop::new(splits.iter().map(|s| s.2).collect())?;
    Ok((loops, chord))
}

/// Fields `θ^1, ..., θ^T` of the subloops on a common grid.
pub fn subloop_fields(
    path: &PlanarPath,
    parts: usize,
    grid: &GridSpec,
    eps: f64,
) -> Result<Vec<WindingField>> {
    (1..=parts)
        .map(|i| winding_field(&ClosedLoop::subloop(path, i, parts)?, grid, eps))
        .collect()
}

/// Cells checked and cells violating `θ = Σ_i θ^i + θ_P`, over cells off
/// every involved curve.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AdditivityReport {
    pub checked: usize,
    pub violations: usize,
}

pub fn additivity_check(
    full: &WindingField,
    subs: &[WindingField],
    chord: &WindingField,
) -> Result<AdditivityReport> {
    if subs.iter().chain([chord]).any(|f| !f.same_grid(full)) {
        return Err(Error::GridMismatch);
    }
    let mut rep = AdditivityReport::default();
    for k in 0..full.grid.cells() {
        if full.on_curve[k] || chord.on_curve[k] || subs.iter().any(|s| s.on_curve[k]) {
            continue;
        }
        rep.checked += 1;
        let sum: i32 = subs.iter().map(|s| s.theta[k]).sum::<i32>() + chord.theta[k];
        if sum != full.theta[k] {
            rep.violations += 1;
        }
    }
    Ok(rep)
}

/// Regular grid over a bounding box. Cell `(i, j)` has its center at
/// `(x0 + (i + 1/2) dx, y0 + (j + 1/2) dy)`; row `j` grows with `y`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
    pub nx: usize,
    pub ny: usize,
}

impl GridSpec {
    pub fn new(x0: f64, y0: f64, x1: f64, y1: f64, nx: usize, ny: usize) -> Result<Self> {
        let g = Self {
            x0,
            y0,
            x1,
            y1,
            nx,
            ny,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.x0, self.y0, self.x1, self.y1]
            .iter()
            .all(|v| v.is_finite());
        if !finite || self.x0 >= self.x1 || self.y0 >= self.y1 {
            return Err(Error::InvalidGrid(format!(
                "bounding box [{}, {}] x [{}, {}] is empty or not finite",
                self.x0, self.x1, self.y0, self.y1
            )));
        }
        if self.nx == 0 || self.ny == 0 {
            return Err(Error::InvalidGrid("resolution must be positive".into()));
        }
        Ok(())
    }

    /// `nx x ny` grid over `bbox` widened by `pad` cells on every side.
    /// Degenerate extents are widened to a unit-free minimum first.
    pub fn padded(bbox: BBox, nx: usize, ny: usize, pad: usize) -> Result<Self> {
        if nx <= 2 * pad || ny <= 2 * pad {
            return Err(Error::InvalidGrid(format!(
                "resolution {nx}x{ny} leaves no interior after padding by {pad}"
            )));
        }
        let widen = |lo: f64, hi: f64| {
            let w = hi - lo;
            if w > 0.0 {
                (lo, hi)
            } else {
                let h = 0.5 * lo.abs().max(1.0) * 1e-6;
                (lo - h, hi + h)
            }
        };
        let (bx0, bx1) = widen(bbox.min.x, bbox.max.x);
        let (by0, by1) = widen(bbox.min.y, bbox.max.y);
        let dx = (bx1 - bx0) / (nx - 2 * pad) as f64;
        let dy = (by1 - by0) / (ny - 2 * pad) as f64;
        let p = pad as f64;
        Self::new(
            bx0 - p * dx,
            by0 - p * dy,
            bx1 + p * dx,
            by1 + p * dy,
            nx,
            ny,
        )
    }

    /// Square-resolution grid around a path with the default 2-cell padding.
    pub fn for_path(path: &PlanarPath, resolution: usize) -> Result<Self> {
        Self::padded(path.bbox(), resolution, resolution, 2)
    }

    pub fn dx(&self) -> f64 {
        (self.x1 - self.x0) / self.nx as f64
    }

    pub fn dy(&self) -> f64 {
        (self.y1 - self.y0) / self.ny as f64
    }

    pub fn cell_area(&self) -> f64 {
        self.dx() * self.dy()
    }

    pub fn cells(&self) -> usize {
        self.nx * self.ny
    }

    /// Half the cell diagonal: the default on-curve radius.
    pub fn default_eps(&self) -> f64 {
        0.5 * self.dx().hypot(self.dy())
    }

    #[inline]
    pub fn center_x(&self, i: usize) -> f64 {
        self.x0 + (i as f64 + 0.5) * self.dx()
    }

    #[inline]
    pub fn center_y(&self, j: usize) -> f64 {
        self.y0 + (j as f64 + 0.5) * self.dy()
    }

    #[inline]
    pub fn center(&self, i: usize, j: usize) -> Point {
        Point::new(self.center_x(i), self.center_y(j))
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    /// Center of the cell with flat index `k`.
    #[inline]
    pub fn center_of(&self, k: usize) -> Point {
        self.center(k % self.nx, k / self.nx)
    }

    /// Cell containing `p`, if any. Points on the far boundary belong to the
    /// last cell.
    pub fn locate(&self, p: Point) -> Option<(usize, usize)> {
        if !(p.x >= self.x0 && p.x <= self.x1 && p.y >= self.y0 && p.y <= self.y1) {
            return None;
        }
        let i = (((p.x - self.x0) / self.dx()) as usize).min(self.nx - 1);
        let j = (((p.y - self.y0) / self.dy()) as usize).min(self.ny - 1);
        Some((i, j))
    }

    pub fn contains_bbox(&self, b: BBox) -> bool {
        b.min.x >= self.x0 && b.max.x <= self.x1 && b.min.y >= self.y0 && b.max.y <= self.y1
    }

    /// Rows whose center ordinate lies in `[lo, hi]` (possibly empty).
    fn rows_within(&self, lo: f64, hi: f64) -> std::ops::Range<usize> {
        let dy = self.dy();
        let a = ((lo - self.y0) / dy - 0.5).ceil().max(0.0);
        let b = ((hi - self.y0) / dy - 0.5).floor() + 1.0;
        let a = (a as usize).min(self.ny);
        let b = (b.max(0.0) as usize).min(self.ny);
        a..b.max(a)
    }

    /// Columns whose center abscissa lies in `[lo, hi]` (possibly empty).
    fn cols_within(&self, lo: f64, hi: f64) -> std::ops::Range<usize> {
        let dx = self.dx();
        let a = ((lo - self.x0) / dx - 0.5).ceil().max(0.0);
        let b = ((hi - self.x0) / dx - 0.5).floor() + 1.0;
        let a = (a as usize).min(self.nx);
        let b = (b.max(0.0) as usize).min(self.nx);
        a..b.max(a)
    }
}

/// Result of a single-point winding query.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PointWinding {
    pub value: i32,
    /// The point lies exactly on an edge; `value` is then unreliable.
    pub on_curve: bool,
}

/// Winding number of `lp` around `z` by signed ray crossings.
pub fn winding_number_point(lp: &ClosedLoop, z: Point) -> PointWinding {
    let mut value = 0;
    let mut on_curve = false;
    for (p, q) in lp.edges() {
        value += ray_crossing(p, q, z);
        if !on_curve && point_segment_distance(z, p, q) == 0.0 {
            on_curve = true;
        }
    }
    PointWinding { value, on_curve }
}

/// Winding numbers at every cell center of a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct WindingField {
    pub grid: GridSpec,
    /// Row-major, `theta[j * nx + i]`.
    pub theta: Vec<i32>,
    /// Cells whose center lies within `eps` of some edge.
    pub on_curve: Vec<bool>,
    pub eps: f64,
}

impl WindingField {
    pub fn at(&self, i: usize, j: usize) -> i32 {
        self.theta[self.grid.index(i, j)]
    }

    pub fn max_abs(&self) -> i32 {
        self.theta.iter().map(|t| t.abs()).max().unwrap_or(0)
    }

    pub fn same_grid(&self, other: &WindingField) -> bool {
        self.grid == other.grid
    }
}

/// Scanline evaluation of the winding number at every cell center.
///
/// Each edge is registered with the rows whose center ordinate it crosses
/// under the half-open rule; each row then sorts its crossings by abscissa
/// and fills the row right to left with running sums of signs.
pub fn winding_field(lp: &ClosedLoop, grid: &GridSpec, eps: f64) -> Result<WindingField> {
    grid.validate()?;
    if eps.is_nan() || eps < 0.0 {
        return Err(Error::Precondition(format!(
            "on-curve radius must be >= 0, got {eps}"
        )));
    }
    let rows = row_crossings(lp, grid);
    let nx = grid.nx;
    let mut theta = vec![0i32; grid.cells()];
    theta
        .par_chunks_mut(nx)
        .zip(rows.into_par_iter())
        .for_each(|(row, mut cross)| fill_row(row, &mut cross, grid));
    let on_curve = on_curve_mask(lp, grid, eps);
    Ok(WindingField {
        grid: *grid,
        theta,
        on_curve,
        eps,
    })
}

fn row_crossings(lp: &ClosedLoop, grid: &GridSpec) -> Vec<Vec<(f64, i32)>> {
    let mut rows: Vec<Vec<(f64, i32)>> = vec![Vec::new(); grid.ny];
    for (p, q) in lp.edges() {
        if p.y == q.y {
            continue;
        }
        let (lo, hi, sign) = if p.y < q.y { (p, q, 1) } else { (q, p, -1) };
        // Candidate rows, widened by one and then filtered with the exact
        // predicate so rounding in the index arithmetic cannot matter.
        let cand = grid.rows_within(lo.y, hi.y);
        let start = cand.start.saturating_sub(1);
        let end = (cand.end + 1).min(grid.ny);
        for (j, row) in rows.iter_mut().enumerate().take(end).skip(start) {
            let y = grid.center_y(j);
            if lo.y <= y && y < hi.y {
                row.push((crossing_abscissa(p, q, y), sign));
            }
        }
    }
    rows
}

fn fill_row(row: &mut [i32], cross: &mut [(f64, i32)], grid: &GridSpec) {
    if cross.is_empty() {
        return;
    }
    cross.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut k = cross.len();
    let mut acc = 0i32;
    for i in (0..row.len()).rev() {
        let x = grid.center_x(i);
        while k > 0 && cross[k - 1].0 > x {
            k -= 1;
            acc += cross[k].1;
        }
        row[i] = acc;
    }
}

/// Marks cells whose center is within `eps` of some edge.
pub fn on_curve_mask(lp: &ClosedLoop, grid: &GridSpec, eps: f64) -> Vec<bool> {
    let mut mask = vec![false; grid.cells()];
    for (p, q) in lp.edges() {
        let rows = grid.rows_within(p.y.min(q.y) - eps, p.y.max(q.y) + eps);
        for j in rows {
            let y = grid.center_y(j);
            let Some((xa, xb)) = clip_to_band(p, q, y - eps, y + eps) else {
                continue;
            };
            for i in grid.cols_within(xa - eps, xb + eps) {
                let k = grid.index(i, j);
                if !mask[k] && point_segment_distance(Point::new(grid.center_x(i), y), p, q) <= eps
                {
                    mask[k] = true;
                }
            }
        }
    }
    mask
}

/// Abscissa range of the part of segment `[p, q]` inside `lo <= y <= hi`.
fn clip_to_band(p: Point, q: Point, lo: f64, hi: f64) -> Option<(f64, f64)> {
    if p.y == q.y {
        return (p.y >= lo && p.y <= hi).then(|| (p.x.min(q.x), p.x.max(q.x)));
    }
    let t_at = |y: f64| (y - p.y) / (q.y - p.y);
    let (ta, tb) = (t_at(lo), t_at(hi));
    let t0 = ta.min(tb).max(0.0);
    let t1 = ta.max(tb).min(1.0);
    if t0 > t1 {
        return None;
    }
    let x0 = p.x + t0 * (q.x - p.x);
    let x1 = p.x + t1 * (q.x - p.x);
    Some((x0.min(x1), x0.max(x1)))
}
