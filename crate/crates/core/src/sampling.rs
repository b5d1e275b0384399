//! Brownian paths on the dyadic grid of `[0, 1]`.
//!
//! Paths are built by the Lévy midpoint construction: `X_1` is drawn first,
//! then every refinement level fills interval midpoints with the Brownian
//! bridge law. Draws are consumed level by level, so a path at `L` levels is
//! the even-index restriction of the path at `L + 1` levels for the same seed.

use crate::error::{Error, Result};
use crate::geometry::{BBox, Point};
use crate::rng::{BoxMuller, GaussianSource};

pub const MAX_LEVELS: u32 = 26;

/// Polyline sampled at the times `k 2^-L`, `k = 0..=2^L`, starting at the origin.
#[derive(Clone, Debug, PartialEq)]
pub struct PlanarPath {
    levels: u32,
    points: Vec<Point>,
}

impl PlanarPath {
    /// Wraps explicit vertices. Requires `2^L + 1` points starting at the origin.
    pub fn from_points(points: Vec<Point>) -> Result<Self> {
        let steps = points.len().saturating_sub(1);
        if steps == 0 || !steps.is_power_of_two() {
            return Err(Error::Precondition(format!(
                "a dyadic path needs 2^L + 1 vertices, got {}",
                points.len()
            )));
        }
        if points[0] != Point::ORIGIN {
            return Err(Error::Precondition("path must start at the origin".into()));
        }
        let levels = steps.trailing_zeros();
        if levels > MAX_LEVELS {
            return Err(Error::LevelsOutOfRange {
                got: levels,
                max: MAX_LEVELS,
            });
        }
        Ok(Self { levels, points })
    }

    pub fn levels(&self) -> u32 {
        self.levels
    }

    pub fn steps(&self) -> usize {
        self.points.len() - 1
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn time(&self, k: usize) -> f64 {
        k as f64 / self.steps() as f64
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.points.len()).map(|k| self.time(k))
    }

    /// Time increment between consecutive vertices.
    pub fn dt(&self) -> f64 {
        1.0 / self.steps() as f64
    }

    pub fn bbox(&self) -> BBox {
        BBox::of(&self.points).expect("path has vertices")
    }

    pub fn endpoint(&self) -> Point {
        *self.points.last().expect("path has vertices")
    }

    /// Restriction to the `i`-th of `parts` equal time intervals (1-based).
    pub fn subpath(&self, i: usize, parts: usize) -> Result<SubpathView<'_>> {
        let steps = self.steps();
        if parts == 0 || !steps.is_multiple_of(parts) {
            return Err(Error::NotDivisible { parts, steps });
        }
        if i == 0 || i > parts {
            return Err(Error::SubpathIndex { index: i, parts });
        }
        let len = steps / parts;
        Ok(SubpathView {
            parent: self,
            index: i,
            parts,
            start: (i - 1) * len,
            end: i * len,
        })
    }

    /// Vertices at the subdivision times `0, 1/T, ..., 1`.
    pub fn subdivision_points(&self, parts: usize) -> Result<Vec<Point>> {
        let steps = self.steps();
        if parts == 0 || !steps.is_multiple_of(parts) {
            return Err(Error::NotDivisible { parts, steps });
        }
        let len = steps / parts;
        Ok((0..=parts).map(|i| self.points[i * len]).collect())
    }
}

/// Vertices of a path with times in `[(i-1)/T, i/T]`.
#[derive(Clone, Copy, Debug)]
pub struct SubpathView<'a> {
    parent: &'a PlanarPath,
    index: usize,
    parts: usize,
    start: usize,
    end: usize,
}

impl<'a> SubpathView<'a> {
    pub fn parent(&self) -> &'a PlanarPath {
        self.parent
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn parts(&self) -> usize {
        self.parts
    }

    /// Vertex index range in the parent, endpoints included.
    pub fn vertex_range(&self) -> std::ops::RangeInclusive<usize> {
        self.start..=self.end
    }

    pub fn points(&self) -> &'a [Point] {
        &self.parent.points[self.start..=self.end]
    }

    pub fn start_time(&self) -> f64 {
        self.parent.time(self.start)
    }

    pub fn end_time(&self) -> f64 {
        self.parent.time(self.end)
    }
}

/// Samples a planar Brownian path with `2^levels` steps.
pub fn sample_bm(seed: u64, levels: u32) -> Result<PlanarPath> {
    sample_bm_with(&mut BoxMuller::from_seed(seed), levels)
}

/// Lévy construction driven by an arbitrary Gaussian source.
pub fn sample_bm_with<G: GaussianSource>(gauss: &mut G, levels: u32) -> Result<PlanarPath> {
    if levels > MAX_LEVELS {
        return Err(Error::LevelsOutOfRange {
            got: levels,
            max: MAX_LEVELS,
        });
    }
    let n = 1usize << levels;
    let mut points = vec![Point::ORIGIN; n + 1];
    points[n] = Point::new(gauss.next_gaussian(), gauss.next_gaussian());

    // Refinement level k creates the vertices at odd multiples of 2^-k; the
    // bridge midpoint over an interval of length 2^-(k-1) has variance
    // 2^-(k+1) per coordinate.
    for k in 1..=levels {
        let sd = (0.5f64).powi(k as i32 + 1).sqrt();
        let half = n >> k;
        let mut mid = half;
        while mid < n {
            let (a, b) = (points[mid - half], points[mid + half]);
            let gx = gauss.next_gaussian();
            let gy = gauss.next_gaussian();
            points[mid] = Point::new(0.5 * (a.x + b.x) + sd * gx, 0.5 * (a.y + b.y) + sd * gy);
            mid += 2 * half;
        }
    }
    Ok(PlanarPath { levels, points })
}

/// Dyadic-scale estimate of the α-Hölder norm.
///
/// Takes the supremum of `|X_{t+h} - X_t| / h^α` over the spans `h = 2^-k`,
/// `k = 0..=L`, and every grid offset `t`. This is a lower bound of the
/// supremum over all pairs of grid times.
pub fn holder_norm(path: &PlanarPath, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 0.5) {
        return Err(Error::HolderExponent(alpha));
    }
    let pts = path.points();
    let n = path.steps();
    let mut best = 0.0f64;
    let mut span = 1usize;
    while span <= n {
        let h = span as f64 / n as f64;
        let scale = h.powf(-alpha);
        let local = pts
            .iter()
            .zip(&pts[span..])
            .map(|(a, b)| a.dist(*b))
            .fold(0.0f64, f64::max);
        best = best.max(local * scale);
        span <<= 1;
    }
    Ok(best)
}
