use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    #[inline]
    pub fn dist(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    #[inline]
    pub fn translate(self, dx: f64, dy: f64) -> Point {
        Point::new(self.x + dx, self.y + dy)
    }
}

/// Axis-aligned bounding box.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BBox {
    pub min: Point,
    pub max: Point,
}

impl BBox {
    pub fn of(points: &[Point]) -> Option<BBox> {
        let first = *points.first()?;
        let mut b = BBox {
            min: first,
            max: first,
        };
        for p in &points[1..] {
            b.min.x = b.min.x.min(p.x);
            b.min.y = b.min.y.min(p.y);
            b.max.x = b.max.x.max(p.x);
            b.max.y = b.max.y.max(p.y);
        }
        Some(b)
    }

    pub fn union(self, other: BBox) -> BBox {
        BBox {
            min: Point::new(self.min.x.min(other.min.x), self.min.y.min(other.min.y)),
            max: Point::new(self.max.x.max(other.max.x), self.max.y.max(other.max.y)),
        }
    }
}

/// Euclidean distance from `z` to the closed segment `[a, b]`.
pub fn point_segment_distance(z: Point, a: Point, b: Point) -> f64 {
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    let len2 = dx * dx + dy * dy;
    if len2 == 0.0 {
        return z.dist(a);
    }
    let t = (((z.x - a.x) * dx + (z.y - a.y) * dy) / len2).clamp(0.0, 1.0);
    z.dist(Point::new(a.x + t * dx, a.y + t * dy))
}

/// Abscissa where the non-horizontal edge `(p, q)` meets the line `Y = y`.
///
/// The endpoints are put in a canonical order first, so `(p, q)` and `(q, p)`
/// give bit-identical results.
#[inline]
pub fn crossing_abscissa(p: Point, q: Point, y: f64) -> f64 {
    let (lo, hi) = if (p.y, p.x) <= (q.y, q.x) {
        (p, q)
    } else {
        (q, p)
    };
    lo.x + (y - lo.y) * (hi.x - lo.x) / (hi.y - lo.y)
}

/// Signed contribution of edge `(p, q)` to the winding number around `z`
/// under the half-open upward/downward rule on the rightward ray from `z`.
#[inline]
pub fn ray_crossing(p: Point, q: Point, z: Point) -> i32 {
    if p.y <= z.y && z.y < q.y {
        (crossing_abscissa(p, q, z.y) > z.x) as i32
    } else if q.y <= z.y && z.y < p.y {
        -((crossing_abscissa(p, q, z.y) > z.x) as i32)
    } else {
        0
    }
}

/// Convex hull by Andrew's monotone chain, counter-clockwise, collinear
/// points dropped.
pub fn convex_hull(points: &[Point]) -> Vec<Point> {
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let cross =
        |o: Point, a: Point, b: Point| (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
    let mut hull: Vec<Point> = Vec::with_capacity(2 * pts.len());
    for &p in pts.iter() {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    let lower_len = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower_len && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0
        {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    hull
}

/// Whether `z` lies in the closed convex polygon `hull` (counter-clockwise).
pub fn in_convex_polygon(hull: &[Point], z: Point) -> bool {
    match hull.len() {
        0 => false,
        1 => hull[0] == z,
        2 => point_segment_distance(z, hull[0], hull[1]) == 0.0,
        n => (0..n).all(|i| {
            let (a, b) = (hull[i], hull[(i + 1) % n]);
            (b.x - a.x) * (z.y - a.y) - (b.y - a.y) * (z.x - a.x) >= 0.0
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn segment_distance_cases() {
        let a = Point::new(0.0, 0.0);
        let b = Point::new(2.0, 0.0);
        assert_eq!(point_segment_distance(Point::new(1.0, 1.0), a, b), 1.0);
        assert_eq!(point_segment_distance(Point::new(3.0, 0.0), a, b), 1.0);
        assert_eq!(point_segment_distance(Point::new(0.0, -2.0), a, a), 2.0);
    }

    #[test]
    fn crossing_is_orientation_independent() {
        let p = Point::new(0.1, -0.3);
        let q = Point::new(0.7, 0.9);
        for y in [-0.2, 0.0, 0.33, 0.8] {
            assert_eq!(
                crossing_abscissa(p, q, y).to_bits(),
                crossing_abscissa(q, p, y).to_bits()
            );
        }
    }

    #[test]
    fn reversed_edge_cancels() {
        let p = Point::new(1.0, -1.0);
        let q = Point::new(1.5, 2.0);
        let z = Point::new(0.0, 0.5);
        assert_eq!(ray_crossing(p, q, z), 1);
        assert_eq!(ray_crossing(q, p, z), -1);
        // Ray through the lower endpoint counts, through the upper does not.
        assert_eq!(ray_crossing(p, q, Point::new(0.0, -1.0)), 1);
        assert_eq!(ray_crossing(p, q, Point::new(0.0, 2.0)), 0);
    }

    #[test]
    fn hull_of_square_with_interior() {
        let pts = [
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(0.5, 0.5),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
            Point::new(0.5, 0.0),
        ];
        let hull = convex_hull(&pts);
        assert_eq!(hull.len(), 4);
        assert!(in_convex_polygon(&hull, Point::new(0.25, 0.75)));
        assert!(!in_convex_polygon(&hull, Point::new(1.25, 0.75)));
    }
}
