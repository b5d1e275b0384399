//! Reference implementations that share no code with the library.
#![allow(dead_code)]

use bmwind::rng::RngStream;
use bmwind::{PlanarPath, Point};

fn quadrant(dx: f64, dy: f64) -> i32 {
    if dx > 0.0 && dy >= 0.0 {
        0
    } else if dx <= 0.0 && dy > 0.0 {
        1
    } else if dx < 0.0 && dy <= 0.0 {
        2
    } else {
        3
    }
}

/// Winding number as a sum of signed quarter turns of `v - z` around the
/// closed vertex sequence. `None` when `z` lies on an edge.
pub fn quadrant_winding(vertices: &[Point], z: Point) -> Option<i32> {
    let n = vertices.len();
    let mut quarters = 0i32;
    for k in 0..n {
        let (a, b) = (vertices[k], vertices[(k + 1) % n]);
        let (ax, ay, bx, by) = (a.x - z.x, a.y - z.y, b.x - z.x, b.y - z.y);
        if ax == 0.0 && ay == 0.0 {
            return None;
        }
        let d = (quadrant(bx, by) - quadrant(ax, ay)).rem_euclid(4);
        let cross = ax * by - ay * bx;
        quarters += match d {
            0 => 0,
            1 => 1,
            3 => -1,
            _ if cross > 0.0 => 2,
            _ if cross < 0.0 => -2,
            _ => return None,
        };
    }
    Some(quarters / 4)
}

/// `Σ atan2(cross, dot) / 2π` over the edges; real-valued.
pub fn angle_sum(vertices: &[Point], z: Point) -> f64 {
    let n = vertices.len();
    let mut total = 0.0;
    for k in 0..n {
        let (a, b) = (vertices[k], vertices[(k + 1) % n]);
        let (ax, ay, bx, by) = (a.x - z.x, a.y - z.y, b.x - z.x, b.y - z.y);
        total += (ax * by - ay * bx).atan2(ax * bx + ay * by);
    }
    total / std::f64::consts::TAU
}

pub fn distance_to_loop(vertices: &[Point], z: Point) -> f64 {
    let n = vertices.len();
    (0..n)
        .map(|k| {
            let (a, b) = (vertices[k], vertices[(k + 1) % n]);
            let (ex, ey) = (b.x - a.x, b.y - a.y);
            let len2 = ex * ex + ey * ey;
            let t = if len2 == 0.0 {
                0.0
            } else {
                (((z.x - a.x) * ex + (z.y - a.y) * ey) / len2).clamp(0.0, 1.0)
            };
            ((a.x + t * ex - z.x).powi(2) + (a.y + t * ey - z.y).powi(2)).sqrt()
        })
        .fold(f64::INFINITY, f64::min)
}

/// `n` points uniform in the unit square.
pub fn random_polygon(seed: u64, n: usize) -> Vec<Point> {
    let mut rng = RngStream::new(seed, 0);
    (0..n)
        .map(|_| Point::new(rng.next_f64(), rng.next_f64()))
        .collect()
}

/// Circle of the given radius centered at `(-radius, 0)`, traversed `turns`
/// times counter-clockwise with `2^levels` steps from the origin.
pub fn dyadic_circle(radius: f64, turns: u32, levels: u32) -> PlanarPath {
    let steps = 1usize << levels;
    let pts = (0..=steps)
        .map(|k| {
            let a = std::f64::consts::TAU * turns as f64 * k as f64 / steps as f64;
            if k == 0 || k == steps {
                Point::new(0.0, 0.0)
            } else {
                Point::new(radius * (a.cos() - 1.0), radius * a.sin())
            }
        })
        .collect();
    PlanarPath::from_points(pts).unwrap()
}

/// Two tangent circles at the origin, `a` turns of the left one then `b` of
/// the right one.
pub fn dyadic_figure_eight(a: u32, b: u32, levels: u32) -> PlanarPath {
    let steps = 1usize << levels;
    let total = (a + b) as f64;
    let pts = (0..=steps)
        .map(|k| {
            let s = total * k as f64 / steps as f64;
            if k == 0 || k == steps {
                return Point::new(0.0, 0.0);
            }
            if s <= a as f64 {
                let t = std::f64::consts::TAU * s;
                Point::new(t.cos() - 1.0, t.sin())
            } else {
                let t = std::f64::consts::TAU * (s - a as f64);
                Point::new(1.0 - t.cos(), t.sin())
            }
        })
        .collect();
    PlanarPath::from_points(pts).unwrap()
}
