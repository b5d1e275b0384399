use crate::error::{Error, Result};
use crate::measures::{threshold_area, Banded, ThresholdSet};
use crate::sampling::PlanarPath;
use crate::winding::{winding_field, ClosedLoop, GridSpec, WindingField};

/// `N^2 |{θ_X >= N, θ_X' >= N}|` on two fields sharing a grid.
pub fn conjecture_statistic_fields(a: &WindingField, b: &WindingField, n: i32) -> Result<Banded> {
    if n < 1 {
        return Err(Error::Precondition(format!("N must be >= 1, got {n}")));
    }
    let nf = n as f64;
    Ok(threshold_area(&ThresholdSet::joint(a, b, n))?.scale(nf * nf))
}

pub fn conjecture_statistic(
    first: &PlanarPath,
    second: &PlanarPath,
    n: i32,
    grid: &GridSpec,
) -> Result<Banded> {
    let eps = grid.default_eps();
    let a = winding_field(&ClosedLoop::from_path(first), grid, eps)?;
    let b = winding_field(&ClosedLoop::from_path(second), grid, eps)?;
    conjecture_statistic_fields(&a, &b, n)
}

/// Grid covering both paths with the default padding.
pub fn joint_grid(first: &PlanarPath, second: &PlanarPath, resolution: usize) -> Result<GridSpec> {
    GridSpec::padded(first.bbox().union(second.bbox()), resolution, resolution, 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;
    use crate::sampling::sample_bm;
    use crate::verify::werner_statistic;

    #[test]
    fn identical_paths_reduce_to_single_area() {
        let p = sample_bm(14, 12).unwrap();
        let grid = GridSpec::for_path(&p, 256).unwrap();
        let field = winding_field(&ClosedLoop::from_path(&p), &grid, grid.default_eps()).unwrap();
        for n in 1..5 {
            let c = conjecture_statistic(&p, &p, n, &grid).unwrap();
            let w = werner_statistic(&field, n).unwrap();
            let area = w.inclusive / (std::f64::consts::TAU * n as f64);
            assert!((c.inclusive - (n * n) as f64 * area).abs() < 1e-12);
        }
    }

    #[test]
    fn far_apart_paths_give_zero() {
        let a = sample_bm(1, 10).unwrap();
        let shifted: Vec<Point> = sample_bm(2, 10)
            .unwrap()
            .points()
            .iter()
            .map(|q| q.translate(100.0, 0.0))
            .collect();
        let grid = GridSpec::padded(
            a.bbox().union(crate::geometry::BBox::of(&shifted).unwrap()),
            512,
            512,
            2,
        )
        .unwrap();
        let fa = winding_field(&ClosedLoop::from_path(&a), &grid, grid.default_eps()).unwrap();
        let fb = winding_field(
            &ClosedLoop::new(shifted).unwrap(),
            &grid,
            grid.default_eps(),
        )
        .unwrap();
        for n in 1..4 {
            assert_eq!(
                conjecture_statistic_fields(&fa, &fb, n).unwrap(),
                Banded::default()
            );
        }
    }

    #[test]
    fn mismatched_grids() {
        let a = sample_bm(1, 8).unwrap();
        let g1 = GridSpec::for_path(&a, 32).unwrap();
        let g2 = GridSpec::for_path(&a, 64).unwrap();
        let fa = winding_field(&ClosedLoop::from_path(&a), &g1, 0.0).unwrap();
        let fb = winding_field(&ClosedLoop::from_path(&a), &g2, 0.0).unwrap();
        assert!(matches!(
            conjecture_statistic_fields(&fa, &fb, 1),
            Err(Error::GridMismatch)
        ));
    }
}
