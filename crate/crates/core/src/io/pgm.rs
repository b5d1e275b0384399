//! Plain (`P2`) PGM heatmaps of winding fields.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::winding::WindingField;

/// Gray level `clamp(128 + θ * scale, 0, 255)`, top row first (decreasing
/// `y`); on-curve cells are forced to 255 when `mark_curve` is set.
pub fn render_field_pgm(field: &WindingField, scale: u32, mark_curve: bool) -> Result<String> {
    if scale == 0 {
        return Err(Error::Precondition("PGM scale must be >= 1".into()));
    }
    let g = field.grid;
    let mut out = String::with_capacity(g.cells() * 4 + 32);
    let _ = writeln!(out, "P2\n{} {}\n255", g.nx, g.ny);
    for j in (0..g.ny).rev() {
        let mut line = String::with_capacity(g.nx * 4);
        for i in 0..g.nx {
            let k = g.index(i, j);
            let v = if mark_curve && field.on_curve[k] {
                255
            } else {
                (128 + i64::from(field.theta[k]) * i64::from(scale)).clamp(0, 255)
            };
            if i > 0 {
                line.push(' ');
            }
            let _ = write!(line, "{v}");
        }
        out.push_str(&line);
        out.push('\n');
    }
    Ok(out)
}

pub fn export_field_pgm(
    field: &WindingField,
    path: impl AsRef<Path>,
    scale: u32,
    mark_curve: bool,
) -> Result<()> {
    std::fs::write(path, render_field_pgm(field, scale, mark_curve)?)?;
    Ok(())
}

/// Parses a plain PGM into `(width, height, maxval, pixels)`, pixels in file
/// order.
pub fn parse_pgm(text: &str) -> Result<(usize, usize, u32, Vec<u32>)> {
    let mut tokens = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .flat_map(str::split_whitespace);
    let bad = |what: &str| Error::Precondition(format!("malformed PGM: {what}"));
    if tokens.next() != Some("P2") {
        return Err(bad("missing P2 magic"));
    }
    let mut num = |what: &str| -> Result<u64> {
        tokens
            .next()
            .ok_or_else(|| bad(what))?
            .parse::<u64>()
            .map_err(|_| bad(what))
    };
    let w = num("width")? as usize;
    let h = num("height")? as usize;
    let maxval = num("maxval")? as u32;
    let pixels = (0..w * h)
        .map(|_| num("pixel").map(|v| v as u32))
        .collect::<Result<Vec<_>>>()?;
    Ok((w, h, maxval, pixels))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;
    use crate::sampling::sample_bm;
    use crate::winding::{winding_field, ClosedLoop, GridSpec};

    #[test]
    fn zero_field_is_mid_gray() {
        let g = GridSpec::new(0.0, 0.0, 1.0, 1.0, 3, 2).unwrap();
        let f = WindingField {
            grid: g,
            theta: vec![0; 6],
            on_curve: vec![false; 6],
            eps: 0.0,
        };
        assert_eq!(
            render_field_pgm(&f, 8, false).unwrap(),
            "P2\n3 2\n255\n128 128 128\n128 128 128\n"
        );
        assert!(render_field_pgm(&f, 0, false).is_err());
    }

    #[test]
    fn disk_levels() {
        let lp = ClosedLoop::polygon_circle(Point::ORIGIN, 1.0, 64, 1);
        let g = GridSpec::new(-2.0, -2.0, 2.0, 2.0, 32, 32).unwrap();
        let f = winding_field(&lp, &g, g.default_eps()).unwrap();
        let (_, _, _, px) = parse_pgm(&render_field_pgm(&f, 8, false).unwrap()).unwrap();
        assert!(px.iter().all(|&v| v == 128 || v == 136));
        // Top-left pixel is outside, center pixel inside.
        assert_eq!(px[0], 128);
        assert_eq!(px[16 * 32 + 16], 136);
    }

    #[test]
    fn reparse_reproduces_clamped_values() {
        let path = sample_bm(12, 12).unwrap();
        let g = GridSpec::for_path(&path, 64).unwrap();
        let f = winding_field(&ClosedLoop::from_path(&path), &g, g.default_eps()).unwrap();
        for (scale, mark) in [(1, false), (40, false), (3, true)] {
            let (w, h, maxval, px) =
                parse_pgm(&render_field_pgm(&f, scale, mark).unwrap()).unwrap();
            assert_eq!((w, h, maxval), (64, 64, 255));
            for j in 0..h {
                for i in 0..w {
                    let k = g.index(i, g.ny - 1 - j);
                    let expect = if mark && f.on_curve[k] {
                        255
                    } else {
                        (128 + f.theta[k] as i64 * scale as i64).clamp(0, 255) as u32
                    };
                    assert_eq!(px[j * w + i], expect);
                }
            }
        }
    }
}
