use serde::Serialize;

use super::PartialAutomorphism;
use crate::complex::CubeComplex;
use crate::error::{Error, Result};
use crate::separation::thinness_constant;

/// Hyperplanes with `a, b` on one side and `c, d` on the other.
fn separating_pairs(cx: &CubeComplex, [a, b]: [u32; 2], [c, d]: [u32; 2]) -> Vec<u32> {
    let (la, lb, lc, ld) = (cx.label(a), cx.label(b), cx.label(c), cx.label(d));
    (0..cx.hyperplane_count())
        .filter(|&j| la[j] == lb[j] && lc[j] == ld[j] && la[j] != lc[j])
        .map(|j| j as u32)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PointDisplacement {
    pub z: u32,
    pub displacement: u32,
    /// Separating `{gx, z}` from `{gz, y}`.
    pub h1: usize,
    /// Separating `{x, gz}` from `{z, gy}`.
    pub h2: usize,
    /// Separating `{x, gx}` from `{z, gz}`.
    pub h3: usize,
    pub join: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DisplacementReport {
    pub x: u32,
    pub y: u32,
    pub path: Vec<u32>,
    /// `max(d(x, gx), d(y, gy))`.
    pub d: u32,
    /// Thinness constant of the path.
    pub c: u32,
    pub points: Vec<PointDisplacement>,
    pub max_displacement: u32,
    /// `C + 6d`.
    pub literal_bound: u32,
    /// `2C + 6d`, which follows from the join and counting steps.
    pub bound: u32,
    pub literal_holds: bool,
    /// Every step of the argument held at every point: `H1`, `H2` form a
    /// join, their sizes differ by at most `4d`, `d(z, gz) ≤ |H1| + |H2| + 2d`
    /// and the displacement is within `bound`.
    pub holds: bool,
}

/// Displacement of points on a geodesic `x → y` by `g` against the
/// displacement of its endpoints. Without `path` the smallest-id greedy
/// geodesic is used.
pub fn displacement_check(
    cx: &CubeComplex,
    g: &PartialAutomorphism,
    x: u32,
    y: u32,
    path: Option<&[u32]>,
) -> Result<DisplacementReport> {
    let path = match path {
        Some(p) => {
            cx.check_geodesic(p)?;
            if p[0] != x || *p.last().unwrap() != y {
                return Err(Error::NotGeodesic(format!("path does not run from {x} to {y}")));
            }
            p.to_vec()
        }
        None => cx.geodesic(x, y)?,
    };
    let c = thinness_constant(cx, &path)?.constant;
    displacement_on_path(cx, g, path, c)
}

/// As [`displacement_check`] on a path already checked to be a geodesic,
/// with thinness constant `c`.
pub fn displacement_on_path(cx: &CubeComplex, g: &PartialAutomorphism, path: Vec<u32>, c: u32) -> Result<DisplacementReport> {
    let (x, y) = (path[0], *path.last().unwrap());
    let image = |v: u32| {
        g.apply(v)
            .ok_or_else(|| Error::InvalidMap(format!("vertex {v} of the geodesic is outside the domain")))
    };
    let (gx, gy) = (image(x)?, image(y)?);
    let d = cx.distance(x, gx).max(cx.distance(y, gy));
    let mut points = Vec::with_capacity(path.len());
    let mut holds = true;
    for &z in &path {
        let gz = image(z)?;
        let h1 = separating_pairs(cx, [gx, z], [gz, y]);
        let h2 = separating_pairs(cx, [x, gz], [z, gy]);
        let h3 = separating_pairs(cx, [x, gx], [z, gz]);
        let join = h1.iter().all(|&a| h2.iter().all(|&b| cx.transverse(a, b)));
        let displacement = cx.distance(z, gz);
        let (n1, n2) = (h1.len() as u32, h2.len() as u32);
        holds &= join
            && n1.abs_diff(n2) <= 4 * d
            && n1.min(n2) <= c
            && displacement <= n1 + n2 + 2 * d
            && displacement <= 2 * c + 6 * d;
        points.push(PointDisplacement {
            z,
            displacement,
            h1: h1.len(),
            h2: h2.len(),
            h3: h3.len(),
            join,
        });
    }
    let max_displacement = points.iter().map(|p| p.displacement).max().unwrap_or(0);
    Ok(DisplacementReport {
        x,
        y,
        path,
        d,
        c,
        max_displacement,
        literal_bound: c + 6 * d,
        bound: 2 * c + 6 * d,
        literal_holds: max_displacement <= c + 6 * d,
        holds,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::super::Automorphism;
    use super::*;
    use crate::generate;

    #[test]
    fn cube_rotation_exceeds_literal_bound() {
        let cx = CubeComplex::new(generate::cube(3)).unwrap();
        // cyclic shift of coordinates 0 -> 1 -> 2 -> 0
        let rot: Vec<u32> = (0..8u32).map(|v| ((v << 1) | (v >> 2)) & 7).collect();
        let g = PartialAutomorphism::from_total(&Automorphism::new(&cx, rot).unwrap());
        let r = displacement_check(&cx, &g, 0, 7, Some(&[0, 1, 3, 7])).unwrap();
        assert_eq!((r.d, r.c, r.max_displacement), (0, 1, 2));
        assert!(!r.literal_holds);
        assert!(r.holds);
    }

    #[test]
    fn translation_on_a_path() {
        let cx = CubeComplex::new(generate::path(9)).unwrap();
        let map = (0..9).map(|v| (v < 8).then_some(v + 1)).collect();
        let g = PartialAutomorphism::new(&cx, map, Default::default()).unwrap();
        let r = displacement_check(&cx, &g, 0, 7, None).unwrap();
        assert_eq!((r.d, r.c, r.max_displacement), (1, 0, 1));
        assert!(r.holds && r.literal_holds);
        assert!(displacement_check(&cx, &g, 0, 8, None).is_err());
    }
}
