//! Convex vertex sets, hulls, and gate projections.
//!
//! In a median graph the convex sets are exactly the intersections of
//! halfspaces, so the hull of `S` is the intersection of every halfspace
//! containing `S`. A [`ConvexSet`] can only be built through constructors
//! that certify convexity, and it carries the halfspaces that define it.

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::complex::{CubeComplex, Side};
use crate::error::{Error, Result};
use crate::util::bits_to_vec;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConvexSet {
    vertices: Vec<u32>,
    defining_halfspaces: Vec<(u32, Side)>,
    #[serde(skip)]
    bits: FixedBitSet,
}

impl ConvexSet {
    /// Certifies that `vs` is convex; rejects it with a witness otherwise.
    pub fn new(cx: &CubeComplex, vs: &[u32]) -> Result<Self> {
        let hull = convex_hull(cx, vs)?;
        let set = cx.vertex_set(vs)?;
        if hull.bits != set {
            let [x, y, u] = nonconvex_witness(cx, &set).expect("hull differs, so a witness exists");
            return Err(Error::NotConvex { x, y, u });
        }
        Ok(hull)
    }

    pub fn halfspace(cx: &CubeComplex, j: u32, s: Side) -> Result<Self> {
        cx.check_hyperplane(j)?;
        let bits = cx.halfspace(j, s).clone();
        Ok(ConvexSet {
            vertices: bits_to_vec(&bits),
            defining_halfspaces: vec![(j, s)],
            bits,
        })
    }

    /// The carrier of `j`, certified through its hull.
    pub fn carrier(cx: &CubeComplex, j: u32) -> Result<Self> {
        cx.check_hyperplane(j)?;
        let c = convex_hull(cx, &bits_to_vec(cx.carrier(j)))?;
        if &c.bits != cx.carrier(j) {
            return Err(Error::LawViolation(format!("carrier of hyperplane {j} is not convex")));
        }
        Ok(c)
    }

    pub fn vertices(&self) -> &[u32] {
        &self.vertices
    }

    pub fn defining_halfspaces(&self) -> &[(u32, Side)] {
        &self.defining_halfspaces
    }

    pub fn bits(&self) -> &FixedBitSet {
        &self.bits
    }

    pub fn contains(&self, v: u32) -> bool {
        self.bits.contains(v as usize)
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConvexityReport {
    pub convex: bool,
    /// `(x, y, u)`: `x, y ∈ S`, `u` on a geodesic between them, `u ∉ S`.
    pub witness: Option<[u32; 3]>,
}

pub fn is_convex(cx: &CubeComplex, vs: &[u32]) -> Result<ConvexityReport> {
    if vs.is_empty() {
        return Err(Error::EmptySet);
    }
    let set = cx.vertex_set(vs)?;
    let witness = if convex_hull(cx, vs)?.bits == set {
        None
    } else {
        nonconvex_witness(cx, &set)
    };
    Ok(ConvexityReport {
        convex: witness.is_none(),
        witness,
    })
}

fn nonconvex_witness(cx: &CubeComplex, set: &FixedBitSet) -> Option<[u32; 3]> {
    let members = bits_to_vec(set);
    for (i, &x) in members.iter().enumerate() {
        for &y in &members[i + 1..] {
            let dxy = cx.distance(x, y);
            if let Some(u) = (0..cx.vertex_count() as u32)
                .find(|&u| !set[u as usize] && cx.distance(x, u) + cx.distance(u, y) == dxy)
            {
                return Some([x, y, u]);
            }
        }
    }
    None
}

/// Intersection of all halfspaces containing `vs`.
pub fn convex_hull(cx: &CubeComplex, vs: &[u32]) -> Result<ConvexSet> {
    if vs.is_empty() {
        return Err(Error::EmptySet);
    }
    let set = cx.vertex_set(vs)?;
    let n = cx.vertex_count();
    let mut bits = FixedBitSet::with_capacity(n);
    bits.insert_range(..);
    let mut defining = Vec::new();
    for j in 0..cx.hyperplane_count() as u32 {
        for s in [Side::A, Side::B] {
            if set.is_subset(cx.halfspace(j, s)) {
                defining.push((j, s));
                bits.intersect_with(cx.halfspace(j, s));
            }
        }
    }
    Ok(ConvexSet {
        vertices: bits_to_vec(&bits),
        defining_halfspaces: defining,
        bits,
    })
}

/// The gate of `x` in `c`: the unique nearest vertex. Found by walking
/// inside `c` from its first vertex, replacing the current vertex `g` by
/// `median(x, g, g')` for neighbours `g'` in `c`; then the gate law
/// `d(x, y) = d(x, g) + d(g, y)` is checked for every `y ∈ c`.
pub fn gate(cx: &CubeComplex, x: u32, c: &ConvexSet) -> Result<u32> {
    cx.check_vertex(x)?;
    let g = descend(cx, x, c);
    let dg = cx.distance(x, g);
    if let Some(&y) = c
        .vertices
        .iter()
        .find(|&&y| cx.distance(x, y) != dg + cx.distance(g, y))
    {
        return Err(Error::LawViolation(format!(
            "gate law fails: d({x},{y}) != d({x},{g}) + d({g},{y})"
        )));
    }
    Ok(g)
}

fn descend(cx: &CubeComplex, x: u32, c: &ConvexSet) -> u32 {
    let mut g = c.vertices[0];
    'outer: loop {
        for &w in cx.graph().neighbors(g) {
            if c.contains(w) {
                let m = cx.median_unchecked(x, g, w);
                if m != g {
                    g = m;
                    continue 'outer;
                }
            }
        }
        return g;
    }
}

/// The gate computed from labels: keep the coordinates of `x` on hyperplanes
/// crossing `c` and take `c`'s side on the others.
pub fn gate_by_labels(cx: &CubeComplex, x: u32, c: &ConvexSet) -> u32 {
    let mut l = cx.label(x).clone();
    for &(j, s) in &c.defining_halfspaces {
        l.set(j as usize, s == Side::B);
    }
    cx.vertex_with_label(&l).expect("gate label exists")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SeparatorLaw {
    pub x: u32,
    pub y: u32,
    pub gate_x: u32,
    pub gate_y: u32,
    /// Hyperplanes separating the two gates.
    pub gate_separators: Vec<u32>,
    /// Separators of `x, y` that cross the convex set.
    pub expected: Vec<u32>,
    pub holds: bool,
}

/// Compares the hyperplanes separating the gates of `x`, `y` with those
/// separating `x`, `y` and crossing `c`.
pub fn separator_law(cx: &CubeComplex, x: u32, y: u32, c: &ConvexSet) -> Result<SeparatorLaw> {
    let gate_x = gate(cx, x, c)?;
    let gate_y = gate(cx, y, c)?;
    let crossing = cx.crossing(&c.bits);
    let gate_separators = cx.separators(gate_x, gate_y);
    let expected: Vec<u32> = cx
        .separators(x, y)
        .into_iter()
        .filter(|j| crossing.binary_search(j).is_ok())
        .collect();
    Ok(SeparatorLaw {
        x,
        y,
        gate_x,
        gate_y,
        holds: gate_separators == expected,
        gate_separators,
        expected,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Projection {
    /// Distinct gates, sorted.
    pub image: Vec<u32>,
    /// `(x, gate(x))` for every `x` of the source set.
    pub gates: Vec<(u32, u32)>,
    pub diameter: u32,
}

/// Projects `s` onto `c` and checks the separator law for every pair of `s`.
pub fn project_set(cx: &CubeComplex, s: &[u32], c: &ConvexSet) -> Result<Projection> {
    if s.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut src = s.to_vec();
    src.sort_unstable();
    src.dedup();
    let gates: Vec<(u32, u32)> = src
        .iter()
        .map(|&x| Ok((x, gate(cx, x, c)?)))
        .collect::<Result<_>>()?;
    let mut cross_bits = FixedBitSet::with_capacity(cx.hyperplane_count());
    for j in cx.crossing(&c.bits) {
        cross_bits.insert(j as usize);
    }
    for (i, &(x, gx)) in gates.iter().enumerate() {
        for &(y, gy) in &gates[i + 1..] {
            let mut expected = cx.label(x).clone();
            expected.symmetric_difference_with(cx.label(y));
            expected.intersect_with(&cross_bits);
            let mut actual = cx.label(gx).clone();
            actual.symmetric_difference_with(cx.label(gy));
            if actual != expected {
                return Err(Error::LawViolation(format!(
                    "separators of gates {gx}, {gy} differ from crossing separators of {x}, {y}"
                )));
            }
        }
    }
    let mut image: Vec<u32> = gates.iter().map(|&(_, g)| g).collect();
    image.sort_unstable();
    image.dedup();
    let diameter = diameter(cx, &image);
    Ok(Projection {
        image,
        gates,
        diameter,
    })
}

pub fn diameter(cx: &CubeComplex, vs: &[u32]) -> u32 {
    vs.iter()
        .enumerate()
        .flat_map(|(i, &x)| vs[i + 1..].iter().map(move |&y| cx.distance(x, y)))
        .max()
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;
    use crate::oracle;

    fn grid3() -> CubeComplex {
        CubeComplex::new(generate::grid(3, 3)).unwrap()
    }

    #[test]
    fn convexity_examples() {
        let q3 = CubeComplex::new(generate::cube(3)).unwrap();
        let half = bits_to_vec(q3.halfspace(0, Side::A));
        assert!(is_convex(&q3, &half).unwrap().convex);
        let r = is_convex(&q3, &[0, 7]).unwrap();
        assert!(!r.convex);
        let [x, y, u] = r.witness.unwrap();
        assert_eq!((x, y), (0, 7));
        assert!(![0, 7].contains(&u));
        let g = grid3();
        for j in 0..4 {
            let c = bits_to_vec(g.carrier(j));
            assert!(is_convex(&g, &c).unwrap().convex);
            assert!(oracle::is_convex(&oracle::all_pairs(g.graph()), &c));
        }
        assert!(matches!(is_convex(&g, &[]), Err(Error::EmptySet)));
        assert!(matches!(ConvexSet::new(&q3, &[0, 7]), Err(Error::NotConvex { .. })));
    }

    #[test]
    fn hull_examples() {
        let q3 = CubeComplex::new(generate::cube(3)).unwrap();
        assert_eq!(convex_hull(&q3, &[5]).unwrap().vertices(), &[5]);
        assert_eq!(convex_hull(&q3, &[0, 7]).unwrap().len(), 8);
        let g = grid3();
        let d = oracle::all_pairs(g.graph());
        // (0,0), (0,2), (1,0) span the top two rows
        let h = convex_hull(&g, &[0, 2, 3]).unwrap();
        assert_eq!(h.vertices(), &[0, 1, 2, 3, 4, 5]);
        assert_eq!(h.vertices(), oracle::hull(&d, &[0, 2, 3]).as_slice());
        // three corners already span the whole grid
        assert_eq!(convex_hull(&g, &[0, 2, 6]).unwrap().len(), 9);
        assert_eq!(oracle::hull(&d, &[0, 2, 6]).len(), 9);
    }

    #[test]
    fn gate_examples() {
        let q3 = CubeComplex::new(generate::cube(3)).unwrap();
        let bottom = ConvexSet::new(&q3, &[0, 1, 2, 3]).unwrap();
        assert_eq!(gate(&q3, 7, &bottom).unwrap(), 3);
        assert_eq!(gate(&q3, 2, &bottom).unwrap(), 2);
        let g = grid3();
        // leftmost vertical hyperplane is 0; corner (2,2) has id 8
        let c = ConvexSet::carrier(&g, 0).unwrap();
        assert_eq!(c.vertices(), &[0, 1, 3, 4, 6, 7]);
        assert_eq!(gate(&g, 8, &c).unwrap(), 7);
        let d = oracle::all_pairs(g.graph());
        assert_eq!(oracle::nearest(&d, 8, c.vertices()), vec![7]);
    }

    #[test]
    fn projection_examples() {
        let q3 = CubeComplex::new(generate::cube(3)).unwrap();
        let bottom = ConvexSet::new(&q3, &[0, 1, 2, 3]).unwrap();
        let p = project_set(&q3, &[4, 5, 6, 7], &bottom).unwrap();
        assert_eq!(p.image, vec![0, 1, 2, 3]);
        let p5 = CubeComplex::new(generate::path(5)).unwrap();
        let c = ConvexSet::new(&p5, &[0, 1]).unwrap();
        assert_eq!(project_set(&p5, &[3, 4], &c).unwrap().image, vec![1]);
        let g = grid3();
        let h1 = ConvexSet::carrier(&g, 1).unwrap();
        let p = project_set(&g, &bits_to_vec(g.carrier(3)), &h1).unwrap();
        assert_eq!(p.image, vec![3, 4, 5]);
        assert_eq!(p.diameter, 2);
    }

    #[test]
    fn separator_law_on_grid() {
        let g = CubeComplex::new(generate::grid(3, 4)).unwrap();
        let c = ConvexSet::new(&g, &[5, 6, 9, 10]).unwrap();
        for x in 0..12 {
            for y in 0..12 {
                assert!(separator_law(&g, x, y, &c).unwrap().holds);
            }
        }
    }

    #[test]
    fn label_gate_agrees_with_descent() {
        let g = CubeComplex::new(generate::random_tree(25, 4)).unwrap();
        let c = convex_hull(&g, &[3, 11, 17]).unwrap();
        for x in 0..25 {
            assert_eq!(gate(&g, x, &c).unwrap(), gate_by_labels(&g, x, &c));
        }
    }
}
