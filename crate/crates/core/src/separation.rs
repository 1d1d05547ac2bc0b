//! Relations between hyperplanes: transversality, nesting, facing triples,
//! well-separation, thinness of joins along geodesics, and ℓ∞ layers.

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::Serialize;

use crate::complex::{CubeComplex, Side};
use crate::convexity::{gate, project_set, ConvexSet};
use crate::error::{Error, Result};
use crate::util::bits_to_vec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Relation {
    Equal,
    Transverse,
    /// `j_in`: the halfspace of `H` containing `J`; `h_in`: the halfspace of
    /// `J` containing `H`.
    Nested { j_in: Side, h_in: Side },
}

impl Relation {
    pub fn is_transverse(self) -> bool {
        matches!(self, Relation::Transverse)
    }
}

pub fn relation(cx: &CubeComplex, j: u32, h: u32) -> Result<Relation> {
    cx.check_hyperplane(j)?;
    cx.check_hyperplane(h)?;
    if j == h {
        return Ok(Relation::Equal);
    }
    let q = cx.quad(j, h);
    if q == 0b1111 {
        return Ok(Relation::Transverse);
    }
    // Side s of J misses side t of H: then H lies in the other side of J
    // and J in the other side of H.
    let empty = (0..4).find(|&b| q & (1 << b) == 0).unwrap();
    let (s, t) = (Side::from_bit(empty & 2 != 0), Side::from_bit(empty & 1 != 0));
    Ok(Relation::Nested {
        j_in: t.flip(),
        h_in: s.flip(),
    })
}

/// Whether `J` and `H` lie in different halfspaces of `V`.
pub fn separates(cx: &CubeComplex, v: u32, j: u32, h: u32) -> Result<bool> {
    if v == j || v == h || j == h {
        return Err(Error::InvalidArgument(format!(
            "separates needs three distinct hyperplanes, got ({v}, {j}, {h})"
        )));
    }
    match (relation(cx, v, j)?, relation(cx, v, h)?) {
        (Relation::Nested { h_in: a, .. }, Relation::Nested { h_in: b, .. }) => Ok(a != b),
        _ => Ok(false),
    }
}

/// Three pairwise disjoint hyperplanes none of which separates the others.
pub fn facing_triple(cx: &CubeComplex, a: u32, b: u32, c: u32) -> Result<bool> {
    for j in [a, b, c] {
        cx.check_hyperplane(j)?;
    }
    if a == b || b == c || a == c {
        return Ok(false);
    }
    if cx.transverse(a, b) || cx.transverse(b, c) || cx.transverse(a, c) {
        return Ok(false);
    }
    Ok(!(separates(cx, a, b, c)? || separates(cx, b, a, c)? || separates(cx, c, a, b)?))
}

/// Hyperplanes transverse to both `j` and `h`.
pub fn crossing_set(cx: &CubeComplex, j: u32, h: u32) -> Vec<u32> {
    let mut row = cx.transverse_row(j).clone();
    row.intersect_with(cx.transverse_row(h));
    bits_to_vec(&row)
}

/// Disjoint and not both crossed by any hyperplane.
pub fn strongly_separated(cx: &CubeComplex, j: u32, h: u32) -> bool {
    j != h && !cx.transverse(j, h) && cx.transverse_row(j).is_disjoint(cx.transverse_row(h))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SeparationReport {
    pub pair: [u32; 2],
    /// Set for transverse or equal pairs, where no degree is defined.
    pub not_applicable: bool,
    pub crossing_set: Vec<u32>,
    pub degree_direct: Option<u32>,
    pub degree_projection: Option<u32>,
    pub strongly_separated: Option<bool>,
    /// The crossing set exceeded the direct-search cap, so `degree_direct`
    /// repeats the projection value.
    pub direct_fallback: bool,
}

/// Well-separation degree of disjoint `J`, `H`, computed two ways: the
/// largest facing-triple-free subfamily of the crossing set, and the
/// diameter of the gate projection of `N(H)` onto `N(J)`. A disagreement is
/// an error.
pub fn well_separation_degree(cx: &CubeComplex, j: u32, h: u32) -> Result<SeparationReport> {
    let rel = relation(cx, j, h)?;
    let crossing = crossing_set(cx, j, h);
    if !matches!(rel, Relation::Nested { .. }) {
        return Ok(SeparationReport {
            pair: [j, h],
            not_applicable: true,
            crossing_set: crossing,
            degree_direct: None,
            degree_projection: None,
            strongly_separated: None,
            direct_fallback: false,
        });
    }
    let carrier_j = ConvexSet::carrier(cx, j)?;
    let projection = project_set(cx, &bits_to_vec(cx.carrier(h)), &carrier_j)?.diameter;
    let cap = 2 * cx.dimension() * (projection as usize + 1);
    let (direct, fallback) = if crossing.len() > cap {
        log::warn!(
            "crossing set of ({j}, {h}) has {} members, above the direct-search cap {cap}; using the projection degree",
            crossing.len()
        );
        (projection, true)
    } else {
        (max_facing_free(cx, &crossing) as u32, false)
    };
    if direct != projection {
        return Err(Error::LawViolation(format!(
            "well-separation of ({j}, {h}): facing-triple-free family of size {direct}, projection diameter {projection}"
        )));
    }
    Ok(SeparationReport {
        pair: [j, h],
        not_applicable: false,
        crossing_set: crossing,
        degree_direct: Some(direct),
        degree_projection: Some(projection),
        strongly_separated: Some(direct == 0),
        direct_fallback: fallback,
    })
}

/// All pairs `J < H`, in order.
pub fn separation_scan(cx: &CubeComplex) -> Result<Vec<SeparationReport>> {
    let h = cx.hyperplane_count() as u32;
    let pairs: Vec<(u32, u32)> = (0..h).flat_map(|a| (a + 1..h).map(move |b| (a, b))).collect();
    pairs
        .par_iter()
        .map(|&(a, b)| well_separation_degree(cx, a, b))
        .collect()
}

/// Largest subfamily of `family` without a facing triple. Branches on the
/// three ways to break some remaining facing triple, pruning by size.
pub fn max_facing_free(cx: &CubeComplex, family: &[u32]) -> usize {
    let k = family.len();
    let mut triples: Vec<[usize; 3]> = Vec::new();
    for a in 0..k {
        for b in a + 1..k {
            if cx.transverse(family[a], family[b]) {
                continue;
            }
            for c in b + 1..k {
                if facing_triple(cx, family[a], family[b], family[c]).unwrap() {
                    triples.push([a, b, c]);
                }
            }
        }
    }
    fn rec(alive: &mut FixedBitSet, count: usize, triples: &[[usize; 3]], best: &mut usize) {
        if count <= *best {
            return;
        }
        match triples.iter().find(|t| t.iter().all(|&i| alive[i])) {
            None => *best = count,
            Some(t) => {
                for &i in t {
                    alive.set(i, false);
                    rec(alive, count - 1, triples, best);
                    alive.set(i, true);
                }
            }
        }
    }
    let mut alive = FixedBitSet::with_capacity(k);
    alive.insert_range(..);
    let mut best = 0;
    if k > 0 {
        rec(&mut alive, k, &triples, &mut best);
    }
    best
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Thinness {
    pub constant: u32,
    /// A join `(A, B)` attaining the constant.
    pub join: [Vec<u32>; 2],
}

/// Smallest `C` such that every join `(A, B)` of separators of the geodesic
/// (every member of `A` transverse to every member of `B`) has
/// `min(|A|, |B|) ≤ C`. Subfamilies of one geodesic's separators never
/// contain a facing triple, so only the join condition is searched.
pub fn thinness_constant(cx: &CubeComplex, path: &[u32]) -> Result<Thinness> {
    cx.check_geodesic(path)?;
    let seps = cx.separators(path[0], *path.last().unwrap());
    let k = seps.len();
    let rows: Vec<FixedBitSet> = seps
        .iter()
        .map(|&a| {
            let mut r = FixedBitSet::with_capacity(k);
            for (i, &b) in seps.iter().enumerate() {
                r.set(i, cx.transverse(a, b));
            }
            r
        })
        .collect();

    struct Search<'a> {
        rows: &'a [FixedBitSet],
        best: usize,
        best_join: (Vec<usize>, FixedBitSet),
    }
    impl Search<'_> {
        fn rec(&mut self, a: &mut Vec<usize>, b: &FixedBitSet, next: usize) {
            let k = self.rows.len();
            let nb = b.count_ones(..);
            if nb <= self.best || a.len() + (k - next) <= self.best {
                return;
            }
            for i in next..k {
                let mut nb2 = b.clone();
                nb2.intersect_with(&self.rows[i]);
                if nb2.count_ones(..) <= self.best {
                    continue;
                }
                a.push(i);
                let value = a.len().min(nb2.count_ones(..));
                if value > self.best {
                    self.best = value;
                    self.best_join = (a.clone(), nb2.clone());
                }
                self.rec(a, &nb2, i + 1);
                a.pop();
            }
        }
    }
    let mut all = FixedBitSet::with_capacity(k);
    all.insert_range(..);
    let mut s = Search {
        rows: &rows,
        best: 0,
        best_join: (Vec::new(), FixedBitSet::with_capacity(k)),
    };
    s.rec(&mut Vec::new(), &all, 0);
    let (a, b) = s.best_join;
    let mut join_a: Vec<u32> = a.iter().map(|&i| seps[i]).collect();
    let mut join_b: Vec<u32> = b.ones().map(|i| seps[i]).collect();
    // Balance the reported join to the attained value.
    join_a.truncate(s.best);
    join_b.truncate(s.best);
    Ok(Thinness {
        constant: s.best as u32,
        join: [join_a, join_b],
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Layers {
    /// `layers[i]`: members `J` of the set with `d∞(x, N(J)) = i`.
    pub layers: Vec<Vec<u32>>,
    pub pairwise_transverse: Vec<bool>,
    pub within_dimension: bool,
    /// The set is the separator set of `x` and some vertex, so the layer
    /// property is required to hold.
    pub oriented: bool,
}

pub fn hyperplane_layers(cx: &CubeComplex, x: u32, u: &[u32]) -> Result<Layers> {
    cx.check_vertex(x)?;
    let mut u = u.to_vec();
    u.sort_unstable();
    u.dedup();
    let mut indexed = Vec::with_capacity(u.len());
    for &j in &u {
        cx.check_hyperplane(j)?;
        let g = gate(cx, x, &ConvexSet::carrier(cx, j)?)?;
        indexed.push((cx.dist_linf(x, g)? as usize, j));
    }
    let depth = indexed.iter().map(|&(i, _)| i + 1).max().unwrap_or(0);
    let mut layers = vec![Vec::new(); depth];
    for (i, j) in indexed {
        layers[i].push(j);
    }
    let pairwise_transverse: Vec<bool> = layers
        .iter()
        .map(|l| l.iter().enumerate().all(|(a, &p)| l[a + 1..].iter().all(|&q| cx.transverse(p, q))))
        .collect();
    let within_dimension = layers.iter().all(|l| l.len() <= cx.dimension());
    let mut flipped = cx.label(x).clone();
    for &j in &u {
        flipped.toggle(j as usize);
    }
    let oriented = cx.vertex_with_label(&flipped).is_some();
    if oriented && !(within_dimension && pairwise_transverse.iter().all(|&t| t)) {
        return Err(Error::LawViolation(format!(
            "layer property fails for separators of vertex {x}: {layers:?}"
        )));
    }
    Ok(Layers {
        layers,
        pairwise_transverse,
        within_dimension,
        oriented,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;
    use crate::oracle;

    fn q3() -> CubeComplex {
        CubeComplex::new(generate::cube(3)).unwrap()
    }
    fn p5() -> CubeComplex {
        CubeComplex::new(generate::path(5)).unwrap()
    }
    fn grid(a: u32, b: u32) -> CubeComplex {
        CubeComplex::new(generate::grid(a, b)).unwrap()
    }

    #[test]
    fn relation_examples() {
        let q = q3();
        for (a, b) in [(0, 1), (0, 2), (1, 2)] {
            assert_eq!(relation(&q, a, b).unwrap(), Relation::Transverse);
        }
        assert_eq!(relation(&q, 1, 1).unwrap(), Relation::Equal);
        // J1 = 0, J3 = 2: J3 sits on the far side of J1 (away from vertex 0)
        assert_eq!(
            relation(&p5(), 0, 2).unwrap(),
            Relation::Nested {
                j_in: Side::A,
                h_in: Side::B
            }
        );
        assert_eq!(relation(&grid(3, 3), 1, 0).unwrap(), Relation::Transverse);
        assert!(matches!(relation(&q, 0, 3), Err(Error::UnknownHyperplane(3))));
    }

    #[test]
    fn separates_examples() {
        let p = p5();
        assert!(separates(&p, 1, 0, 2).unwrap());
        assert!(!separates(&p, 0, 1, 2).unwrap());
        assert!(!separates(&q3(), 0, 1, 2).unwrap());
        assert!(!separates(&grid(3, 3), 0, 1, 3).unwrap());
        assert!(separates(&p, 1, 1, 2).is_err());
    }

    #[test]
    fn facing_triple_examples() {
        let star = CubeComplex::new(generate::star(3)).unwrap();
        assert!(facing_triple(&star, 0, 1, 2).unwrap());
        assert!(!facing_triple(&p5(), 0, 1, 2).unwrap());
        for seed in 0..5 {
            let t = CubeComplex::new(generate::random_tree(12, seed)).unwrap();
            let h = t.hyperplane_count() as u32;
            for a in 0..h {
                for b in 0..h {
                    for c in 0..h {
                        assert_eq!(facing_triple(&t, a, b, c).unwrap(), oracle::facing_triple(&t, a, b, c));
                    }
                }
            }
        }
    }

    #[test]
    fn well_separation_examples() {
        let r = well_separation_degree(&p5(), 0, 3).unwrap();
        assert!(r.crossing_set.is_empty());
        assert_eq!((r.degree_direct, r.strongly_separated), (Some(0), Some(true)));

        let g = grid(3, 3);
        let r = well_separation_degree(&g, 1, 3).unwrap();
        assert_eq!(r.crossing_set, vec![0, 2]);
        assert_eq!((r.degree_direct, r.degree_projection), (Some(2), Some(2)));
        assert_eq!(r.strongly_separated, Some(false));

        let r = well_separation_degree(&q3(), 0, 1).unwrap();
        assert!(r.not_applicable && r.degree_direct.is_none());

        // P3 × Q3: the two path hyperplanes are crossed by the three cube
        // directions, which are pairwise transverse.
        let prod = CubeComplex::new(generate::path(3).product(&generate::cube(3))).unwrap();
        let path_planes: Vec<u32> = (0..prod.hyperplane_count() as u32)
            .filter(|&j| prod.transverse_row(j).count_ones(..) == 3)
            .collect();
        assert_eq!(path_planes.len(), 2);
        let r = well_separation_degree(&prod, path_planes[0], path_planes[1]).unwrap();
        assert_eq!(r.degree_direct, Some(3));
        assert_eq!(oracle::max_facing_free(&prod, &r.crossing_set), 3);
    }

    #[test]
    fn strong_separation_in_trees() {
        let t = CubeComplex::new(generate::random_tree(20, 9)).unwrap();
        for r in separation_scan(&t).unwrap() {
            assert_eq!(r.strongly_separated, Some(true));
        }
    }

    #[test]
    fn thinness_examples() {
        assert_eq!(thinness_constant(&p5(), &[0, 1, 2, 3, 4]).unwrap().constant, 0);
        assert_eq!(thinness_constant(&q3(), &[0, 1, 3, 7]).unwrap().constant, 1);
        let g = grid(4, 4);
        let path = g.geodesic(0, 15).unwrap();
        let t = thinness_constant(&g, &path).unwrap();
        assert_eq!(t.constant, 3);
        assert_eq!(oracle::thinness(&g, &g.separators(0, 15)), 3);
        assert!(matches!(thinness_constant(&g, &[0, 1, 0]), Err(Error::NotGeodesic(_))));
    }

    #[test]
    fn layer_examples() {
        let l = hyperplane_layers(&p5(), 0, &[0, 1, 2, 3]).unwrap();
        assert_eq!(l.layers, vec![vec![0], vec![1], vec![2], vec![3]]);
        let l = hyperplane_layers(&q3(), 0, &[0, 1, 2]).unwrap();
        assert_eq!(l.layers, vec![vec![0, 1, 2]]);
        let l = hyperplane_layers(&grid(3, 3), 0, &[0, 1, 2, 3]).unwrap();
        assert_eq!(l.layers, vec![vec![0, 1], vec![2, 3]]);
        assert!(l.oriented);
    }
}
