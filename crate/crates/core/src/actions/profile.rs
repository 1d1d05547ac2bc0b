use std::collections::VecDeque;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::Serialize;

use super::{ramsey_bound, Group};
use crate::complex::{CubeComplex, Side};
use crate::contact::separators_between;
use crate::error::{Error, Result};

/// Number of hyperplanes separating each pair; 0 for equal or transverse.
fn separation_matrix(cx: &CubeComplex) -> Vec<Vec<u32>> {
    let h = cx.hyperplane_count() as u32;
    (0..h)
        .into_par_iter()
        .map(|a| (0..h).map(|b| separators_between(cx, a, b).len() as u32).collect())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinkageRow {
    pub r: u32,
    pub l: u64,
    /// `None` when no vertex pair is that far apart.
    pub n_weak_at_l: Option<u64>,
    pub n_hyp_at_r: Option<u64>,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AcylProfile {
    pub group_order: usize,
    /// The group was truncated at its cap: every count is a lower bound.
    pub lower_bound_only: bool,
    /// `n_hyp[R]`: largest `|stab(J1) ∩ stab(J2)|` over pairs (including
    /// `J1 = J2`) separated by at least `R` hyperplanes.
    pub n_hyp: Vec<u64>,
    /// `n_weak[R]`: largest `|stab(x) ∩ stab(y)|` over vertex pairs at
    /// distance at least `R`.
    pub n_weak: Vec<u64>,
    pub non_increasing: bool,
    /// `N_weak(L) ≤ N_hyp(R)` at `L = ramsey_bound(R, dim)`. Reported, not
    /// asserted: it can fail when stabilizers of far-apart vertices permute
    /// the separators between them.
    pub linkage: Vec<LinkageRow>,
}

fn suffix_max(best_at: Vec<u64>) -> Vec<u64> {
    let mut out = best_at;
    for i in (0..out.len().saturating_sub(1)).rev() {
        out[i] = out[i].max(out[i + 1]);
    }
    out
}

pub fn acyl_profile(cx: &CubeComplex, group: &Group) -> AcylProfile {
    let h = cx.hyperplane_count() as u32;
    let n = cx.vertex_count() as u32;
    let sep = separation_matrix(cx);
    let hstab: Vec<FixedBitSet> = (0..h).map(|j| group.hyperplane_stabilizer(j)).collect();
    let vstab: Vec<FixedBitSet> = (0..n).map(|v| group.vertex_stabilizer(v)).collect();

    let max_sep = sep.iter().flatten().copied().max().unwrap_or(0) as usize;
    let mut hyp_at = vec![0u64; max_sep + 1];
    for a in 0..h as usize {
        for b in a..h as usize {
            let c = hstab[a].intersection_count(&hstab[b]) as u64;
            let s = sep[a][b] as usize;
            hyp_at[s] = hyp_at[s].max(c);
        }
    }
    let rows: Vec<Vec<(u32, u64)>> = (0..n)
        .into_par_iter()
        .map(|x| {
            (x..n)
                .map(|y| (cx.distance(x, y), vstab[x as usize].intersection_count(&vstab[y as usize]) as u64))
                .collect()
        })
        .collect();
    let diam = rows.iter().flatten().map(|&(d, _)| d).max().unwrap_or(0) as usize;
    let mut weak_at = vec![0u64; diam + 1];
    for &(d, c) in rows.iter().flatten() {
        weak_at[d as usize] = weak_at[d as usize].max(c);
    }
    let n_hyp = if h == 0 { Vec::new() } else { suffix_max(hyp_at) };
    let n_weak = suffix_max(weak_at);
    let non_increasing = n_hyp.windows(2).all(|w| w[0] >= w[1]) && n_weak.windows(2).all(|w| w[0] >= w[1]);
    let dim = cx.dimension() as u32;
    let linkage = (1..n_hyp.len() as u32)
        .map(|r| {
            let l = ramsey_bound(r, dim.max(1)).l;
            let n_weak_at_l = n_weak.get(l as usize).copied();
            let n_hyp_at_r = n_hyp.get(r as usize).copied();
            LinkageRow {
                r,
                l,
                n_weak_at_l,
                n_hyp_at_r,
                holds: match (n_weak_at_l, n_hyp_at_r) {
                    (Some(w), Some(hh)) => w <= hh,
                    _ => true,
                },
            }
        })
        .collect();
    AcylProfile {
        group_order: group.order(),
        lower_bound_only: group.truncated(),
        n_hyp,
        n_weak,
        non_increasing,
        linkage,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoarseStabilizer {
    pub x: u32,
    pub y: u32,
    pub d: u32,
    pub count: usize,
    /// Indices into the group's element list.
    pub elements: Vec<usize>,
    pub lower_bound_only: bool,
}

/// `{g : d(x, gx) ≤ d and d(y, gy) ≤ d}`.
pub fn coarse_stabilizer(cx: &CubeComplex, group: &Group, x: u32, y: u32, d: u32) -> Result<CoarseStabilizer> {
    cx.check_vertex(x)?;
    cx.check_vertex(y)?;
    let elements: Vec<usize> = group
        .elements()
        .iter()
        .enumerate()
        .filter(|(_, g)| cx.distance(x, g.apply(x)) <= d && cx.distance(y, g.apply(y)) <= d)
        .map(|(i, _)| i)
        .collect();
    Ok(CoarseStabilizer {
        x,
        y,
        d,
        count: elements.len(),
        elements,
        lower_bound_only: group.truncated(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HalfspaceReach {
    pub hyperplane: u32,
    pub side: Side,
    /// Least, over orbits, of the greatest depth `d(o, complement)` reached
    /// by an orbit point `o` inside the halfspace; 0 if an orbit misses it.
    pub reach: u32,
    pub flagged: bool,
}

/// Multi-source BFS distances to a vertex set.
fn distance_to(cx: &CubeComplex, set: &FixedBitSet) -> Vec<u32> {
    let mut dist = vec![u32::MAX; cx.vertex_count()];
    let mut q = VecDeque::new();
    for v in set.ones() {
        dist[v] = 0;
        q.push_back(v as u32);
    }
    while let Some(u) = q.pop_front() {
        for &w in cx.graph().neighbors(u) {
            if dist[w as usize] == u32::MAX {
                dist[w as usize] = dist[u as usize] + 1;
                q.push_back(w);
            }
        }
    }
    dist
}

/// Finite proxy for essentiality: every orbit should go at least `depth`
/// deep into every halfspace. Halfspaces whose reach is below `depth` are
/// flagged.
pub fn essentiality_report(cx: &CubeComplex, group: &Group, depth: u32) -> Vec<HalfspaceReach> {
    let n = cx.vertex_count() as u32;
    let mut seen = vec![false; n as usize];
    let mut orbits = Vec::new();
    for v in 0..n {
        if !seen[v as usize] {
            let o = group.orbit(v);
            o.iter().for_each(|&w| seen[w as usize] = true);
            orbits.push(o);
        }
    }
    let mut out = Vec::new();
    for j in 0..cx.hyperplane_count() as u32 {
        for s in [Side::A, Side::B] {
            let depth_of = distance_to(cx, cx.halfspace(j, s.flip()));
            let reach = orbits
                .iter()
                .map(|o| o.iter().map(|&w| depth_of[w as usize]).max().unwrap_or(0))
                .min()
                .unwrap_or(0);
            out.push(HalfspaceReach {
                hyperplane: j,
                side: s,
                reach,
                flagged: reach < depth,
            });
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinkageExample {
    pub r: u32,
    pub x: u32,
    pub y: u32,
    /// Index of the offending element in the group.
    pub element: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinkageReport {
    pub pairs_checked: usize,
    /// Elements of `stab(x) ∩ stab(y)`, `d(x,y) ≥ L`, that fix no two
    /// hyperplanes at separation `≥ R`.
    pub literal_failures: usize,
    pub literal_example: Option<LinkageExample>,
    /// Failures of the subgroup statement: the elements fixing every
    /// separator of `x, y` fix the two ends of a longest disjoint chain,
    /// which are `≥ R` apart, and they have index equal to the size of the
    /// permutation image on the separators.
    pub subgroup_failures: usize,
    /// Pairs violating `d∞ ≥ ⌈d₁ / dim⌉`.
    pub pigeonhole_failures: usize,
}

/// Finite content of the lemma deriving weak acylindricity from
/// acylindricity on hyperplanes, for `R = 1..=r_max`.
pub fn linkage_check(cx: &CubeComplex, group: &Group, r_max: u32) -> Result<LinkageReport> {
    let n = cx.vertex_count() as u32;
    let h = cx.hyperplane_count() as u32;
    let dim = cx.dimension().max(1) as u32;
    let sep = separation_matrix(cx);
    let vstab: Vec<FixedBitSet> = (0..n).map(|v| group.vertex_stabilizer(v)).collect();
    // fixed[g]: hyperplanes fixed by element g
    let fixed: Vec<Vec<u32>> = group
        .elements()
        .iter()
        .map(|g| (0..h).filter(|&j| g.hyperplane(j) == j).collect())
        .collect();
    let fixes_far_pair = |g: usize, r: u32| {
        let f = &fixed[g];
        f.iter().any(|&a| f.iter().any(|&b| sep[a as usize][b as usize] >= r))
    };
    let mut report = LinkageReport {
        pairs_checked: 0,
        literal_failures: 0,
        literal_example: None,
        subgroup_failures: 0,
        pigeonhole_failures: 0,
    };
    for x in 0..n {
        for y in x + 1..n {
            let d1 = cx.distance(x, y);
            let dinf = cx.dist_linf(x, y)?;
            if dinf < d1.div_ceil(dim) {
                report.pigeonhole_failures += 1;
            }
            for r in 1..=r_max {
                if (d1 as u64) < ramsey_bound(r, dim).l {
                    continue;
                }
                report.pairs_checked += 1;
                let mut both = vstab[x as usize].clone();
                both.intersect_with(&vstab[y as usize]);
                for gi in both.ones() {
                    if !fixes_far_pair(gi, r) {
                        report.literal_failures += 1;
                        report.literal_example.get_or_insert(LinkageExample { r, x, y, element: gi });
                    }
                }
                let seps = cx.separators(x, y);
                let chain = cx.disjoint_chain(x, &seps);
                if chain.len() < r as usize + 2 {
                    return Err(Error::LawViolation(format!(
                        "d({x},{y}) = {d1} but only {} pairwise disjoint separators",
                        chain.len()
                    )));
                }
                let (j1, j2) = (chain[0], *chain.last().unwrap());
                let mut images = std::collections::HashSet::new();
                let mut kernel = 0usize;
                let mut ok = sep[j1 as usize][j2 as usize] >= r;
                for gi in both.ones() {
                    let g = &group.elements()[gi];
                    let image: Vec<u32> = seps.iter().map(|&j| g.hyperplane(j)).collect();
                    if image == seps {
                        kernel += 1;
                        ok &= g.hyperplane(j1) == j1 && g.hyperplane(j2) == j2;
                    }
                    images.insert(image);
                }
                ok &= images.len() * kernel == both.count_ones(..);
                if !ok {
                    report.subgroup_failures += 1;
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::super::tests::q3_full_group;
    use super::super::{generate_group, Automorphism};
    use super::*;
    use crate::generate;

    #[test]
    fn trivial_group_profile() {
        let p5 = CubeComplex::new(generate::path(5)).unwrap();
        let p = acyl_profile(&p5, &Group::trivial(&p5));
        assert!(p.n_hyp.iter().all(|&v| v == 1));
        assert!(p.n_weak.iter().all(|&v| v == 1));
        assert_eq!(p.n_hyp.len(), 3);
        assert!(essentiality_report(&p5, &Group::trivial(&p5), 1).iter().all(|r| r.flagged));
    }

    #[test]
    fn q3_profile() {
        let cx = CubeComplex::new(generate::cube(3)).unwrap();
        let g = q3_full_group(&cx);
        let p = acyl_profile(&cx, &g);
        assert_eq!(p.n_hyp, vec![16]);
        assert_eq!(p.n_weak[0], 6);
        let e = essentiality_report(&cx, &g, 1);
        assert!(e.iter().all(|r| r.reach == 1 && !r.flagged));
        let c = coarse_stabilizer(&cx, &g, 0, 7, 0).unwrap();
        assert_eq!(c.count, 6);
        assert_eq!(coarse_stabilizer(&cx, &g, 0, 7, 3).unwrap().count, 48);
    }

    #[test]
    fn coset_tree_profile_is_non_uniform() {
        for depth in 3..=5 {
            let t = generate::coset_tree(depth).unwrap();
            let cx = CubeComplex::new(t.graph.clone()).unwrap();
            let gens: Vec<Automorphism> =
                t.generators.iter().map(|m| Automorphism::new(&cx, m.clone()).unwrap()).collect();
            let g = generate_group(&cx, &gens, 1 << 20);
            assert_eq!(g.order(), 1 << depth);
            let p = acyl_profile(&cx, &g);
            assert!(p.non_increasing);
            // Top edges stay fixed by large subgroups until the separation
            // is too big for two non-leaf edges.
            let r_nonleaf = 2 * (depth - 2);
            for r in 0..=r_nonleaf as usize {
                assert!(p.n_hyp[r] > 1, "depth {depth}, R = {r}: {:?}", p.n_hyp);
            }
            assert!(p.n_hyp[0] > p.n_hyp[r_nonleaf as usize]);
        }
    }

    #[test]
    fn linkage_on_coset_tree() {
        let t = generate::coset_tree(3).unwrap();
        let cx = CubeComplex::new(t.graph.clone()).unwrap();
        let gens: Vec<Automorphism> =
            t.generators.iter().map(|m| Automorphism::new(&cx, m.clone()).unwrap()).collect();
        let g = generate_group(&cx, &gens, 1 << 20);
        let r = linkage_check(&cx, &g, 2).unwrap();
        assert!(r.pairs_checked > 0);
        assert_eq!((r.literal_failures, r.subgroup_failures, r.pigeonhole_failures), (0, 0, 0));
    }

    #[test]
    fn literal_linkage_fails_on_a_large_grid() {
        // The diagonal reflection of P10 × P10 fixes both ends of the main
        // diagonal (distance 18 = Ram(4)) but swaps every row hyperplane with
        // a column hyperplane, so it fixes no hyperplane at all.
        let cx = CubeComplex::new(generate::grid(10, 10)).unwrap();
        let swap: Vec<u32> = (0..100).map(|v| (v % 10) * 10 + v / 10).collect();
        let g = generate_group(&cx, &[Automorphism::new(&cx, swap).unwrap()], 10);
        let r = linkage_check(&cx, &g, 1).unwrap();
        assert!(r.literal_failures > 0);
        assert_eq!(r.literal_example.as_ref().map(|e| (e.x, e.y)), Some((0, 99)));
        assert_eq!(r.subgroup_failures, 0);
        let p = acyl_profile(&cx, &g);
        assert!(p.linkage.iter().any(|row| !row.holds));
    }
}
