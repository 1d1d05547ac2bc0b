//! The contact graph: hyperplanes, adjacent when their carriers meet.

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::Serialize;

use crate::complex::CubeComplex;
use crate::error::{Error, Result};
use crate::graph::CubeGraph;
use crate::separation::{relation, strongly_separated, Relation};
use crate::util::Half;

/// Quartic δ scan refuses contact graphs above this many nodes.
pub const DEFAULT_DELTA_CAP: usize = 300;

#[derive(Debug, Clone)]
pub struct ContactGraph {
    graph: CubeGraph,
    dist: Vec<Vec<u32>>,
}

impl ContactGraph {
    pub fn node_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        self.graph.edges()
    }

    pub fn graph(&self) -> &CubeGraph {
        &self.graph
    }

    /// Contact distance; `u32::MAX` between components.
    pub fn distance(&self, j: u32, h: u32) -> u32 {
        self.dist[j as usize][h as usize]
    }

    pub fn distances(&self) -> &[Vec<u32>] {
        &self.dist
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ContactReport {
    pub nodes: usize,
    pub edges: Vec<[u32; 2]>,
    /// Row `j`: contact distances from `j`; `null` between components.
    pub distances: Vec<Vec<Option<u32>>>,
}

impl ContactGraph {
    pub fn report(&self) -> ContactReport {
        ContactReport {
            nodes: self.node_count(),
            edges: self.edges().iter().map(|&(a, b)| [a, b]).collect(),
            distances: self
                .dist
                .iter()
                .map(|r| r.iter().map(|&d| (d != u32::MAX).then_some(d)).collect())
                .collect(),
        }
    }
}

/// Two carriers meet iff some vertex has incident edges in both classes.
pub fn contact_graph(cx: &CubeComplex) -> ContactGraph {
    let h = cx.hyperplane_count();
    let mut adj = vec![FixedBitSet::with_capacity(h); h];
    for v in 0..cx.vertex_count() as u32 {
        let inc: Vec<usize> = cx.incident_classes(v).ones().collect();
        for (a, &i) in inc.iter().enumerate() {
            for &j in &inc[a + 1..] {
                adj[i].insert(j);
            }
        }
    }
    let edges: Vec<(u32, u32)> = adj
        .iter()
        .enumerate()
        .flat_map(|(i, r)| r.ones().map(move |j| (i as u32, j as u32)))
        .collect();
    let graph = CubeGraph::new(h as u32, edges).expect("contact edges are simple");
    let dist = (0..h as u32).into_par_iter().map(|j| graph.bfs(j)).collect();
    ContactGraph { graph, dist }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeltaChain {
    pub pair: [u32; 2],
    /// Ordered from `J` towards `H`.
    pub chain: Vec<u32>,
    pub length: usize,
}

/// Hyperplanes other than `j`, `h` separating them, ordered from `j`.
pub fn separators_between(cx: &CubeComplex, j: u32, h: u32) -> Vec<u32> {
    if j == h || cx.transverse(j, h) {
        return Vec::new();
    }
    let mut seps: Vec<(usize, u32)> = (0..cx.hyperplane_count() as u32)
        .filter(|&v| v != j && v != h)
        .filter_map(|v| match (relation(cx, v, j).ok()?, relation(cx, v, h).ok()?) {
            (Relation::Nested { h_in: a, .. }, Relation::Nested { h_in: b, .. }) if a != b => {
                Some((cx.halfspace(v, a).count_ones(..), v))
            }
            _ => None,
        })
        .collect();
    // A separator nearer to j has the smaller j-side.
    seps.sort_unstable();
    seps.into_iter().map(|(_, v)| v).collect()
}

/// A longest chain of pairwise strongly separated hyperplanes separating
/// `j` and `h`: longest path through separators, stepping only between
/// strongly separated ones. The result is re-verified pairwise.
pub fn delta_chain(cx: &CubeComplex, j: u32, h: u32) -> Result<DeltaChain> {
    cx.check_hyperplane(j)?;
    cx.check_hyperplane(h)?;
    if j == h {
        return Err(Error::InvalidArgument("delta_chain needs two distinct hyperplanes".into()));
    }
    let seps = separators_between(cx, j, h);
    let k = seps.len();
    let mut len = vec![1usize; k];
    let mut prev = vec![usize::MAX; k];
    for b in 0..k {
        for a in 0..b {
            if len[a] + 1 > len[b] && strongly_separated(cx, seps[a], seps[b]) {
                len[b] = len[a] + 1;
                prev[b] = a;
            }
        }
    }
    let mut chain = Vec::new();
    if let Some(mut end) = (0..k).max_by_key(|&b| (len[b], std::cmp::Reverse(b))) {
        loop {
            chain.push(seps[end]);
            if prev[end] == usize::MAX {
                break;
            }
            end = prev[end];
        }
        chain.reverse();
    }
    for (a, &p) in chain.iter().enumerate() {
        for &q in &chain[a + 1..] {
            if !strongly_separated(cx, p, q) {
                return Err(Error::LawViolation(format!(
                    "delta chain for ({j}, {h}) has {p}, {q} not strongly separated"
                )));
            }
        }
    }
    Ok(DeltaChain {
        pair: [j, h],
        length: chain.len(),
        chain,
    })
}

/// Checks the fact the longest-path computation relies on: if `V` separates
/// `U` and `W`, every hyperplane crossing both `U` and `W` crosses `V`.
/// Returns the first violating `(U, V, W, X)`.
pub fn crossing_interpolation_violation(cx: &CubeComplex) -> Option<[u32; 4]> {
    let h = cx.hyperplane_count() as u32;
    (0..h).into_par_iter().find_map_first(|u| {
        for w in 0..h {
            if u == w || cx.transverse(u, w) {
                continue;
            }
            let mut both = cx.transverse_row(u).clone();
            both.intersect_with(cx.transverse_row(w));
            for v in separators_between(cx, u, w) {
                if let Some(x) = both.difference(cx.transverse_row(v)).next() {
                    return Some([u, v, w, x as u32]);
                }
            }
        }
        None
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QiViolation {
    pub pair: [u32; 2],
    pub delta: usize,
    pub distance: u32,
    pub law: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QiReport {
    pub pairs_checked: usize,
    pub violations: Vec<QiViolation>,
    /// Pairs with `d > 5Δ`: the literal upper bound fails. Reported only.
    pub literal_upper_failures: usize,
    pub literal_upper_examples: Vec<[u32; 2]>,
    /// Strongly separated pairs at contact distance below 3.
    pub close_strongly_separated: usize,
    pub clean: bool,
}

/// For every pair of distinct hyperplanes in one component: `Δ ≤ d`,
/// `Δ ≥ ⌊d/5⌋`, and `d ≥ 3 ⟹ strongly separated`.
pub fn qi_check(cx: &CubeComplex, cg: &ContactGraph) -> Result<QiReport> {
    let h = cx.hyperplane_count() as u32;
    let pairs: Vec<(u32, u32)> = (0..h).flat_map(|a| (a + 1..h).map(move |b| (a, b))).collect();
    let rows: Vec<(u32, u32, usize, u32)> = pairs
        .par_iter()
        .map(|&(a, b)| Ok((a, b, delta_chain(cx, a, b)?.length, cg.distance(a, b))))
        .collect::<Result<_>>()?;
    let mut report = QiReport {
        pairs_checked: rows.len(),
        violations: Vec::new(),
        literal_upper_failures: 0,
        literal_upper_examples: Vec::new(),
        close_strongly_separated: 0,
        clean: true,
    };
    for (a, b, delta, d) in rows {
        let mut fail = |law: &str| {
            report.violations.push(QiViolation {
                pair: [a, b],
                delta,
                distance: d,
                law: law.to_string(),
            })
        };
        if d == u32::MAX {
            continue;
        }
        if delta as u32 > d {
            fail("delta <= d");
        }
        if (delta as u32) < d / 5 {
            fail("delta >= floor(d/5)");
        }
        let ss = strongly_separated(cx, a, b);
        if d >= 3 && !ss {
            fail("d >= 3 implies strongly separated");
        }
        if ss && d < 3 {
            report.close_strongly_separated += 1;
        }
        if d > 5 * delta as u32 {
            report.literal_upper_failures += 1;
            if report.literal_upper_examples.len() < 10 {
                report.literal_upper_examples.push([a, b]);
            }
        }
    }
    report.clean = report.violations.is_empty();
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HagenReport {
    pub pairs_checked: usize,
    /// `(J, H, S)`: `S` is interior to a contact geodesic from `J` to `H`
    /// but not within 1 of any separator.
    pub part_i_failures: Vec<[u32; 3]>,
    /// `(J, H, W)`: some contact geodesic from `J` to `H` keeps its
    /// interior at distance ≥ 2 from the separator `W`.
    pub part_ii_failures: Vec<[u32; 3]>,
}

/// Checks both parts of the geodesic/separator correspondence over all
/// contact geodesics at once: interior vertices of geodesics are exactly the
/// vertices of the geodesic interval, and a geodesic avoiding the
/// 1-neighbourhood of `W` exists iff a layered search from `J` reaches `H`.
pub fn hagen_check(cx: &CubeComplex, cg: &ContactGraph) -> HagenReport {
    let h = cx.hyperplane_count() as u32;
    let d = cg.distances();
    let g = cg.graph();
    let pairs: Vec<(u32, u32)> = (0..h)
        .flat_map(|a| (a + 1..h).map(move |b| (a, b)))
        .filter(|&(a, b)| d[a as usize][b as usize] != u32::MAX)
        .collect();
    let results: Vec<(Vec<[u32; 3]>, Vec<[u32; 3]>)> = pairs
        .par_iter()
        .map(|&(j, hh)| {
            let (ju, hu) = (j as usize, hh as usize);
            let r = d[ju][hu];
            let seps = separators_between(cx, j, hh);
            let near = |s: u32, w: u32| d[s as usize][w as usize] <= 1;
            let interior: Vec<u32> = (0..h)
                .filter(|&s| s != j && s != hh && d[ju][s as usize] + d[s as usize][hu] == r)
                .collect();
            let fail_i = interior
                .iter()
                .filter(|&&s| !seps.iter().any(|&w| near(s, w)))
                .map(|&s| [j, hh, s])
                .collect();
            let mut fail_ii = Vec::new();
            for &w in &seps {
                // reach[s]: s lies on a geodesic prefix from j whose interior
                // avoids the closed 1-ball around w.
                let mut reach = vec![false; h as usize];
                reach[ju] = true;
                let mut level: Vec<u32> = vec![j];
                for step in 1..=r {
                    let mut next = Vec::new();
                    for &s in &level {
                        for &t in g.neighbors(s) {
                            let tu = t as usize;
                            if d[ju][tu] != step || d[tu][hu] != r - step || reach[tu] {
                                continue;
                            }
                            if t != hh && near(t, w) {
                                continue;
                            }
                            reach[tu] = true;
                            next.push(t);
                        }
                    }
                    level = next;
                }
                if reach[hu] {
                    fail_ii.push([j, hh, w]);
                }
            }
            (fail_i, fail_ii)
        })
        .collect();
    let mut report = HagenReport {
        pairs_checked: pairs.len(),
        part_i_failures: Vec::new(),
        part_ii_failures: Vec::new(),
    };
    for (a, b) in results {
        report.part_i_failures.extend(a);
        report.part_ii_failures.extend(b);
    }
    report
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FourPointDelta {
    /// Largest δ over all components.
    pub delta: Half,
    /// δ of each connected component, ordered by smallest node.
    pub per_component: Vec<Half>,
}

/// Exact four-point hyperbolicity constant: the largest value of
/// `(L - M) / 2` over quadruples, where `L ≥ M` are the two largest of the
/// three pair sums.
pub fn four_point_delta(cg: &ContactGraph, cap: usize) -> Result<FourPointDelta> {
    let n = cg.node_count();
    if n > cap {
        return Err(Error::CapExceeded {
            what: "contact node",
            actual: n,
            cap,
        });
    }
    let (count, comp) = cg.graph().components();
    let d = cg.distances();
    let mut per_component = Vec::with_capacity(count);
    for c in 0..count as u32 {
        let nodes: Vec<usize> = (0..n).filter(|&v| comp[v] == c).collect();
        let m = nodes.len();
        let best = (0..m)
            .into_par_iter()
            .map(|a| {
                let mut best = 0u32;
                let x = nodes[a];
                for b in a + 1..m {
                    let y = nodes[b];
                    for cc in b + 1..m {
                        let z = nodes[cc];
                        for &w in &nodes[cc + 1..] {
                            let mut s = [d[x][y] + d[z][w], d[x][z] + d[y][w], d[x][w] + d[y][z]];
                            s.sort_unstable();
                            best = best.max(s[2] - s[1]);
                        }
                    }
                }
                best
            })
            .max()
            .unwrap_or(0);
        per_component.push(Half(best as u64));
    }
    Ok(FourPointDelta {
        delta: per_component.iter().copied().max().unwrap_or(Half(0)),
        per_component,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;
    use crate::oracle;

    fn cx(g: CubeGraph) -> CubeComplex {
        CubeComplex::new(g).unwrap()
    }

    #[test]
    fn contact_graph_examples() {
        let q3 = contact_graph(&cx(generate::cube(3)));
        assert_eq!(q3.edges(), &[(0, 1), (0, 2), (1, 2)]);
        let p5 = contact_graph(&cx(generate::path(5)));
        assert_eq!(p5.edges(), &[(0, 1), (1, 2), (2, 3)]);
        let star = contact_graph(&cx(generate::star(5)));
        assert_eq!(star.edges().len(), 10);
        let g = cx(generate::grid(3, 4));
        assert_eq!(contact_graph(&g).distances(), oracle::contact_distances(&g).as_slice());
    }

    #[test]
    fn delta_examples() {
        let q3 = cx(generate::cube(3));
        assert_eq!(delta_chain(&q3, 0, 1).unwrap().length, 0);
        let p5 = cx(generate::path(5));
        let c = delta_chain(&p5, 0, 3).unwrap();
        assert_eq!(c.chain, vec![1, 2]);
        assert_eq!(oracle::delta(&p5, 0, 3), 2);
        let g = cx(generate::grid(3, 3));
        assert_eq!(delta_chain(&g, 1, 3).unwrap().length, 0);
    }

    #[test]
    fn delta_matches_oracle_on_random_duals() {
        for seed in 0..10 {
            let w = generate::random_wallspace(9, 8, seed).unwrap();
            let d = crate::duality::dual_complex(&w, 16).unwrap();
            let c = cx(d.graph);
            assert_eq!(crossing_interpolation_violation(&c), None);
            let h = c.hyperplane_count() as u32;
            for a in 0..h {
                for b in a + 1..h {
                    assert_eq!(delta_chain(&c, a, b).unwrap().length, oracle::delta(&c, a, b));
                }
            }
        }
    }

    #[test]
    fn qi_examples() {
        let q3 = cx(generate::cube(3));
        let r = qi_check(&q3, &contact_graph(&q3)).unwrap();
        assert!(r.clean);
        assert_eq!(r.literal_upper_failures, 3);
        let p5 = cx(generate::path(5));
        let cg = contact_graph(&p5);
        assert_eq!(cg.distance(0, 3), 3);
        assert!(qi_check(&p5, &cg).unwrap().clean);
        for k in [6, 10, 17] {
            let p = cx(generate::path(k));
            let cg = contact_graph(&p);
            let last = k - 2;
            assert_eq!(delta_chain(&p, 0, last).unwrap().length as u32, k - 3);
            assert_eq!(cg.distance(0, last), k - 2);
        }
    }

    #[test]
    fn hagen_on_grid_and_tree() {
        for g in [generate::grid(4, 5), generate::random_tree(15, 2)] {
            let c = cx(g);
            let r = hagen_check(&c, &contact_graph(&c));
            assert!(r.part_i_failures.is_empty() && r.part_ii_failures.is_empty());
        }
    }

    #[test]
    fn four_point_examples() {
        let p5 = contact_graph(&cx(generate::path(5)));
        assert_eq!(four_point_delta(&p5, 300).unwrap().delta, Half(0));
        let q3 = contact_graph(&cx(generate::cube(3)));
        assert_eq!(four_point_delta(&q3, 300).unwrap().delta, Half(0));
        for seed in 0..5 {
            let w = generate::random_wallspace(10, 10, seed).unwrap();
            let c = cx(crate::duality::dual_complex(&w, 16).unwrap().graph);
            let cg = contact_graph(&c);
            assert_eq!(four_point_delta(&cg, 300).unwrap().delta, oracle::gromov_delta(cg.distances()));
        }
        let c = cx(generate::path(5));
        assert!(four_point_delta(&contact_graph(&c), 2).is_err());
    }
}
