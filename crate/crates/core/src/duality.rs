//! Wallspaces, their dual cube complexes, restriction quotients and the
//! product decomposition.
//!
//! The dual of a finite wallspace has one vertex per consistent orientation
//! (a choice of one side per wall, no two chosen sides disjoint) and an edge
//! between orientations differing on exactly one wall. With finitely many
//! walls every consistent orientation is reachable from a principal one by
//! single flips, so the vertex set is built by BFS.

use std::collections::{HashMap, VecDeque};

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complex::{CubeComplex, Side};
use crate::error::{Error, Result};
use crate::graph::CubeGraph;
use crate::util::bits_to_vec;

pub const DEFAULT_WALL_CAP: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "WallspaceJson", into = "WallspaceJson")]
pub struct Wallspace {
    ground: u32,
    walls: Vec<[Vec<u32>; 2]>,
}

#[derive(Serialize, Deserialize)]
struct WallspaceJson {
    ground: u32,
    walls: Vec<[Vec<u32>; 2]>,
}

impl TryFrom<WallspaceJson> for Wallspace {
    type Error = Error;
    fn try_from(j: WallspaceJson) -> Result<Self> {
        Wallspace::new(j.ground, j.walls)
    }
}

impl From<Wallspace> for WallspaceJson {
    fn from(w: Wallspace) -> Self {
        WallspaceJson {
            ground: w.ground,
            walls: w.walls,
        }
    }
}

impl Wallspace {
    /// Validates that every wall partitions `0..ground` into two nonempty
    /// sides and that no bipartition occurs twice (in either orientation).
    pub fn new(ground: u32, walls: Vec<[Vec<u32>; 2]>) -> Result<Self> {
        if ground == 0 {
            return Err(Error::InvalidWallspace("empty ground set".into()));
        }
        let mut seen: HashMap<Vec<bool>, usize> = HashMap::new();
        let mut out = Vec::with_capacity(walls.len());
        for (i, [a, b]) in walls.into_iter().enumerate() {
            if a.is_empty() || b.is_empty() {
                return Err(Error::InvalidWallspace(format!("wall {i} has an empty side")));
            }
            let mut side = vec![None; ground as usize];
            for (s, part) in [(false, &a), (true, &b)] {
                for &p in part {
                    let slot = side.get_mut(p as usize).ok_or_else(|| {
                        Error::InvalidWallspace(format!("wall {i} mentions point {p} outside 0..{ground}"))
                    })?;
                    if slot.replace(s).is_some() {
                        return Err(Error::InvalidWallspace(format!(
                            "wall {i} lists point {p} twice"
                        )));
                    }
                }
            }
            if let Some(p) = side.iter().position(Option::is_none) {
                return Err(Error::InvalidWallspace(format!("wall {i} does not cover point {p}")));
            }
            let side: Vec<bool> = side.into_iter().map(Option::unwrap).collect();
            let key: Vec<bool> = side.iter().map(|&s| s != side[0]).collect();
            if let Some(j) = seen.insert(key, i) {
                return Err(Error::InvalidWallspace(format!("walls {j} and {i} coincide")));
            }
            let (mut a, mut b) = (a, b);
            a.sort_unstable();
            b.sort_unstable();
            out.push([a, b]);
        }
        Ok(Wallspace { ground, walls: out })
    }

    pub fn ground(&self) -> u32 {
        self.ground
    }

    pub fn walls(&self) -> &[[Vec<u32>; 2]] {
        &self.walls
    }

    /// Side of point `p` with respect to wall `i`.
    pub fn side_of(&self, i: usize, p: u32) -> Side {
        if self.walls[i][0].binary_search(&p).is_ok() {
            Side::A
        } else {
            Side::B
        }
    }
}

#[derive(Debug, Clone)]
pub struct DualComplex {
    pub graph: CubeGraph,
    /// Orientation of each dual vertex: bit `i` set iff side `B` of wall `i`.
    pub orientations: Vec<FixedBitSet>,
    /// `wall_to_hyperplane[i]`: hyperplane of `graph` dual to wall `i`.
    pub wall_to_hyperplane: Vec<u32>,
    /// `principal[p]`: the dual vertex given by the principal orientation at
    /// ground point `p`.
    pub principal: Vec<u32>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DualReport {
    pub graph: crate::graph::GraphJson,
    pub wall_to_hyperplane: Vec<u32>,
    pub principal: Vec<u32>,
}

impl DualComplex {
    pub fn report(&self) -> DualReport {
        DualReport {
            graph: self.graph.to_json(),
            wall_to_hyperplane: self.wall_to_hyperplane.clone(),
            principal: self.principal.clone(),
        }
    }
}

/// Builds the dual cube complex. Refuses more than `wall_cap` walls.
pub fn dual_complex(w: &Wallspace, wall_cap: usize) -> Result<DualComplex> {
    let m = w.walls.len();
    if m > wall_cap {
        return Err(Error::CapExceeded {
            what: "wall",
            actual: m,
            cap: wall_cap,
        });
    }
    let n = w.ground as usize;
    let side_sets: Vec<[FixedBitSet; 2]> = w
        .walls
        .iter()
        .map(|[a, b]| {
            let mut sa = FixedBitSet::with_capacity(n);
            let mut sb = FixedBitSet::with_capacity(n);
            a.iter().for_each(|&p| sa.insert(p as usize));
            b.iter().for_each(|&p| sb.insert(p as usize));
            [sa, sb]
        })
        .collect();
    // meets[2i + s] has bit 2j + t iff side s of i meets side t of j.
    let meets: Vec<FixedBitSet> = (0..2 * m)
        .map(|is| {
            let mut r = FixedBitSet::with_capacity(2 * m);
            for jt in 0..2 * m {
                if !side_sets[is / 2][is % 2].is_disjoint(&side_sets[jt / 2][jt % 2]) {
                    r.insert(jt);
                }
            }
            r
        })
        .collect();
    let principal_of = |p: usize| {
        let mut o = FixedBitSet::with_capacity(m);
        for (i, s) in side_sets.iter().enumerate() {
            o.set(i, s[1][p]);
        }
        o
    };
    let consistent_flip = |o: &FixedBitSet, i: usize| {
        let target = 2 * i + 1 - o[i] as usize;
        (0..m).all(|j| j == i || meets[target][2 * j + o[j] as usize])
    };

    let start = principal_of(0);
    let mut index: HashMap<FixedBitSet, u32> = HashMap::from([(start.clone(), 0)]);
    let mut orientations = vec![start];
    let mut edges = Vec::new();
    let mut q = VecDeque::from([0u32]);
    while let Some(u) = q.pop_front() {
        let o = orientations[u as usize].clone();
        for i in 0..m {
            if !consistent_flip(&o, i) {
                continue;
            }
            let mut f = o.clone();
            f.toggle(i);
            let v = match index.get(&f) {
                Some(&v) => v,
                None => {
                    let v = orientations.len() as u32;
                    index.insert(f.clone(), v);
                    orientations.push(f);
                    q.push_back(v);
                    v
                }
            };
            if u < v {
                edges.push((u, v));
            }
        }
    }
    let graph = CubeGraph::new(orientations.len() as u32, edges)?;
    let cx = CubeComplex::with_caps(graph.clone(), &crate::complex::Caps::unlimited())
        .map_err(|e| Error::LawViolation(format!("dual complex failed median validation: {e}")))?;
    let mut wall_to_hyperplane = vec![u32::MAX; m];
    for (e, &(u, v)) in graph.edges().iter().enumerate() {
        let i = orientations[u as usize]
            .symmetric_difference(&orientations[v as usize])
            .next()
            .unwrap();
        wall_to_hyperplane[i] = cx.edge_class(e as u32);
    }
    if let Some(i) = wall_to_hyperplane.iter().position(|&h| h == u32::MAX) {
        return Err(Error::LawViolation(format!("wall {i} has no dual edge")));
    }
    let principal = (0..n).map(|p| index[&principal_of(p)]).collect();
    Ok(DualComplex {
        graph,
        orientations,
        wall_to_hyperplane,
        principal,
    })
}

/// The halfspace walls of a complex: ground set = vertices.
pub fn walls_of(cx: &CubeComplex) -> Wallspace {
    let walls = (0..cx.hyperplane_count() as u32)
        .map(|j| [bits_to_vec(cx.halfspace(j, Side::A)), bits_to_vec(cx.halfspace(j, Side::B))])
        .collect();
    Wallspace {
        ground: cx.vertex_count() as u32,
        walls,
    }
}

/// Checks that the principal map of `dual(walls_of(cx))` is a graph
/// isomorphism from `cx` onto the dual.
pub fn round_trip(cx: &CubeComplex) -> Result<DualComplex> {
    let d = dual_complex(&walls_of(cx), usize::MAX)?;
    let g = cx.graph();
    if d.graph.vertex_count() != g.vertex_count() || d.graph.edge_count() != g.edge_count() {
        return Err(Error::LawViolation(format!(
            "dual has {} vertices / {} edges, original {} / {}",
            d.graph.vertex_count(),
            d.graph.edge_count(),
            g.vertex_count(),
            g.edge_count()
        )));
    }
    let mut hit = vec![false; g.vertex_count()];
    for &p in &d.principal {
        if std::mem::replace(&mut hit[p as usize], true) {
            return Err(Error::LawViolation("principal map is not injective".into()));
        }
    }
    for &(u, v) in g.edges() {
        if !d.graph.has_edge(d.principal[u as usize], d.principal[v as usize]) {
            return Err(Error::LawViolation(format!("edge ({u}, {v}) not preserved")));
        }
    }
    Ok(d)
}

#[derive(Debug, Clone, Serialize)]
pub struct Quotient {
    pub graph: crate::graph::GraphJson,
    /// Image of each original vertex.
    pub map: Vec<u32>,
    /// `hyperplanes[i]`: original hyperplane dual to quotient hyperplane `i`.
    pub hyperplanes: Vec<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
    #[serde(skip)]
    pub complex: CubeComplex,
}

/// Collapses every hyperplane outside `k`. Vertices of the quotient are
/// classes of vertices not separated by any member of `k`, numbered by first
/// appearance.
pub fn restriction_quotient(cx: &CubeComplex, k: &[u32]) -> Result<Quotient> {
    let mut k = k.to_vec();
    k.sort_unstable();
    k.dedup();
    for &j in &k {
        cx.check_hyperplane(j)?;
    }
    let n = cx.vertex_count();
    let mut class_of: HashMap<Vec<bool>, u32> = HashMap::new();
    let mut map = Vec::with_capacity(n);
    for v in 0..n as u32 {
        let key: Vec<bool> = k.iter().map(|&j| cx.label(v)[j as usize]).collect();
        let next = class_of.len() as u32;
        map.push(*class_of.entry(key).or_insert(next));
    }
    let mut edges: Vec<(u32, u32)> = Vec::new();
    for (e, &(u, v)) in cx.graph().edges().iter().enumerate() {
        if k.binary_search(&cx.edge_class(e as u32)).is_ok() {
            let (a, b) = (map[u as usize], map[v as usize]);
            edges.push((a.min(b), a.max(b)));
        }
    }
    edges.sort_unstable();
    edges.dedup();
    let graph = CubeGraph::new(class_of.len() as u32, edges)?;
    let q = CubeComplex::with_caps(graph, &crate::complex::Caps::unlimited())?;
    let mut hyperplanes = vec![u32::MAX; q.hyperplane_count()];
    for (e, &(u, v)) in cx.graph().edges().iter().enumerate() {
        let j = cx.edge_class(e as u32);
        if k.binary_search(&j).is_ok() {
            let qe = q.graph().edge_id(map[u as usize], map[v as usize]).unwrap();
            let slot = &mut hyperplanes[q.edge_class(qe) as usize];
            if *slot != u32::MAX && *slot != j {
                return Err(Error::LawViolation(format!(
                    "quotient hyperplane receives both {} and {j}",
                    *slot
                )));
            }
            *slot = j;
        }
    }
    if hyperplanes.len() != k.len() {
        return Err(Error::LawViolation(format!(
            "quotient has {} hyperplanes for {} kept",
            hyperplanes.len(),
            k.len()
        )));
    }
    let warning = k
        .is_empty()
        .then(|| "empty hyperplane set: quotient is a single point".to_string());
    if let Some(w) = &warning {
        log::warn!("{w}");
    }
    Ok(Quotient {
        graph: q.graph().to_json(),
        map,
        hyperplanes,
        warning,
        complex: q,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct Decomposition {
    pub classes: Vec<Vec<u32>>,
    pub factors: Vec<Quotient>,
}

/// Splits the complex as a product: classes are the connected components of
/// the non-transversality graph on hyperplanes, factors their restriction
/// quotients. Verifies that the vertex map into the product is a bijection
/// and that distances add up.
pub fn irreducible_decompose(cx: &CubeComplex) -> Result<Decomposition> {
    let h = cx.hyperplane_count();
    let mut comp = vec![u32::MAX; h];
    let mut classes: Vec<Vec<u32>> = Vec::new();
    for s in 0..h {
        if comp[s] != u32::MAX {
            continue;
        }
        let id = classes.len() as u32;
        let mut members = vec![s as u32];
        comp[s] = id;
        let mut stack = vec![s];
        while let Some(i) = stack.pop() {
            for j in 0..h {
                if j != i && comp[j] == u32::MAX && !cx.transverse(i as u32, j as u32) {
                    comp[j] = id;
                    members.push(j as u32);
                    stack.push(j);
                }
            }
        }
        members.sort_unstable();
        classes.push(members);
    }
    let factors = classes
        .iter()
        .map(|c| restriction_quotient(cx, c))
        .collect::<Result<Vec<_>>>()?;
    check_product_law(cx, &factors)?;
    Ok(Decomposition { classes, factors })
}

fn check_product_law(cx: &CubeComplex, factors: &[Quotient]) -> Result<()> {
    let n = cx.vertex_count();
    let product: usize = factors.iter().map(|f| f.complex.vertex_count()).product();
    if product != n {
        return Err(Error::LawViolation(format!(
            "product of factor sizes {product} differs from {n} vertices"
        )));
    }
    let mut seen = HashMap::with_capacity(n);
    for v in 0..n {
        let key: Vec<u32> = factors.iter().map(|f| f.map[v]).collect();
        if let Some(u) = seen.insert(key, v) {
            return Err(Error::LawViolation(format!(
                "vertices {u} and {v} have the same image in the product"
            )));
        }
    }
    let bad = (0..n as u32).into_par_iter().find_map_first(|x| {
        (x..n as u32).find_map(|y| {
            let sum: u32 = factors
                .iter()
                .map(|f| f.complex.distance(f.map[x as usize], f.map[y as usize]))
                .sum();
            let d = cx.distance(x, y);
            (sum != d).then_some((x, y, d, sum))
        })
    });
    if let Some((x, y, d, sum)) = bad {
        return Err(Error::LawViolation(format!(
            "d({x},{y}) = {d} but factor distances sum to {sum}"
        )));
    }
    Ok(())
}
