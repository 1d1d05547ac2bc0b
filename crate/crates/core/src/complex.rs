//! Finite CAT(0) cube complexes, represented by their 1-skeleta.
//!
//! A finite graph is the 1-skeleton of a CAT(0) cube complex exactly when it
//! is a median graph (Chepoi; Roller). Cubes are never stored: a `k`-cube is
//! a set of `2^k` vertices whose labels differ in `k` fixed coordinates. All
//! other structure is derived from the hyperplanes, computed as
//! Djoković–Winkler classes of edges.
//!
//! Every vertex carries a label: bit `j` is set iff the vertex lies in
//! halfspace `B` of hyperplane `j`. Halfspace `A` is always the one
//! containing vertex 0, so vertex 0 has the all-zero label. Labels embed the
//! graph isometrically into a hypercube, so the combinatorial distance is the
//! Hamming distance of labels.

use std::collections::{HashMap, VecDeque};

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::CubeGraph;
use crate::util::{bits_to_vec, UnionFind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_bit(b: bool) -> Side {
        if b {
            Side::B
        } else {
            Side::A
        }
    }
}

/// Size refusal thresholds for the quadratic and cubic scans.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    pub max_vertices: usize,
    pub max_hyperplanes: usize,
    pub allow_oversize: bool,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_vertices: 50_000,
            max_hyperplanes: 5_000,
            allow_oversize: false,
        }
    }
}

impl Caps {
    pub fn unlimited() -> Self {
        Caps {
            allow_oversize: true,
            ..Caps::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hyperplane {
    pub id: u32,
    pub edges: Vec<u32>,
    pub halfspace_a: Vec<u32>,
    pub halfspace_b: Vec<u32>,
    pub carrier: Vec<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessKind {
    /// The triple has no median.
    NoMedian,
    /// The triple has two or more medians.
    MultipleMedians,
    /// Two of the vertices lie in different components.
    Disconnected,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MedianWitness {
    pub triple: [u32; 3],
    pub medians: Vec<u32>,
    pub kind: WitnessKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub is_median: bool,
    pub witness: Option<MedianWitness>,
    pub vertex_count: usize,
    pub edge_count: usize,
    pub hyperplane_count: Option<usize>,
    pub dimension: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct L1Distance {
    pub distance: u32,
    pub separators: Vec<u32>,
}

/// A validated median graph with its hyperplane structure. Immutable once
/// built; every query is a pure function of it.
#[derive(Debug, Clone)]
pub struct CubeComplex {
    graph: CubeGraph,
    edge_class: Vec<u32>,
    class_edges: Vec<Vec<u32>>,
    labels: Vec<FixedBitSet>,
    label_index: HashMap<FixedBitSet, u32>,
    /// `halfspaces[j][s]`: vertex set of side `s` of hyperplane `j`.
    halfspaces: Vec<[FixedBitSet; 2]>,
    carriers: Vec<FixedBitSet>,
    /// `quads[i * h + j]`, bit `2 s + t`: side `s` of `i` meets side `t` of `j`.
    quads: Vec<u8>,
    transverse: Vec<FixedBitSet>,
    incident_classes: Vec<FixedBitSet>,
    dimension: usize,
}

/// Everything computed by the median test on success.
struct Structure {
    edge_class: Vec<u32>,
    class_edges: Vec<Vec<u32>>,
    labels: Vec<FixedBitSet>,
    label_index: HashMap<FixedBitSet, u32>,
    halfspaces: Vec<[FixedBitSet; 2]>,
    quads: Vec<u8>,
    incident_classes: Vec<FixedBitSet>,
}

enum Failure {
    Witness(MedianWitness),
    /// The graph is not median; search for a triple starting at this vertex.
    SearchFrom(u32),
}

/// Decides whether `g` is a connected median graph.
///
/// The decision does not scan triples. Θ-classes are grown from squares; the
/// graph is median iff (a) every edge flips exactly the label bit of its own
/// class, (b) labels are injective, and (c) every consistent single-bit flip
/// of a vertex label is realized by a neighbor. Then the vertex set is the
/// set of all consistent orientations of the cut system, which is the Sageev
/// dual and hence median; conversely median graphs satisfy (a)-(c). A
/// violating triple is searched for only when the answer is negative.
pub fn validate_median(g: &CubeGraph) -> Result<ValidationReport> {
    if g.vertex_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    let mut report = ValidationReport {
        is_median: false,
        witness: None,
        vertex_count: g.vertex_count(),
        edge_count: g.edge_count(),
        hyperplane_count: None,
        dimension: None,
    };
    match analyze(g) {
        Ok(s) => {
            let transverse = transversality(s.class_edges.len(), &s.quads);
            report.is_median = true;
            report.hyperplane_count = Some(s.class_edges.len());
            report.dimension = Some(max_clique(&transverse).len());
        }
        Err(Failure::Witness(w)) => report.witness = Some(w),
        Err(Failure::SearchFrom(v)) => report.witness = Some(search_witness(g, v)),
    }
    Ok(report)
}

fn analyze(g: &CubeGraph) -> std::result::Result<Structure, Failure> {
    let n = g.vertex_count();
    let (ncomp, comp) = g.components();
    if ncomp > 1 {
        let b = comp.iter().position(|&c| c != 0).unwrap() as u32;
        return Err(Failure::Witness(MedianWitness {
            triple: [0, b, b],
            medians: vec![],
            kind: WitnessKind::Disconnected,
        }));
    }
    let level = g.bfs(0);
    for &(u, v) in g.edges() {
        if level[u as usize] == level[v as usize] {
            // Odd cycle through the root: (0, u, v) has no median.
            return Err(Failure::Witness(MedianWitness {
                triple: [0, u, v],
                medians: vec![],
                kind: WitnessKind::NoMedian,
            }));
        }
    }

    let (edge_class, class_edges) = theta_classes(g);
    let h = class_edges.len();

    // Labels along a BFS tree, then verify every edge.
    let mut labels = vec![FixedBitSet::with_capacity(h); n];
    let mut seen = vec![false; n];
    let mut q = VecDeque::from([0u32]);
    seen[0] = true;
    while let Some(u) = q.pop_front() {
        for (&w, &e) in g.neighbors(u).iter().zip(g.incident_edges(u)) {
            if !seen[w as usize] {
                seen[w as usize] = true;
                let mut l = labels[u as usize].clone();
                l.toggle(edge_class[e as usize] as usize);
                labels[w as usize] = l;
                q.push_back(w);
            }
        }
    }
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        let lu = &labels[u as usize];
        let lv = &labels[v as usize];
        if lu.symmetric_difference_count(lv) != 1 || lu[edge_class[e] as usize] == lv[edge_class[e] as usize]
        {
            return Err(Failure::SearchFrom(u));
        }
    }
    let mut label_index = HashMap::with_capacity(n);
    for (v, l) in labels.iter().enumerate() {
        if label_index.insert(l.clone(), v as u32).is_some() {
            return Err(Failure::SearchFrom(v as u32));
        }
    }

    let mut halfspaces: Vec<[FixedBitSet; 2]> = (0..h)
        .map(|_| [FixedBitSet::with_capacity(n), FixedBitSet::with_capacity(n)])
        .collect();
    for (v, l) in labels.iter().enumerate() {
        for j in 0..h {
            halfspaces[j][l[j] as usize].insert(v);
        }
    }
    let quads = quad_table(&halfspaces);

    let mut incident_classes = vec![FixedBitSet::with_capacity(h); n];
    for v in 0..n as u32 {
        for &e in g.incident_edges(v) {
            incident_classes[v as usize].insert(edge_class[e as usize] as usize);
        }
    }

    // rows[2 i + s]: positions 2 j + t whose halfspace meets side s of i.
    let rows: Vec<FixedBitSet> = (0..2 * h)
        .map(|is| {
            let (i, s) = (is / 2, is % 2);
            let mut r = FixedBitSet::with_capacity(2 * h);
            for j in 0..h {
                for t in 0..2 {
                    if quads[i * h + j] & (1 << (2 * s + t)) != 0 {
                        r.insert(2 * j + t);
                    }
                }
            }
            r
        })
        .collect();
    let bad = (0..n).into_par_iter().find_first(|&v| {
        let l = &labels[v];
        let mut chosen = FixedBitSet::with_capacity(2 * h);
        for j in 0..h {
            chosen.insert(2 * j + l[j] as usize);
        }
        (0..h).any(|i| {
            if incident_classes[v][i] {
                return false;
            }
            let flipped = 2 * i + 1 - l[i] as usize;
            // Everything chosen except (i, l_i) must meet the flipped side.
            chosen.difference_count(&rows[flipped]) == 1
        })
    });
    if let Some(v) = bad {
        return Err(Failure::SearchFrom(v as u32));
    }

    Ok(Structure {
        edge_class,
        class_edges,
        labels,
        label_index,
        halfspaces,
        quads,
        incident_classes,
    })
}

/// Closure of the "opposite sides of a square" relation on edges. Classes
/// are numbered by their smallest edge id.
fn theta_classes(g: &CubeGraph) -> (Vec<u32>, Vec<Vec<u32>>) {
    let m = g.edge_count();
    let mut uf = UnionFind::new(m);
    for u in 0..g.vertex_count() as u32 {
        let ns = g.neighbors(u);
        let es = g.incident_edges(u);
        for ia in 0..ns.len() {
            for ib in ia + 1..ns.len() {
                let (a, b) = (ns[ia], ns[ib]);
                for w in common_neighbors(g.neighbors(a), g.neighbors(b)) {
                    if w == u {
                        continue;
                    }
                    // square u-a-w-b
                    let aw = g.edge_id(a, w).unwrap();
                    let bw = g.edge_id(b, w).unwrap();
                    uf.union(es[ia] as usize, bw as usize);
                    uf.union(es[ib] as usize, aw as usize);
                }
            }
        }
    }
    let mut root_id: HashMap<usize, u32> = HashMap::new();
    let mut edge_class = vec![0u32; m];
    let mut class_edges: Vec<Vec<u32>> = Vec::new();
    for e in 0..m {
        let r = uf.find(e);
        let next = root_id.len() as u32;
        let id = *root_id.entry(r).or_insert(next);
        if id as usize == class_edges.len() {
            class_edges.push(Vec::new());
        }
        edge_class[e] = id;
        class_edges[id as usize].push(e as u32);
    }
    (edge_class, class_edges)
}

fn common_neighbors<'a>(a: &'a [u32], b: &'a [u32]) -> impl Iterator<Item = u32> + 'a {
    let (mut i, mut j) = (0, 0);
    std::iter::from_fn(move || {
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    let x = a[i];
                    i += 1;
                    j += 1;
                    return Some(x);
                }
            }
        }
        None
    })
}

fn quad_table(halfspaces: &[[FixedBitSet; 2]]) -> Vec<u8> {
    let h = halfspaces.len();
    (0..h * h)
        .into_par_iter()
        .map(|ij| {
            let (i, j) = (ij / h, ij % h);
            let mut q = 0u8;
            for s in 0..2 {
                for t in 0..2 {
                    if !halfspaces[i][s].is_disjoint(&halfspaces[j][t]) {
                        q |= 1 << (2 * s + t);
                    }
                }
            }
            q
        })
        .collect()
}

fn transversality(h: usize, quads: &[u8]) -> Vec<FixedBitSet> {
    (0..h)
        .map(|i| {
            let mut row = FixedBitSet::with_capacity(h);
            for j in 0..h {
                if i != j && quads[i * h + j] == 0b1111 {
                    row.insert(j);
                }
            }
            row
        })
        .collect()
}

/// Bron–Kerbosch with pivoting; returns one maximum clique (sorted).
pub(crate) fn max_clique(adj: &[FixedBitSet]) -> Vec<u32> {
    fn rec(
        adj: &[FixedBitSet],
        r: &mut Vec<u32>,
        p: FixedBitSet,
        x: FixedBitSet,
        best: &mut Vec<u32>,
    ) {
        if p.is_clear() && x.is_clear() {
            if r.len() > best.len() {
                *best = r.clone();
            }
            return;
        }
        if r.len() + p.count_ones(..) <= best.len() {
            return;
        }
        let pivot = p
            .ones()
            .chain(x.ones())
            .max_by_key(|&u| p.intersection_count(&adj[u]))
            .unwrap();
        let mut cand = p.clone();
        cand.difference_with(&adj[pivot]);
        let (mut p, mut x) = (p, x);
        for v in cand.ones().collect::<Vec<_>>() {
            r.push(v as u32);
            let mut np = p.clone();
            np.intersect_with(&adj[v]);
            let mut nx = x.clone();
            nx.intersect_with(&adj[v]);
            rec(adj, r, np, nx, best);
            r.pop();
            p.remove(v);
            x.insert(v);
        }
    }
    let n = adj.len();
    let mut best = Vec::new();
    if n == 0 {
        return best;
    }
    let mut p = FixedBitSet::with_capacity(n);
    p.insert_range(..);
    rec(adj, &mut Vec::new(), p, FixedBitSet::with_capacity(n), &mut best);
    best.sort_unstable();
    best
}

/// Exhaustive triple scan for a triple with zero or several medians,
/// starting from `hint` and proceeding in BFS order around it.
fn search_witness(g: &CubeGraph, hint: u32) -> MedianWitness {
    let n = g.vertex_count();
    let d0 = g.bfs(hint);
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.sort_by_key(|&v| (d0[v as usize], v));
    let mut rows: Vec<Option<Vec<u32>>> = vec![None; n];
    let row = |v: u32, rows: &mut Vec<Option<Vec<u32>>>| {
        if rows[v as usize].is_none() {
            rows[v as usize] = Some(g.bfs(v));
        }
    };
    for (ix, &x) in order.iter().enumerate() {
        row(x, &mut rows);
        for (iy, &y) in order.iter().enumerate().skip(ix) {
            row(y, &mut rows);
            let dx = rows[x as usize].as_ref().unwrap();
            let dy = rows[y as usize].as_ref().unwrap();
            let dxy = dx[y as usize];
            let ixy: Vec<u32> = (0..n as u32)
                .filter(|&m| dx[m as usize] + dy[m as usize] == dxy)
                .collect();
            for &z in order.iter().skip(iy) {
                row(z, &mut rows);
                let dx = rows[x as usize].as_ref().unwrap();
                let dy = rows[y as usize].as_ref().unwrap();
                let dz = rows[z as usize].as_ref().unwrap();
                let (dxz, dyz) = (dx[z as usize], dy[z as usize]);
                let medians: Vec<u32> = ixy
                    .iter()
                    .copied()
                    .filter(|&m| {
                        dx[m as usize] + dz[m as usize] == dxz
                            && dy[m as usize] + dz[m as usize] == dyz
                    })
                    .collect();
                if medians.len() != 1 {
                    let mut triple = [x, y, z];
                    triple.sort_unstable();
                    let kind = if medians.is_empty() {
                        WitnessKind::NoMedian
                    } else {
                        WitnessKind::MultipleMedians
                    };
                    return MedianWitness {
                        triple,
                        medians,
                        kind,
                    };
                }
            }
        }
    }
    unreachable!("a non-median connected graph always has a bad triple")
}

impl CubeComplex {
    /// Validates `g` and builds its hyperplane structure. Fails with
    /// [`Error::NotMedian`] when `g` is not a connected median graph.
    pub fn new(g: CubeGraph) -> Result<Self> {
        Self::with_caps(g, &Caps::default())
    }

    pub fn with_caps(g: CubeGraph, caps: &Caps) -> Result<Self> {
        if g.vertex_count() == 0 {
            return Err(Error::EmptyGraph);
        }
        if !caps.allow_oversize && g.vertex_count() > caps.max_vertices {
            return Err(Error::CapExceeded {
                what: "vertex",
                actual: g.vertex_count(),
                cap: caps.max_vertices,
            });
        }
        let s = match analyze(&g) {
            Ok(s) => s,
            Err(Failure::Witness(w)) => {
                return Err(Error::NotMedian {
                    witness: w.triple.to_vec(),
                })
            }
            Err(Failure::SearchFrom(v)) => {
                return Err(Error::NotMedian {
                    witness: search_witness(&g, v).triple.to_vec(),
                })
            }
        };
        let h = s.class_edges.len();
        if !caps.allow_oversize && h > caps.max_hyperplanes {
            return Err(Error::CapExceeded {
                what: "hyperplane",
                actual: h,
                cap: caps.max_hyperplanes,
            });
        }
        let n = g.vertex_count();
        let mut carriers = vec![FixedBitSet::with_capacity(n); h];
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            let c = &mut carriers[s.edge_class[e] as usize];
            c.insert(u as usize);
            c.insert(v as usize);
        }
        let transverse = transversality(h, &s.quads);
        let dimension = max_clique(&transverse).len();
        Ok(CubeComplex {
            graph: g,
            edge_class: s.edge_class,
            class_edges: s.class_edges,
            labels: s.labels,
            label_index: s.label_index,
            halfspaces: s.halfspaces,
            carriers,
            quads: s.quads,
            transverse,
            incident_classes: s.incident_classes,
            dimension,
        })
    }

    pub fn graph(&self) -> &CubeGraph {
        &self.graph
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn hyperplane_count(&self) -> usize {
        self.class_edges.len()
    }

    pub fn check_vertex(&self, v: u32) -> Result<()> {
        self.graph.check_vertex(v)
    }

    pub fn check_hyperplane(&self, j: u32) -> Result<()> {
        if (j as usize) < self.hyperplane_count() {
            Ok(())
        } else {
            Err(Error::UnknownHyperplane(j))
        }
    }

    pub fn validation_report(&self) -> ValidationReport {
        ValidationReport {
            is_median: true,
            witness: None,
            vertex_count: self.vertex_count(),
            edge_count: self.graph.edge_count(),
            hyperplane_count: Some(self.hyperplane_count()),
            dimension: Some(self.dimension),
        }
    }

    pub fn edge_class(&self, e: u32) -> u32 {
        self.edge_class[e as usize]
    }

    pub fn class_edges(&self, j: u32) -> &[u32] {
        &self.class_edges[j as usize]
    }

    pub fn label(&self, v: u32) -> &FixedBitSet {
        &self.labels[v as usize]
    }

    pub fn vertex_with_label(&self, l: &FixedBitSet) -> Option<u32> {
        self.label_index.get(l).copied()
    }

    pub fn side(&self, v: u32, j: u32) -> Side {
        Side::from_bit(self.labels[v as usize][j as usize])
    }

    pub fn halfspace(&self, j: u32, s: Side) -> &FixedBitSet {
        &self.halfspaces[j as usize][s.index()]
    }

    pub fn carrier(&self, j: u32) -> &FixedBitSet {
        &self.carriers[j as usize]
    }

    /// Hyperplanes dual to edges at `v`.
    pub fn incident_classes(&self, v: u32) -> &FixedBitSet {
        &self.incident_classes[v as usize]
    }

    /// Bit `2 s + t` set iff side `s` of `i` meets side `t` of `j`.
    pub fn quad(&self, i: u32, j: u32) -> u8 {
        self.quads[i as usize * self.hyperplane_count() + j as usize]
    }

    pub fn transverse(&self, i: u32, j: u32) -> bool {
        self.transverse[i as usize][j as usize]
    }

    pub fn transverse_row(&self, i: u32) -> &FixedBitSet {
        &self.transverse[i as usize]
    }

    pub fn hyperplane(&self, j: u32) -> Hyperplane {
        Hyperplane {
            id: j,
            edges: self.class_edges[j as usize].clone(),
            halfspace_a: bits_to_vec(self.halfspace(j, Side::A)),
            halfspace_b: bits_to_vec(self.halfspace(j, Side::B)),
            carrier: bits_to_vec(self.carrier(j)),
        }
    }

    pub fn hyperplanes(&self) -> Vec<Hyperplane> {
        (0..self.hyperplane_count() as u32)
            .map(|j| self.hyperplane(j))
            .collect()
    }

    /// Combinatorial distance via the label embedding (no BFS).
    pub fn distance(&self, x: u32, y: u32) -> u32 {
        self.labels[x as usize].symmetric_difference_count(&self.labels[y as usize]) as u32
    }

    pub fn separators(&self, x: u32, y: u32) -> Vec<u32> {
        self.labels[x as usize]
            .symmetric_difference(&self.labels[y as usize])
            .map(|j| j as u32)
            .collect()
    }

    /// Graph distance by BFS together with the separating hyperplanes; the
    /// two are checked against each other.
    pub fn dist_l1(&self, x: u32, y: u32) -> Result<L1Distance> {
        self.check_vertex(x)?;
        self.check_vertex(y)?;
        let distance = self.graph.bfs(x)[y as usize];
        let separators = self.separators(x, y);
        if separators.len() != distance as usize {
            return Err(Error::LawViolation(format!(
                "d({x},{y}) = {distance} but {} hyperplanes separate them",
                separators.len()
            )));
        }
        Ok(L1Distance {
            distance,
            separators,
        })
    }

    /// ℓ∞ distance as the longest chain of pairwise disjoint separators.
    pub fn dist_linf(&self, x: u32, y: u32) -> Result<u32> {
        self.check_vertex(x)?;
        self.check_vertex(y)?;
        Ok(self.disjoint_chain(x, &self.separators(x, y)).len() as u32)
    }

    /// Longest chain of pairwise disjoint hyperplanes among `seps`, which
    /// must all separate `x` from some common vertex. Returned closest to
    /// `x` first.
    pub fn disjoint_chain(&self, x: u32, seps: &[u32]) -> Vec<u32> {
        // Disjoint separators are nested; the one nearer x has the smaller
        // x-side, so sorting by x-side size is a topological order.
        let mut order: Vec<(usize, u32)> = seps
            .iter()
            .map(|&j| (self.halfspace(j, self.side(x, j)).count_ones(..), j))
            .collect();
        order.sort_unstable();
        let k = order.len();
        let mut len = vec![1usize; k];
        let mut prev = vec![usize::MAX; k];
        for b in 0..k {
            for a in 0..b {
                let (ja, jb) = (order[a].1, order[b].1);
                if order[a].0 < order[b].0 && !self.transverse(ja, jb) && len[a] + 1 > len[b] {
                    len[b] = len[a] + 1;
                    prev[b] = a;
                }
            }
        }
        let Some(mut end) = (0..k).max_by_key(|&b| (len[b], std::cmp::Reverse(b))) else {
            return Vec::new();
        };
        let mut chain = Vec::new();
        loop {
            chain.push(order[end].1);
            if prev[end] == usize::MAX {
                break;
            }
            end = prev[end];
        }
        chain.reverse();
        chain
    }

    /// Vertices sharing a cube with `v` (excluding `v`): the neighbors of
    /// `v` in the graph where every cube is made a clique.
    pub fn cube_neighbors(&self, v: u32) -> Vec<u32> {
        let inc: Vec<usize> = self.incident_classes[v as usize].ones().collect();
        let mut out = Vec::new();
        let mut stack: Vec<(usize, Vec<FixedBitSet>)> = vec![(0, vec![self.labels[v as usize].clone()])];
        while let Some((start, cube)) = stack.pop() {
            for (k, &c) in inc.iter().enumerate().skip(start) {
                let mut grown = Vec::with_capacity(cube.len() * 2);
                let mut ok = true;
                for l in &cube {
                    let mut m = l.clone();
                    m.toggle(c);
                    if !self.label_index.contains_key(&m) {
                        ok = false;
                        break;
                    }
                    grown.push(m);
                }
                if !ok {
                    continue;
                }
                for m in &grown {
                    out.push(self.label_index[m]);
                }
                let mut next = cube.clone();
                next.extend(grown);
                stack.push((k + 1, next));
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// ℓ∞ distances from `x` by BFS in the cube-diagonal graph.
    pub fn linf_bfs(&self, x: u32) -> Vec<u32> {
        let n = self.vertex_count();
        let mut dist = vec![u32::MAX; n];
        dist[x as usize] = 0;
        let mut q = VecDeque::from([x]);
        while let Some(u) = q.pop_front() {
            for w in self.cube_neighbors(u) {
                if dist[w as usize] == u32::MAX {
                    dist[w as usize] = dist[u as usize] + 1;
                    q.push_back(w);
                }
            }
        }
        dist
    }

    /// ℓ∞ distance computed both ways; errors if they disagree.
    pub fn dist_linf_checked(&self, x: u32, y: u32) -> Result<u32> {
        let chain = self.dist_linf(x, y)?;
        let bfs = self.linf_bfs(x)[y as usize];
        if chain != bfs {
            return Err(Error::LawViolation(format!(
                "d_inf({x},{y}): chain {chain} vs cube-diagonal BFS {bfs}"
            )));
        }
        Ok(chain)
    }

    /// The unique vertex on geodesics between every pair of `x, y, z`:
    /// coordinatewise majority of labels.
    pub fn median(&self, x: u32, y: u32, z: u32) -> Result<u32> {
        for v in [x, y, z] {
            self.check_vertex(v)?;
        }
        Ok(self.median_unchecked(x, y, z))
    }

    pub(crate) fn median_unchecked(&self, x: u32, y: u32, z: u32) -> u32 {
        let (a, b, c) = (
            self.labels[x as usize].as_slice(),
            self.labels[y as usize].as_slice(),
            self.labels[z as usize].as_slice(),
        );
        let blocks: Vec<usize> = (0..a.len())
            .map(|k| (a[k] & b[k]) | (b[k] & c[k]) | (a[k] & c[k]))
            .collect();
        let m = FixedBitSet::with_capacity_and_blocks(self.hyperplane_count(), blocks);
        *self
            .label_index
            .get(&m)
            .expect("median graphs are closed under majority")
    }

    pub fn interval(&self, x: u32, y: u32) -> Result<Vec<u32>> {
        self.check_vertex(x)?;
        self.check_vertex(y)?;
        let dxy = self.distance(x, y);
        Ok((0..self.vertex_count() as u32)
            .filter(|&u| self.distance(x, u) + self.distance(u, y) == dxy)
            .collect())
    }

    /// Largest family of pairwise transverse hyperplanes. By the Helly
    /// property of halfspaces this equals the largest cube dimension.
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn max_transverse_family(&self) -> Vec<u32> {
        max_clique(&self.transverse)
    }

    /// A geodesic from `x` to `y` choosing the smallest-id neighbor at each
    /// step.
    pub fn geodesic(&self, x: u32, y: u32) -> Result<Vec<u32>> {
        self.check_vertex(x)?;
        self.check_vertex(y)?;
        let mut path = vec![x];
        let mut cur = x;
        while cur != y {
            let d = self.distance(cur, y);
            cur = *self
                .graph
                .neighbors(cur)
                .iter()
                .find(|&&w| self.distance(w, y) < d)
                .expect("some neighbor is closer in a connected graph");
            path.push(cur);
        }
        Ok(path)
    }

    pub fn check_geodesic(&self, path: &[u32]) -> Result<()> {
        let (Some(&first), Some(&last)) = (path.first(), path.last()) else {
            return Err(Error::NotGeodesic("empty path".into()));
        };
        for &v in path {
            self.check_vertex(v)?;
        }
        if let Some(w) = path.windows(2).find(|w| !self.graph.has_edge(w[0], w[1])) {
            return Err(Error::NotGeodesic(format!("{} and {} are not adjacent", w[0], w[1])));
        }
        let d = self.distance(first, last) as usize;
        if path.len() - 1 != d {
            return Err(Error::NotGeodesic(format!(
                "path has length {} but d({first},{last}) = {d}",
                path.len() - 1
            )));
        }
        Ok(())
    }

    /// Hyperplanes with vertices of `set` on both sides.
    pub fn crossing(&self, set: &FixedBitSet) -> Vec<u32> {
        (0..self.hyperplane_count() as u32)
            .filter(|&j| {
                !set.is_disjoint(self.halfspace(j, Side::A)) && !set.is_disjoint(self.halfspace(j, Side::B))
            })
            .collect()
    }

    pub fn vertex_set(&self, vs: &[u32]) -> Result<FixedBitSet> {
        let mut s = FixedBitSet::with_capacity(self.vertex_count());
        for &v in vs {
            self.check_vertex(v)?;
            s.insert(v as usize);
        }
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;

    fn c6() -> CubeGraph {
        CubeGraph::new(6, (0..6).map(|i| (i, (i + 1) % 6))).unwrap()
    }

    #[test]
    fn q3_is_median() {
        let r = validate_median(&generate::cube(3)).unwrap();
        assert!(r.is_median);
        assert_eq!(r.witness, None);
        assert_eq!((r.vertex_count, r.edge_count), (8, 12));
        assert_eq!(r.hyperplane_count, Some(3));
        assert_eq!(r.dimension, Some(3));
    }

    #[test]
    fn triangle_fails_with_full_witness() {
        let k3 = CubeGraph::new(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let r = validate_median(&k3).unwrap();
        assert!(!r.is_median);
        let w = r.witness.unwrap();
        assert_eq!(w.triple, [0, 1, 2]);
        assert!(w.medians.is_empty());
        assert_eq!(r.hyperplane_count, None);
    }

    #[test]
    fn six_cycle_fails() {
        let r = validate_median(&c6()).unwrap();
        assert!(!r.is_median);
        let w = r.witness.unwrap();
        // Antipodal-free triple on C6 has no median; confirm with the oracle.
        let count = crate::oracle::median_count(&c6(), w.triple);
        assert_ne!(count, 1);
        assert_eq!(count, w.medians.len());
    }

    #[test]
    fn k23_fails_with_two_medians() {
        let g = CubeGraph::new(5, [(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)]).unwrap();
        let r = validate_median(&g).unwrap();
        assert!(!r.is_median);
        let w = r.witness.unwrap();
        assert_eq!(crate::oracle::median_count(&g, w.triple), w.medians.len());
    }

    #[test]
    fn disconnected_and_empty() {
        let g = CubeGraph::new(3, [(0, 1)]).unwrap();
        let r = validate_median(&g).unwrap();
        assert!(!r.is_median);
        assert_eq!(r.witness.unwrap().kind, WitnessKind::Disconnected);
        let e = CubeGraph::new(0, []).unwrap();
        assert!(matches!(validate_median(&e), Err(Error::EmptyGraph)));
    }

    #[test]
    fn single_vertex_is_a_point_complex() {
        let cx = CubeComplex::new(CubeGraph::new(1, []).unwrap()).unwrap();
        assert_eq!(cx.hyperplane_count(), 0);
        assert_eq!(cx.dimension(), 0);
        assert_eq!(cx.median(0, 0, 0).unwrap(), 0);
    }

    #[test]
    fn hyperplane_examples() {
        let q3 = CubeComplex::new(generate::cube(3)).unwrap();
        assert_eq!(q3.hyperplane_count(), 3);
        assert!(q3.hyperplanes().iter().all(|h| h.edges.len() == 4));

        let p5 = CubeComplex::new(generate::path(5)).unwrap();
        assert_eq!(p5.hyperplane_count(), 4);
        assert!(p5.hyperplanes().iter().all(|h| h.edges.len() == 1));

        let grid = CubeComplex::new(generate::grid(3, 3)).unwrap();
        assert_eq!(grid.hyperplane_count(), 4);
        assert!(grid.hyperplanes().iter().all(|h| h.edges.len() == 3));
        // Oracle: brute-force Θ on the raw graph.
        let oracle = crate::oracle::djokovic_winkler_classes(grid.graph());
        let ours: Vec<Vec<u32>> = grid.hyperplanes().into_iter().map(|h| h.edges).collect();
        assert_eq!(ours, oracle);
    }

    #[test]
    fn halfspace_a_contains_vertex_zero_and_edges_cross() {
        let cx = CubeComplex::new(generate::grid(3, 4)).unwrap();
        for h in cx.hyperplanes() {
            assert_eq!(h.halfspace_a[0], 0);
            for &e in &h.edges {
                let (u, v) = cx.graph().edge(e);
                assert_ne!(cx.side(u, h.id), cx.side(v, h.id));
            }
        }
    }

    #[test]
    fn l1_examples() {
        let q3 = CubeComplex::new(generate::cube(3)).unwrap();
        let d = q3.dist_l1(0, 7).unwrap();
        assert_eq!(d.distance, 3);
        assert_eq!(d.separators, vec![0, 1, 2]);
        let d = q3.dist_l1(5, 5).unwrap();
        assert_eq!((d.distance, d.separators.len()), (0, 0));
        let p5 = CubeComplex::new(generate::path(5)).unwrap();
        let d = p5.dist_l1(0, 4).unwrap();
        assert_eq!(d.distance, 4);
        assert_eq!(d.separators, vec![0, 1, 2, 3]);
        assert!(matches!(p5.dist_l1(0, 9), Err(Error::UnknownVertex(9))));
    }

    #[test]
    fn linf_examples() {
        let q3 = CubeComplex::new(generate::cube(3)).unwrap();
        assert_eq!(q3.dist_linf_checked(0, 7).unwrap(), 1);
        let p5 = CubeComplex::new(generate::path(5)).unwrap();
        assert_eq!(p5.dist_linf_checked(0, 4).unwrap(), 4);
        let grid = CubeComplex::new(generate::grid(3, 3)).unwrap();
        assert_eq!(grid.dist_linf_checked(0, 8).unwrap(), 2);
        assert_eq!(crate::oracle::linf_by_disjoint_families(&grid, 0, 8), 2);
    }

    #[test]
    fn median_and_interval_examples() {
        let q3 = CubeComplex::new(generate::cube(3)).unwrap();
        // 000, 011, 101 with bit k = coordinate k+1, written x1 x2 x3
        let (a, b, c) = (0b000, 0b110, 0b101);
        assert_eq!(q3.median(a, b, c).unwrap(), 0b100);
        let p5 = CubeComplex::new(generate::path(5)).unwrap();
        assert_eq!(p5.interval(0, 2).unwrap(), vec![0, 1, 2]);
        let grid = CubeComplex::new(generate::grid(3, 3)).unwrap();
        for t in [[0, 2, 6], [2, 6, 8], [0, 2, 8], [0, 6, 8]] {
            let m = grid.median(t[0], t[1], t[2]).unwrap();
            assert_eq!(Some(m), crate::oracle::brute_median(grid.graph(), t));
        }
    }

    #[test]
    fn dimension_examples() {
        assert_eq!(CubeComplex::new(generate::cube(3)).unwrap().dimension(), 3);
        assert_eq!(CubeComplex::new(generate::path(6)).unwrap().dimension(), 1);
        let grid = CubeComplex::new(generate::grid(3, 3)).unwrap();
        assert_eq!(grid.dimension(), 2);
        assert_eq!(crate::oracle::largest_cube(&grid), 2);
    }

    #[test]
    fn caps_refuse_and_override() {
        let caps = Caps {
            max_vertices: 4,
            ..Caps::default()
        };
        assert!(matches!(
            CubeComplex::with_caps(generate::cube(3), &caps),
            Err(Error::CapExceeded { .. })
        ));
        let caps = Caps {
            allow_oversize: true,
            ..caps
        };
        assert!(CubeComplex::with_caps(generate::cube(3), &caps).is_ok());
    }

    #[test]
    fn geodesic_checks() {
        let grid = CubeComplex::new(generate::grid(3, 3)).unwrap();
        let g = grid.geodesic(0, 8).unwrap();
        assert_eq!(g.len(), 5);
        grid.check_geodesic(&g).unwrap();
        assert!(matches!(grid.check_geodesic(&[0, 1, 0]), Err(Error::NotGeodesic(_))));
        assert!(matches!(grid.check_geodesic(&[0, 4]), Err(Error::NotGeodesic(_))));
    }
}
