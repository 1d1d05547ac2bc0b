//! Simple undirected graphs with dense vertex ids.
//!
//! A [`CubeGraph`] is the raw input to everything else: a finite simple
//! graph whose edges are kept sorted so that edge ids are stable. Whether it
//! is actually the 1-skeleton of a CAT(0) cube complex is decided by
//! [`crate::complex::validate_median`].

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Wire format: `{"vertices": n, "edges": [[u, v], ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub vertices: u32,
    pub edges: Vec<[u32; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubeGraph {
    n: u32,
    /// Sorted, each pair `(u, v)` with `u < v`. Index = edge id.
    edges: Vec<(u32, u32)>,
    offsets: Vec<usize>,
    /// Neighbor lists, sorted per vertex.
    nbrs: Vec<u32>,
    /// Edge id for each entry of `nbrs`.
    nbr_edges: Vec<u32>,
}

impl CubeGraph {
    /// Builds a graph, rejecting loops, duplicate edges and out-of-range ids.
    /// Edge orientation and order in the input are irrelevant.
    pub fn new(n: u32, edges: impl IntoIterator<Item = (u32, u32)>) -> Result<Self> {
        let mut es: Vec<(u32, u32)> = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::Structural(format!(
                    "edge ({u}, {v}) references a vertex outside 0..{n}"
                )));
            }
            if u == v {
                return Err(Error::Structural(format!("loop at vertex {u}")));
            }
            es.push((u.min(v), u.max(v)));
        }
        es.sort_unstable();
        if let Some(w) = es.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Structural(format!(
                "duplicate edge ({}, {})",
                w[0].0, w[0].1
            )));
        }

        let mut deg = vec![0usize; n as usize];
        for &(u, v) in &es {
            deg[u as usize] += 1;
            deg[v as usize] += 1;
        }
        let mut offsets = vec![0usize; n as usize + 1];
        for i in 0..n as usize {
            offsets[i + 1] = offsets[i] + deg[i];
        }
        let mut fill = offsets.clone();
        let mut nbrs = vec![0u32; offsets[n as usize]];
        let mut nbr_edges = vec![0u32; offsets[n as usize]];
        for (id, &(u, v)) in es.iter().enumerate() {
            for (a, b) in [(u, v), (v, u)] {
                let slot = &mut fill[a as usize];
                nbrs[*slot] = b;
                nbr_edges[*slot] = id as u32;
                *slot += 1;
            }
        }
        for i in 0..n as usize {
            let (s, e) = (offsets[i], offsets[i + 1]);
            let mut pairs: Vec<(u32, u32)> = nbrs[s..e]
                .iter()
                .copied()
                .zip(nbr_edges[s..e].iter().copied())
                .collect();
            pairs.sort_unstable();
            for (k, (b, id)) in pairs.into_iter().enumerate() {
                nbrs[s + k] = b;
                nbr_edges[s + k] = id;
            }
        }
        Ok(CubeGraph {
            n,
            edges: es,
            offsets,
            nbrs,
            nbr_edges,
        })
    }

    pub fn from_json(j: &GraphJson) -> Result<Self> {
        Self::new(j.vertices, j.edges.iter().map(|e| (e[0], e[1])))
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            vertices: self.n,
            edges: self.edges.iter().map(|&(u, v)| [u, v]).collect(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.n as usize
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn edge(&self, id: u32) -> (u32, u32) {
        self.edges[id as usize]
    }

    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.nbrs[self.offsets[v as usize]..self.offsets[v as usize + 1]]
    }

    /// Edge ids aligned with [`Self::neighbors`].
    pub fn incident_edges(&self, v: u32) -> &[u32] {
        &self.nbr_edges[self.offsets[v as usize]..self.offsets[v as usize + 1]]
    }

    pub fn degree(&self, v: u32) -> usize {
        self.offsets[v as usize + 1] - self.offsets[v as usize]
    }

    pub fn edge_id(&self, u: u32, v: u32) -> Option<u32> {
        let ns = self.neighbors(u);
        ns.binary_search(&v)
            .ok()
            .map(|k| self.incident_edges(u)[k])
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        u < self.n && v < self.n && self.neighbors(u).binary_search(&v).is_ok()
    }

    pub fn check_vertex(&self, v: u32) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::UnknownVertex(v))
        }
    }

    /// BFS distances from `src`; unreachable vertices get `u32::MAX`.
    pub fn bfs(&self, src: u32) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.n as usize];
        let mut q = VecDeque::new();
        dist[src as usize] = 0;
        q.push_back(src);
        while let Some(u) = q.pop_front() {
            let du = dist[u as usize];
            for &w in self.neighbors(u) {
                if dist[w as usize] == u32::MAX {
                    dist[w as usize] = du + 1;
                    q.push_back(w);
                }
            }
        }
        dist
    }

    /// Component id per vertex, numbered in order of smallest member.
    pub fn components(&self) -> (usize, Vec<u32>) {
        let mut comp = vec![u32::MAX; self.n as usize];
        let mut count = 0u32;
        let mut stack = Vec::new();
        for s in 0..self.n {
            if comp[s as usize] != u32::MAX {
                continue;
            }
            comp[s as usize] = count;
            stack.push(s);
            while let Some(u) = stack.pop() {
                for &w in self.neighbors(u) {
                    if comp[w as usize] == u32::MAX {
                        comp[w as usize] = count;
                        stack.push(w);
                    }
                }
            }
            count += 1;
        }
        (count as usize, comp)
    }

    /// Cartesian product; vertex `(a, b)` gets id `a * |other| + b`.
    pub fn product(&self, other: &CubeGraph) -> CubeGraph {
        let m = other.n;
        let mut es = Vec::new();
        for a in 0..self.n {
            for &(u, v) in other.edges() {
                es.push((a * m + u, a * m + v));
            }
        }
        for &(u, v) in self.edges() {
            for b in 0..m {
                es.push((u * m + b, v * m + b));
            }
        }
        CubeGraph::new(self.n * m, es).expect("product of simple graphs is simple")
    }

    /// Relabels vertices: vertex `v` becomes `perm[v]`.
    pub fn relabel(&self, perm: &[u32]) -> Result<CubeGraph> {
        if perm.len() != self.n as usize {
            return Err(Error::InvalidArgument("permutation length mismatch".into()));
        }
        let mut seen = vec![false; perm.len()];
        for &p in perm {
            if p >= self.n || std::mem::replace(&mut seen[p as usize], true) {
                return Err(Error::InvalidArgument("not a permutation".into()));
            }
        }
        CubeGraph::new(
            self.n,
            self.edges
                .iter()
                .map(|&(u, v)| (perm[u as usize], perm[v as usize])),
        )
    }
}
