//! Deterministic generators for the test corpus and the `generate` command.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::duality::Wallspace;
use crate::error::{Error, Result};
use crate::graph::CubeGraph;

/// Largest `n` accepted by [`cube`].
pub const MAX_CUBE_DIM: u32 = 16;
/// Largest depth accepted by [`coset_tree`].
pub const MAX_COSET_DEPTH: u32 = 16;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The `n`-cube; vertex ids are bitmasks, so coordinate `k` is bit `k`.
pub fn cube(n: u32) -> CubeGraph {
    assert!(n <= MAX_CUBE_DIM, "cube dimension {n} too large");
    let mut es = Vec::new();
    for v in 0..1u32 << n {
        for k in 0..n {
            if v & (1 << k) == 0 {
                es.push((v, v | (1 << k)));
            }
        }
    }
    CubeGraph::new(1 << n, es).unwrap()
}

/// Path with `n ≥ 1` vertices `0 - 1 - ... - (n-1)`.
pub fn path(n: u32) -> CubeGraph {
    assert!(n >= 1);
    CubeGraph::new(n, (1..n).map(|i| (i - 1, i))).unwrap()
}

/// `P_a × P_b`; vertex `(r, c)` has id `r * b + c`.
pub fn grid(a: u32, b: u32) -> CubeGraph {
    path(a).product(&path(b))
}

/// Star with center 0 and leaves `1..=k`.
pub fn star(k: u32) -> CubeGraph {
    CubeGraph::new(k + 1, (1..=k).map(|i| (0, i))).unwrap()
}

/// Random recursive tree: vertex `i` attaches to a uniform earlier vertex.
pub fn random_tree(n: u32, seed: u64) -> CubeGraph {
    assert!(n >= 1);
    let mut r = rng(seed);
    CubeGraph::new(n, (1..n).map(|i| (r.gen_range(0..i), i))).unwrap()
}

/// `m` distinct walls cut from `k` random integer points in the plane.
/// Each wall separates the points by a line with a random integer normal;
/// the dual of such a wallspace has dimension at most 2.
pub fn random_wallspace(k: u32, m: u32, seed: u64) -> Result<Wallspace> {
    if k < 2 {
        return Err(Error::InvalidArgument("need at least 2 points".into()));
    }
    let mut r = rng(seed);
    let mut seen_pts = HashSet::new();
    let mut pts = Vec::with_capacity(k as usize);
    while pts.len() < k as usize {
        let p: (i64, i64) = (r.gen_range(0..1000), r.gen_range(0..1000));
        if seen_pts.insert(p) {
            pts.push(p);
        }
    }
    let mut seen = HashSet::new();
    let mut walls = Vec::new();
    let mut attempts = 0u64;
    while walls.len() < m as usize {
        attempts += 1;
        if attempts > 1000 * (m as u64 + 1) {
            return Err(Error::InvalidArgument(format!(
                "could not draw {m} distinct walls on {k} points"
            )));
        }
        let (a, b): (i64, i64) = (r.gen_range(-100..=100), r.gen_range(-100..=100));
        if a == 0 && b == 0 {
            continue;
        }
        let proj: Vec<i64> = pts.iter().map(|&(x, y)| a * x + b * y).collect();
        let mut levels = proj.clone();
        levels.sort_unstable();
        levels.dedup();
        if levels.len() < 2 {
            continue;
        }
        let cut = levels[r.gen_range(0..levels.len() - 1)];
        let side_b: Vec<bool> = proj.iter().map(|&p| p > cut).collect();
        // Orientation-free key: normalize so point 0 is on side A.
        let key: Vec<bool> = side_b.iter().map(|&s| s != side_b[0]).collect();
        if !seen.insert(key) {
            continue;
        }
        let (sa, sb): (Vec<u32>, Vec<u32>) = (0..k).partition(|&i| !side_b[i as usize]);
        walls.push([sa, sb]);
    }
    Wallspace::new(k, walls)
}

/// Truncated coset tree of `G = (Z/2)^depth` with the chain
/// `G_0 = 1 ⊂ G_1 ⊂ ... ⊂ G_depth = G`, `G_i` spanned by the first `i`
/// basis vectors. Vertices are the cosets `g G_i`; `g G_i` is joined to
/// `g G_{i+1}`. Root first, then each level downwards, cosets ordered by
/// the bits of `g` above position `i`.
#[derive(Debug, Clone)]
pub struct CosetTree {
    pub graph: CubeGraph,
    /// Translations by the basis vectors, as vertex maps.
    pub generators: Vec<Vec<u32>>,
    pub depth: u32,
}

pub fn coset_tree(depth: u32) -> Result<CosetTree> {
    if depth > MAX_COSET_DEPTH {
        return Err(Error::CapExceeded {
            what: "coset-tree depth",
            actual: depth as usize,
            cap: MAX_COSET_DEPTH as usize,
        });
    }
    // Level i holds 2^(depth - i) cosets, starting at id 2^(depth - i) - 1.
    let id = |i: u32, c: u32| (1u32 << (depth - i)) - 1 + c;
    let n = (1u32 << (depth + 1)) - 1;
    let mut es = Vec::new();
    for i in 0..depth {
        for c in 0..1u32 << (depth - i) {
            es.push((id(i, c), id(i + 1, c >> 1)));
        }
    }
    let graph = CubeGraph::new(n, es)?;
    let generators = (0..depth)
        .map(|k| {
            let mut map = vec![0u32; n as usize];
            for i in 0..=depth {
                for c in 0..1u32 << (depth - i) {
                    let image = if k >= i { c ^ (1 << (k - i)) } else { c };
                    map[id(i, c) as usize] = id(i, image);
                }
            }
            map
        })
        .collect();
    Ok(CosetTree {
        graph,
        generators,
        depth,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::validate_median;

    #[test]
    fn named_generators_are_median() {
        for g in [cube(3), path(5), grid(3, 4), star(4), random_tree(30, 7)] {
            assert!(validate_median(&g).unwrap().is_median);
        }
    }

    #[test]
    fn cube_shape() {
        let q = cube(3);
        assert_eq!((q.vertex_count(), q.edge_count()), (8, 12));
    }

    #[test]
    fn coset_tree_levels() {
        let t = coset_tree(3).unwrap();
        assert_eq!(t.graph.vertex_count(), 1 + 2 + 4 + 8);
        assert_eq!(t.graph.edge_count(), 14);
        assert!(validate_median(&t.graph).unwrap().is_median);
        // root has two children, leaves have degree one
        assert_eq!(t.graph.degree(0), 2);
        assert_eq!((7..15).filter(|&v| t.graph.degree(v) == 1).count(), 8);
        for gen in &t.generators {
            for &(u, v) in t.graph.edges() {
                assert!(t.graph.has_edge(gen[u as usize], gen[v as usize]));
            }
        }
    }

    #[test]
    fn random_wallspace_is_deterministic() {
        let a = random_wallspace(12, 8, 42).unwrap();
        let b = random_wallspace(12, 8, 42).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.walls().len(), 8);
        let c = random_wallspace(12, 8, 43).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn random_tree_is_deterministic() {
        assert_eq!(random_tree(20, 1), random_tree(20, 1));
    }
}
