//! Graph isomorphism by colour refinement plus backtracking. Meant for the
//! round-trip checks at desk scale, not for adversarial inputs.

use std::collections::{HashMap, VecDeque};

use crate::graph::CubeGraph;

/// Refines the degree colouring of both graphs with a shared palette until
/// the number of colour classes stops growing.
fn refine(g1: &CubeGraph, g2: &CubeGraph) -> (Vec<u32>, Vec<u32>) {
    let mut c1: Vec<u32> = (0..g1.vertex_count() as u32).map(|v| g1.degree(v) as u32).collect();
    let mut c2: Vec<u32> = (0..g2.vertex_count() as u32).map(|v| g2.degree(v) as u32).collect();
    let mut classes = 0usize;
    loop {
        let mut palette: HashMap<(u32, Vec<u32>), u32> = HashMap::new();
        let mut step = |g: &CubeGraph, c: &[u32]| -> Vec<u32> {
            (0..g.vertex_count() as u32)
                .map(|v| {
                    let mut sig: Vec<u32> = g.neighbors(v).iter().map(|&w| c[w as usize]).collect();
                    sig.sort_unstable();
                    let next = palette.len() as u32;
                    *palette.entry((c[v as usize], sig)).or_insert(next)
                })
                .collect()
        };
        let n1 = step(g1, &c1);
        let n2 = step(g2, &c2);
        let count = palette.len();
        c1 = n1;
        c2 = n2;
        if count == classes {
            return (c1, c2);
        }
        classes = count;
    }
}

/// Returns `map` with `map[v]` the image in `g2` of vertex `v` of `g1`, or
/// `None` if the graphs are not isomorphic.
pub fn isomorphism(g1: &CubeGraph, g2: &CubeGraph) -> Option<Vec<u32>> {
    let n = g1.vertex_count();
    if n != g2.vertex_count() || g1.edge_count() != g2.edge_count() {
        return None;
    }
    let (c1, c2) = refine(g1, g2);
    let histogram = |c: &[u32]| {
        let mut h = c.to_vec();
        h.sort_unstable();
        h
    };
    if histogram(&c1) != histogram(&c2) {
        return None;
    }
    let mut class_size: HashMap<u32, usize> = HashMap::new();
    c1.iter().for_each(|&c| *class_size.entry(c).or_default() += 1);

    // Visit g1 in BFS order from rarest-coloured roots, so that every vertex
    // after a component's root has an earlier neighbour.
    let mut roots: Vec<u32> = (0..n as u32).collect();
    roots.sort_by_key(|&v| (class_size[&c1[v as usize]], v));
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    for r in roots {
        if seen[r as usize] {
            continue;
        }
        seen[r as usize] = true;
        let mut q = VecDeque::from([r]);
        while let Some(u) = q.pop_front() {
            order.push(u);
            for &w in g1.neighbors(u) {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    q.push_back(w);
                }
            }
        }
    }

    let mut map = vec![u32::MAX; n];
    let mut used = vec![false; n];
    if extend(g1, g2, &c1, &c2, &order, 0, &mut map, &mut used) {
        Some(map)
    } else {
        None
    }
}

#[allow(clippy::too_many_arguments)]
fn extend(
    g1: &CubeGraph,
    g2: &CubeGraph,
    c1: &[u32],
    c2: &[u32],
    order: &[u32],
    k: usize,
    map: &mut [u32],
    used: &mut [bool],
) -> bool {
    let Some(&v) = order.get(k) else {
        return true;
    };
    let mapped: Vec<u32> = g1
        .neighbors(v)
        .iter()
        .copied()
        .filter(|&w| map[w as usize] != u32::MAX)
        .collect();
    let candidates: Vec<u32> = match mapped.first() {
        Some(&p) => g2.neighbors(map[p as usize]).to_vec(),
        None => (0..g2.vertex_count() as u32).collect(),
    };
    for c in candidates {
        if used[c as usize] || c2[c as usize] != c1[v as usize] {
            continue;
        }
        if !mapped.iter().all(|&w| g2.has_edge(map[w as usize], c)) {
            continue;
        }
        let image_nbrs = g2.neighbors(c).iter().filter(|&&w| used[w as usize]).count();
        if image_nbrs != mapped.len() {
            continue;
        }
        map[v as usize] = c;
        used[c as usize] = true;
        if extend(g1, g2, c1, c2, order, k + 1, map, used) {
            return true;
        }
        map[v as usize] = u32::MAX;
        used[c as usize] = false;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;

    fn check(g1: &CubeGraph, g2: &CubeGraph, map: &[u32]) {
        for &(u, v) in g1.edges() {
            assert!(g2.has_edge(map[u as usize], map[v as usize]));
        }
    }

    #[test]
    fn relabelled_graphs_are_isomorphic() {
        let g = generate::grid(4, 5);
        let n = g.vertex_count() as u32;
        let perm: Vec<u32> = (0..n).map(|v| (v * 7 + 3) % n).collect();
        let h = g.relabel(&perm).unwrap();
        let map = isomorphism(&g, &h).unwrap();
        check(&g, &h, &map);
    }

    #[test]
    fn distinguishes_non_isomorphic() {
        assert!(isomorphism(&generate::path(4), &generate::star(3)).is_none());
        assert!(isomorphism(&generate::grid(2, 4), &generate::cube(3)).is_none());
        let c6 = CubeGraph::new(6, (0..6).map(|i| (i, (i + 1) % 6))).unwrap();
        let two_triangles = CubeGraph::new(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        assert!(isomorphism(&c6, &two_triangles).is_none());
    }

    #[test]
    fn cube_automorphic_copy() {
        let q = generate::cube(4);
        let perm: Vec<u32> = (0..16).map(|v: u32| v.reverse_bits() >> 28 ^ 5).collect();
        let h = q.relabel(&perm).unwrap();
        check(&q, &h, &isomorphism(&q, &h).unwrap());
    }
}
