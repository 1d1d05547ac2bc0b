//! Slow reference implementations. Each one recomputes a quantity straight
//! from its definition, usually by BFS and exhaustive enumeration, so that
//! the fast algorithms elsewhere can be checked against it.

use std::collections::HashMap;

use crate::complex::{CubeComplex, Side};
use crate::graph::CubeGraph;
use crate::util::Half;

pub fn all_pairs(g: &CubeGraph) -> Vec<Vec<u32>> {
    (0..g.vertex_count() as u32).map(|v| g.bfs(v)).collect()
}

fn medians_of(g: &CubeGraph, t: [u32; 3]) -> Vec<u32> {
    let d: Vec<Vec<u32>> = t.iter().map(|&v| g.bfs(v)).collect();
    let on = |a: usize, b: usize, m: usize| d[a][m].saturating_add(d[b][m]) == d[a][t[b] as usize];
    (0..g.vertex_count())
        .filter(|&m| on(0, 1, m) && on(0, 2, m) && on(1, 2, m))
        .map(|m| m as u32)
        .collect()
}

pub fn median_count(g: &CubeGraph, t: [u32; 3]) -> usize {
    medians_of(g, t).len()
}

pub fn brute_median(g: &CubeGraph, t: [u32; 3]) -> Option<u32> {
    match medians_of(g, t).as_slice() {
        [m] => Some(*m),
        _ => None,
    }
}

/// Decides the median property by scanning every triple.
pub fn is_median_by_triples(g: &CubeGraph) -> bool {
    let n = g.vertex_count();
    let d = all_pairs(g);
    if d[0].iter().any(|&x| x == u32::MAX) {
        return false;
    }
    for x in 0..n {
        for y in x..n {
            for z in y..n {
                let c = (0..n)
                    .filter(|&m| {
                        d[x][m] + d[m][y] == d[x][y] && d[x][m] + d[m][z] == d[x][z] && d[y][m] + d[m][z] == d[y][z]
                    })
                    .count();
                if c != 1 {
                    return false;
                }
            }
        }
    }
    true
}

/// Djoković–Winkler classes: `xy Θ uv` iff `d(x,u) + d(y,v) ≠ d(x,v) + d(y,u)`,
/// closed transitively. Classes are sorted by smallest edge id.
pub fn djokovic_winkler_classes(g: &CubeGraph) -> Vec<Vec<u32>> {
    let d = all_pairs(g);
    let m = g.edge_count();
    let mut uf = crate::util::UnionFind::new(m);
    for e in 0..m {
        let (x, y) = g.edge(e as u32);
        for f in e + 1..m {
            let (u, v) = g.edge(f as u32);
            let (x, y, u, v) = (x as usize, y as usize, u as usize, v as usize);
            if d[x][u] + d[y][v] != d[x][v] + d[y][u] {
                uf.union(e, f);
            }
        }
    }
    let mut classes: Vec<Vec<u32>> = Vec::new();
    let mut ix: HashMap<usize, usize> = HashMap::new();
    for e in 0..m {
        let r = uf.find(e);
        let k = *ix.entry(r).or_insert_with(|| {
            classes.push(Vec::new());
            classes.len() - 1
        });
        classes[k].push(e as u32);
    }
    classes
}

/// Hyperplanes `i`, `j` are transverse iff all four halfspace intersections
/// are nonempty, tested on vertex lists.
pub fn transverse(cx: &CubeComplex, i: u32, j: u32) -> bool {
    let n = cx.vertex_count() as u32;
    let mut seen = [false; 4];
    for v in 0..n {
        seen[cx.side(v, i).index() * 2 + cx.side(v, j).index()] = true;
    }
    i != j && seen.iter().all(|&s| s)
}

/// Whether the carrier of `j` lies in side `s` of `v`.
fn carrier_in(cx: &CubeComplex, j: u32, v: u32, s: Side) -> bool {
    cx.carrier(j).ones().all(|u| cx.side(u as u32, v) == s)
}

pub fn separates(cx: &CubeComplex, v: u32, j: u32, h: u32) -> bool {
    [Side::A, Side::B]
        .iter()
        .any(|&s| carrier_in(cx, j, v, s) && carrier_in(cx, h, v, s.flip()))
}

pub fn facing_triple(cx: &CubeComplex, a: u32, b: u32, c: u32) -> bool {
    let t = [a, b, c];
    if a == b || b == c || a == c {
        return false;
    }
    for i in 0..3 {
        for k in i + 1..3 {
            if transverse(cx, t[i], t[k]) {
                return false;
            }
        }
    }
    !(separates(cx, a, b, c) || separates(cx, b, a, c) || separates(cx, c, a, b))
}

/// Largest subfamily of `family` with no facing triple, by subset
/// enumeration. Panics above 20 members.
pub fn max_facing_free(cx: &CubeComplex, family: &[u32]) -> usize {
    let k = family.len();
    assert!(k <= 20, "oracle family too large");
    let mut triples = Vec::new();
    for a in 0..k {
        for b in a + 1..k {
            for c in b + 1..k {
                if facing_triple(cx, family[a], family[b], family[c]) {
                    triples.push((1u32 << a) | (1 << b) | (1 << c));
                }
            }
        }
    }
    (0u32..1 << k)
        .filter(|&s| triples.iter().all(|&t| s & t != t))
        .map(|s| s.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

/// Largest set of pairwise non-transverse separators of `x`, `y`.
pub fn linf_by_disjoint_families(cx: &CubeComplex, x: u32, y: u32) -> usize {
    let seps = cx.separators(x, y);
    let k = seps.len();
    assert!(k <= 20, "oracle family too large");
    (0u32..1 << k)
        .filter(|&s| {
            (0..k).all(|a| {
                (a + 1..k).all(|b| s & (1 << a) == 0 || s & (1 << b) == 0 || !transverse(cx, seps[a], seps[b]))
            })
        })
        .map(|s| s.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

/// Largest `k` such that some vertex spans a `k`-cube: grows cubes one
/// direction at a time and looks each corner up by label.
pub fn largest_cube(cx: &CubeComplex) -> usize {
    let h = cx.hyperplane_count();
    let mut best = 0;
    for v in 0..cx.vertex_count() as u32 {
        let dirs: Vec<usize> = (0..h).filter(|&j| cx.incident_classes(v)[j]).collect();
        let k = dirs.len();
        if k <= best {
            continue;
        }
        for mask in 0u64..1 << k {
            let size = mask.count_ones() as usize;
            if size <= best {
                continue;
            }
            let chosen: Vec<usize> = (0..k).filter(|&i| mask & (1 << i) != 0).map(|i| dirs[i]).collect();
            let all = (0u64..1 << size).all(|corner| {
                let mut l = cx.label(v).clone();
                for (i, &j) in chosen.iter().enumerate() {
                    if corner & (1 << i) != 0 {
                        l.toggle(j);
                    }
                }
                cx.vertex_with_label(&l).is_some()
            });
            if all {
                best = size;
            }
        }
    }
    best
}

pub fn interval(d: &[Vec<u32>], x: u32, y: u32) -> Vec<u32> {
    let (x, y) = (x as usize, y as usize);
    (0..d.len())
        .filter(|&u| d[x][u] + d[u][y] == d[x][y])
        .map(|u| u as u32)
        .collect()
}

pub fn is_convex(d: &[Vec<u32>], set: &[u32]) -> bool {
    set.iter()
        .all(|&x| set.iter().all(|&y| interval(d, x, y).iter().all(|u| set.contains(u))))
}

/// Closure under intervals.
pub fn hull(d: &[Vec<u32>], set: &[u32]) -> Vec<u32> {
    let mut cur: Vec<u32> = set.to_vec();
    cur.sort_unstable();
    cur.dedup();
    loop {
        let mut next = cur.clone();
        for &x in &cur {
            for &y in &cur {
                next.extend(interval(d, x, y));
            }
        }
        next.sort_unstable();
        next.dedup();
        if next == cur {
            return cur;
        }
        cur = next;
    }
}

/// All vertices of `set` at minimum distance from `x`.
pub fn nearest(d: &[Vec<u32>], x: u32, set: &[u32]) -> Vec<u32> {
    let best = set.iter().map(|&c| d[x as usize][c as usize]).min().unwrap();
    set.iter()
        .copied()
        .filter(|&c| d[x as usize][c as usize] == best)
        .collect()
}

/// Hyperplanes crossing both `j` and `h`, recomputed from vertex sides.
pub fn crossing_both(cx: &CubeComplex, j: u32, h: u32) -> Vec<u32> {
    (0..cx.hyperplane_count() as u32)
        .filter(|&w| transverse(cx, w, j) && transverse(cx, w, h))
        .collect()
}

fn strongly_separated(cx: &CubeComplex, a: u32, b: u32) -> bool {
    a != b && !transverse(cx, a, b) && crossing_both(cx, a, b).is_empty()
}

/// Δ(J, H) by enumerating subsets of separators of `J` and `H`.
pub fn delta(cx: &CubeComplex, j: u32, h: u32) -> usize {
    let seps: Vec<u32> = (0..cx.hyperplane_count() as u32)
        .filter(|&v| v != j && v != h && separates(cx, v, j, h))
        .collect();
    let k = seps.len();
    assert!(k <= 20, "oracle family too large");
    (0u32..1 << k)
        .filter(|&s| {
            (0..k).all(|a| {
                (a + 1..k).all(|b| {
                    s & (1 << a) == 0 || s & (1 << b) == 0 || strongly_separated(cx, seps[a], seps[b])
                })
            })
        })
        .map(|s| s.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

/// Contact graph distances by BFS over carrier-intersection adjacency built
/// from scratch.
pub fn contact_distances(cx: &CubeComplex) -> Vec<Vec<u32>> {
    let h = cx.hyperplane_count() as u32;
    let mut es = Vec::new();
    for a in 0..h {
        for b in a + 1..h {
            if !cx.carrier(a).is_disjoint(cx.carrier(b)) {
                es.push((a, b));
            }
        }
    }
    all_pairs(&CubeGraph::new(h, es).unwrap())
}

/// Four-point hyperbolicity via Gromov products: the least `δ` with
/// `(x|z)_w ≥ min((x|y)_w, (y|z)_w) - δ` for all ordered quadruples.
/// Returned as twice `δ`; pairs in different components are skipped.
pub fn gromov_delta(d: &[Vec<u32>]) -> Half {
    let n = d.len();
    let mut best: i64 = 0;
    for w in 0..n {
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let ds = [d[w][x], d[w][y], d[w][z], d[x][y], d[y][z], d[x][z]];
                    if ds.iter().any(|&v| v == u32::MAX) {
                        continue;
                    }
                    let [wx, wy, wz, xy, yz, xz] = ds.map(|v| v as i64);
                    // twice the Gromov products
                    let xy_w = wx + wy - xy;
                    let yz_w = wy + wz - yz;
                    let xz_w = wx + wz - xz;
                    best = best.max(xy_w.min(yz_w) - xz_w);
                }
            }
        }
    }
    // The products were doubled, so `best` is 2δ.
    Half(best as u64)
}

/// Largest `min(|A|, |B|)` over pairs of families of separators of the
/// geodesic with every member of `A` transverse to every member of `B` and
/// no facing triple inside either family. Subset enumeration; ≤ 12 members.
pub fn thinness(cx: &CubeComplex, seps: &[u32]) -> usize {
    let k = seps.len();
    assert!(k <= 12, "oracle family too large");
    let free = |s: u32| {
        let m: Vec<u32> = (0..k).filter(|&i| s & (1 << i) != 0).map(|i| seps[i]).collect();
        (0..m.len()).all(|a| (a + 1..m.len()).all(|b| (b + 1..m.len()).all(|c| !facing_triple(cx, m[a], m[b], m[c]))))
    };
    let mut best = 0;
    for a in 1u32..1 << k {
        if !free(a) {
            continue;
        }
        for b in 1u32..1 << k {
            if a & b != 0 || (a.count_ones().min(b.count_ones()) as usize) <= best {
                continue;
            }
            let joined = (0..k).all(|i| {
                a & (1 << i) == 0 || (0..k).all(|j| b & (1 << j) == 0 || transverse(cx, seps[i], seps[j]))
            });
            if joined && free(b) {
                best = a.count_ones().min(b.count_ones()) as usize;
            }
        }
    }
    best
}

/// Exhaustively checks that every 2-colouring of `K_n` has a monochromatic
/// triangle.
pub fn every_colouring_has_mono_triangle(n: usize) -> bool {
    let edges: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let index = |a: usize, b: usize| edges.iter().position(|&e| e == (a.min(b), a.max(b))).unwrap();
    let triangles: Vec<[usize; 3]> = (0..n)
        .flat_map(|a| (a + 1..n).flat_map(move |b| (b + 1..n).map(move |c| [a, b, c])))
        .map(|[a, b, c]| [index(a, b), index(b, c), index(a, c)])
        .collect();
    (0u64..1 << edges.len()).all(|col| {
        triangles.iter().any(|t| {
            let bits: Vec<u64> = t.iter().map(|&e| (col >> e) & 1).collect();
            bits[0] == bits[1] && bits[1] == bits[2]
        })
    })
}
