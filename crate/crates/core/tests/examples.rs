//! Small worked examples with values frozen from the brute-force oracle.
//! Each test checks the library and the oracle against the same constant.

use cubecx::actions::{coarse_stabilizer, generate_group, Automorphism};
use cubecx::complex::{CubeComplex, Side};
use cubecx::contact::{contact_graph, delta_chain};
use cubecx::convexity::{convex_hull, gate, project_set, ConvexSet};
use cubecx::duality::{irreducible_decompose, restriction_quotient};
use cubecx::separation::{hyperplane_layers, max_facing_free, thinness_constant, well_separation_degree};
use cubecx::{generate, oracle};

fn grid(a: u32, b: u32) -> CubeComplex {
    CubeComplex::new(generate::grid(a, b)).unwrap()
}

// 3x3 grid ids: vertex r*3 + c; hyperplanes V1 = 0, H1 = 1, V2 = 2, H2 = 3.
const V1: u32 = 0;
const H1: u32 = 1;
const V2: u32 = 2;
const H2: u32 = 3;

#[test]
fn grid_hyperplanes() {
    let cx = grid(3, 3);
    assert_eq!(cx.hyperplane_count(), 4);
    assert_eq!(oracle::djokovic_winkler_classes(cx.graph()).len(), 4);
    for j in 0..4 {
        assert_eq!(cx.class_edges(j).len(), 3);
    }
    assert_eq!(cx.hyperplane(V1).halfspace_a, vec![0, 3, 6]);
    assert_eq!(cx.hyperplane(H1).halfspace_a, vec![0, 1, 2]);
    assert!(cx.transverse(V1, H2) && !cx.transverse(V1, V2));
    assert_eq!(cx.dimension(), 2);
}

#[test]
fn grid_distances() {
    let cx = grid(3, 3);
    assert_eq!(cx.distance(0, 8), 4);
    assert_eq!(cx.dist_linf(0, 8).unwrap(), 2);
    assert_eq!(oracle::linf_by_disjoint_families(&cx, 0, 8), 2);
    assert_eq!(cx.dist_linf(0, 2).unwrap(), 2);
    assert_eq!(cx.interval(0, 8).unwrap().len(), 9);
}

#[test]
fn grid_medians_and_hulls() {
    let cx = grid(3, 3);
    let d = oracle::all_pairs(cx.graph());
    assert_eq!(cx.median(0, 2, 6).unwrap(), 0);
    assert_eq!(oracle::brute_median(cx.graph(), [0, 2, 6]), Some(0));
    assert_eq!(cx.median(2, 6, 4).unwrap(), 4);
    let h = convex_hull(&cx, &[0, 2, 6]).unwrap();
    assert_eq!(h.len(), 9);
    assert_eq!(oracle::hull(&d, &[0, 2, 6]).len(), 9);
    let h = convex_hull(&cx, &[0, 2, 3]).unwrap();
    assert_eq!(h.vertices(), &[0, 1, 2, 3, 4, 5]);
    assert_eq!(oracle::hull(&d, &[0, 2, 3]), vec![0, 1, 2, 3, 4, 5]);
}

#[test]
fn grid_gates_and_projection() {
    let cx = grid(3, 3);
    let d = oracle::all_pairs(cx.graph());
    let carrier = ConvexSet::carrier(&cx, V1).unwrap();
    assert_eq!(gate(&cx, 8, &carrier).unwrap(), 7);
    assert_eq!(oracle::nearest(&d, 8, carrier.vertices()), vec![7]);
    let half = ConvexSet::halfspace(&cx, H2, Side::B).unwrap();
    assert_eq!(gate(&cx, 1, &half).unwrap(), 7);

    let p = project_set(&cx, cx.carrier(H2).ones().map(|v| v as u32).collect::<Vec<_>>().as_slice(), &ConvexSet::carrier(&cx, H1).unwrap()).unwrap();
    assert_eq!(p.image, vec![3, 4, 5]);
    assert_eq!(p.diameter, 2);
}

#[test]
fn grid_separation() {
    let cx = grid(3, 3);
    let r = well_separation_degree(&cx, H1, H2).unwrap();
    assert_eq!(r.crossing_set, vec![V1, V2]);
    assert_eq!(r.degree_direct, Some(2));
    assert_eq!(r.degree_projection, Some(2));
    assert_eq!(oracle::max_facing_free(&cx, &[V1, V2]), 2);
    assert_eq!(r.strongly_separated, Some(false));
    assert!(well_separation_degree(&cx, V1, H1).unwrap().not_applicable);
}

#[test]
fn grid_layers() {
    let cx = grid(3, 3);
    let l = hyperplane_layers(&cx, 0, &[V1, H1, V2, H2]).unwrap();
    assert_eq!(l.layers, vec![vec![V1, H1], vec![V2, H2]]);
    assert!(l.pairwise_transverse.iter().all(|&t| t));
    assert!(l.within_dimension);
}

#[test]
fn thinness_of_diagonals() {
    let q3 = CubeComplex::new(generate::cube(3)).unwrap();
    let t = thinness_constant(&q3, &[0, 1, 3, 7]).unwrap();
    assert_eq!(t.constant, 1);
    assert_eq!(oracle::thinness(&q3, &q3.separators(0, 7)), 1);

    let g4 = grid(4, 4);
    let path = g4.geodesic(0, 15).unwrap();
    assert_eq!(thinness_constant(&g4, &path).unwrap().constant, 3);
    assert_eq!(oracle::thinness(&g4, &g4.separators(0, 15)), 3);
}

#[test]
fn path_contact() {
    let cx = CubeComplex::new(generate::path(5)).unwrap();
    let cg = contact_graph(&cx);
    assert_eq!(cg.edges(), &[(0, 1), (1, 2), (2, 3)]);
    // J1 and J4 in one-based naming
    let chain = delta_chain(&cx, 0, 3).unwrap();
    assert_eq!(chain.length, 2);
    assert_eq!(chain.chain, vec![1, 2]);
    assert_eq!(oracle::delta(&cx, 0, 3), 2);
    assert_eq!(cg.distance(0, 3), 3);
    assert_eq!(oracle::contact_distances(&cx)[0][3], 3);
}

#[test]
fn cube_quotients() {
    let cx = CubeComplex::new(generate::cube(3)).unwrap();
    let q = restriction_quotient(&cx, &[0]).unwrap();
    assert_eq!(q.graph.vertices, 2);
    assert_eq!(q.graph.edges.len(), 1);
    let dec = irreducible_decompose(&cx).unwrap();
    assert_eq!(dec.classes, vec![vec![0], vec![1], vec![2]]);
}

#[test]
fn product_degree() {
    let cx = CubeComplex::new(generate::path(3).product(&generate::cube(3))).unwrap();
    let (j, h) = (0..cx.hyperplane_count() as u32)
        .flat_map(|a| (0..cx.hyperplane_count() as u32).map(move |b| (a, b)))
        .find(|&(a, b)| a < b && !cx.transverse(a, b))
        .unwrap();
    let r = well_separation_degree(&cx, j, h).unwrap();
    assert_eq!(r.crossing_set.len(), 3);
    assert_eq!(r.degree_direct, Some(3));
    assert_eq!(max_facing_free(&cx, &r.crossing_set), 3);
    assert_eq!(oracle::max_facing_free(&cx, &r.crossing_set), 3);
}

#[test]
fn coset_tree_pair_stabilizer() {
    let t = generate::coset_tree(3).unwrap();
    let cx = CubeComplex::new(t.graph.clone()).unwrap();
    let gens: Vec<Automorphism> = t.generators.iter().map(|m| Automorphism::new(&cx, m.clone()).unwrap()).collect();
    let g = generate_group(&cx, &gens, 1 << 20);
    assert_eq!(g.order(), 8);
    // root and one leaf
    let leaf = cx.vertex_count() as u32 - 1;
    let brute = g
        .elements()
        .iter()
        .filter(|e| cx.distance(0, e.apply(0)) <= 2 && cx.distance(leaf, e.apply(leaf)) <= 2)
        .count();
    let s = coarse_stabilizer(&cx, &g, 0, leaf, 2).unwrap();
    assert_eq!(s.count, brute);
    assert_eq!(s.count, 2);
}

#[test]
fn ramsey_small_values() {
    assert!(oracle::every_colouring_has_mono_triangle(6));
    assert!(!oracle::every_colouring_has_mono_triangle(5));
    assert_eq!(cubecx::actions::ramsey_number(3), (6, true));
}
