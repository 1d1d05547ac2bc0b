//! The acceptance battery: a seeded corpus of complexes and actions, and
//! one exhaustive property check per criterion.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::actions::{
    displacement_check, displacement_on_path, generate_group, linkage_check, wpd_certificate, Automorphism, Group,
    PartialAutomorphism, Window, WpdOutcome, DEFAULT_GROUP_CAP,
};
use crate::complex::{CubeComplex, Side};
use crate::contact::{contact_graph, delta_chain, hagen_check, qi_check};
use crate::convexity::{convex_hull, gate, separator_law, ConvexSet};
use crate::duality::{dual_complex, irreducible_decompose, round_trip, DEFAULT_WALL_CAP};
use crate::error::{Error, Result};
use crate::generate;
use crate::graph::CubeGraph;
use crate::separation::{crossing_set, max_facing_free, relation, thinness_constant, well_separation_degree, Relation};

#[derive(Debug, Clone, Serialize)]
pub struct SuiteConfig {
    pub seed: u64,
    pub wallspaces: usize,
    pub samples: usize,
    /// Largest dual accepted into the corpus.
    pub max_vertices: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 0,
            wallspaces: 200,
            samples: 10_000,
            max_vertices: 500,
        }
    }
}

pub struct Entry {
    pub name: String,
    pub complex: CubeComplex,
}

pub struct ActionEntry {
    pub name: String,
    pub complex: CubeComplex,
    pub group: Group,
}

/// Named generator outputs used alongside the random duals.
pub fn named_graphs() -> Vec<(String, CubeGraph)> {
    let mut out = Vec::new();
    for n in 1..=5 {
        out.push((format!("cube-{n}"), generate::cube(n)));
    }
    for n in 1..=12 {
        out.push((format!("path-{n}"), generate::path(n)));
    }
    for (a, b) in [(2, 2), (2, 5), (3, 3), (3, 7), (4, 4), (5, 5)] {
        out.push((format!("grid-{a}x{b}"), generate::grid(a, b)));
    }
    for k in 3..=6 {
        out.push((format!("star-{k}"), generate::star(k)));
    }
    for seed in 0..5 {
        out.push((format!("tree-20-{seed}"), generate::random_tree(20, seed)));
    }
    for depth in 1..=4 {
        out.push((format!("coset-tree-{depth}"), generate::coset_tree(depth).unwrap().graph));
    }
    out.push(("path-3*cube-3".into(), generate::path(3).product(&generate::cube(3))));
    out.push(("star-3*path-3".into(), generate::star(3).product(&generate::path(3))));
    out.push((
        "tree*tree".into(),
        generate::random_tree(6, 1).product(&generate::random_tree(5, 2)),
    ));
    out
}

/// Random-wallspace parameters for corpus entry `i`.
pub fn wallspace_params(i: usize) -> (u32, u32) {
    (8 + (i % 8) as u32, 4 + (i % 13) as u32)
}

/// Duals of `cfg.wallspaces` seeded random wallspaces, then the named
/// generators.
pub fn corpus(cfg: &SuiteConfig) -> Result<Vec<Entry>> {
    let mut entries: Vec<Entry> = (0..cfg.wallspaces)
        .into_par_iter()
        .map(|i| {
            let (k, m) = wallspace_params(i);
            let seed = cfg.seed + i as u64;
            let w = generate::random_wallspace(k, m, seed)?;
            let d = dual_complex(&w, DEFAULT_WALL_CAP)?;
            if d.graph.vertex_count() > cfg.max_vertices {
                return Err(Error::CapExceeded {
                    what: "corpus dual vertex",
                    actual: d.graph.vertex_count(),
                    cap: cfg.max_vertices,
                });
            }
            Ok(Entry {
                name: format!("wallspace-{k}-{m}-seed{seed}"),
                complex: CubeComplex::new(d.graph)?,
            })
        })
        .collect::<Result<_>>()?;
    for (name, g) in named_graphs() {
        entries.push(Entry {
            name,
            complex: CubeComplex::new(g)?,
        });
    }
    Ok(entries)
}

fn group_of(cx: &CubeComplex, maps: Vec<Vec<u32>>) -> Result<Group> {
    let gens = maps
        .into_iter()
        .map(|m| Automorphism::new(cx, m))
        .collect::<Result<Vec<_>>>()?;
    Ok(generate_group(cx, &gens, DEFAULT_GROUP_CAP))
}

/// Dihedral symmetries of the `a × a` grid: transpose and a row flip.
pub fn grid_dihedral(cx: &CubeComplex, a: u32) -> Result<Group> {
    let transpose = (0..a * a).map(|v| (v % a) * a + v / a).collect();
    let flip = (0..a * a).map(|v| (a - 1 - v / a) * a + v % a).collect();
    group_of(cx, vec![transpose, flip])
}

/// Coordinate permutations and flips of `Q3`.
pub fn cube_full_group(cx: &CubeComplex) -> Result<Group> {
    let swap = |a: u32, b: u32| {
        (0..8u32)
            .map(|v| {
                let (ba, bb) = ((v >> a) & 1, (v >> b) & 1);
                (v & !(1 << a) & !(1 << b)) | (bb << a) | (ba << b)
            })
            .collect()
    };
    group_of(cx, vec![swap(0, 1), swap(1, 2), (0..8).map(|v| v ^ 1).collect()])
}

/// Cyclic shift of the three coordinates of `Q3`.
pub fn cube_rotation(cx: &CubeComplex) -> Result<Automorphism> {
    Automorphism::new(cx, (0..8u32).map(|v| ((v << 1) | (v >> 2)) & 7).collect())
}

pub fn action_corpus() -> Result<Vec<ActionEntry>> {
    let mut out = Vec::new();
    let mut push = |name: &str, complex: CubeComplex, group: Group| {
        out.push(ActionEntry {
            name: name.into(),
            complex,
            group,
        })
    };
    let q3 = CubeComplex::new(generate::cube(3))?;
    push("cube-3/full", q3.clone(), cube_full_group(&q3)?);
    let rot = cube_rotation(&q3)?;
    push("cube-3/rotation", q3.clone(), generate_group(&q3, &[rot], DEFAULT_GROUP_CAP));
    let p5 = CubeComplex::new(generate::path(5))?;
    push("path-5/trivial", p5.clone(), Group::trivial(&p5));
    push("path-5/end-swap", p5.clone(), group_of(&p5, vec![vec![4, 3, 2, 1, 0]])?);
    let p9 = CubeComplex::new(generate::path(9))?;
    push("path-9/reversal", p9.clone(), group_of(&p9, vec![(0..9).rev().collect()])?);
    for depth in 1..=4 {
        let t = generate::coset_tree(depth)?;
        let cx = CubeComplex::new(t.graph)?;
        let g = group_of(&cx, t.generators)?;
        push(&format!("coset-tree-{depth}"), cx, g);
    }
    let star = CubeComplex::new(generate::star(4))?;
    push(
        "star-4/symmetric",
        star.clone(),
        group_of(&star, vec![vec![0, 2, 1, 3, 4], vec![0, 2, 3, 4, 1]])?,
    );
    for a in [3, 4, 10] {
        let cx = CubeComplex::new(generate::grid(a, a))?;
        let g = grid_dihedral(&cx, a)?;
        push(&format!("grid-{a}x{a}/dihedral"), cx, g);
    }
    Ok(out)
}

/// Shift `v ↦ v + 1` on the window `P9` of the integer line.
pub fn path_window() -> Result<(CubeComplex, PartialAutomorphism, Group)> {
    let cx = CubeComplex::new(generate::path(9))?;
    let g = PartialAutomorphism::new(
        &cx,
        (0..9).map(|v| (v < 8).then_some(v + 1)).collect(),
        Window {
            description: Some("P9 window of the line, translation by 1".into()),
        },
    )?;
    let sym = group_of(&cx, vec![(0..9).rev().collect()])?;
    Ok((cx, g, sym))
}

/// Diagonal shift `(r, c) ↦ (r + 1, c + 1)` on the window `P9 × P9` of the
/// square grid.
pub fn diagonal_window() -> Result<(CubeComplex, PartialAutomorphism, Group)> {
    let cx = CubeComplex::new(generate::grid(9, 9))?;
    let g = PartialAutomorphism::new(
        &cx,
        (0..81).map(|v| (v / 9 < 8 && v % 9 < 8).then_some(v + 10)).collect(),
        Window {
            description: Some("P9 x P9 window of the square grid, diagonal translation".into()),
        },
    )?;
    let sym = grid_dihedral(&cx, 9)?;
    Ok((cx, g, sym))
}

/// The two certificate cases compared against golden files.
pub fn wpd_cases() -> Result<Vec<(&'static str, WpdOutcome)>> {
    let (cx, g, sym) = path_window()?;
    let path = wpd_certificate(&cx, &g, &sym)?;
    let (cx, g, sym) = diagonal_window()?;
    let diagonal = wpd_certificate(&cx, &g, &sym)?;
    Ok(vec![("path-window", path), ("diagonal-window", diagonal)])
}

#[derive(Debug, Clone, Serialize)]
pub struct CriterionResult {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    /// Number of individual checks performed.
    pub checks: u64,
    pub detail: String,
    #[serde(skip)]
    pub seconds: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub config: SuiteConfig,
    pub corpus_size: usize,
    pub action_corpus_size: usize,
    pub criteria: Vec<CriterionResult>,
    pub all_passed: bool,
}

pub const CRITERIA: [&str; 10] = [
    "metric laws",
    "gate laws",
    "projection separation law",
    "well-separation equivalence",
    "contact-graph sandwich",
    "geodesic/separator correspondence",
    "duality round trip and product law",
    "displacement bound",
    "acylindricity linkage",
    "WPD certificate pipeline",
];

fn sum<I: Iterator<Item = (u64, u64)>>(it: I) -> (u64, u64) {
    it.fold((0, 0), |(a, b), (c, d)| (a + c, b + d))
}

/// `d₁` = number of separators = BFS distance, and `d∞` from cube-diagonal
/// BFS = longest pairwise disjoint chain of separators.
pub fn metric_laws(corpus: &[Entry]) -> (u64, u64, Option<String>) {
    let rows: Vec<(u64, u64, Option<String>)> = corpus
        .par_iter()
        .map(|e| {
            let cx = &e.complex;
            let n = cx.vertex_count() as u32;
            let (mut checks, mut fails, mut first) = (0u64, 0u64, None);
            for x in 0..n {
                let bfs = cx.graph().bfs(x);
                let linf = cx.linf_bfs(x);
                for y in 0..n {
                    let seps = cx.separators(x, y);
                    let chain = cx.disjoint_chain(x, &seps).len() as u32;
                    checks += 2;
                    if bfs[y as usize] != seps.len() as u32 || linf[y as usize] != chain {
                        fails += 1;
                        first.get_or_insert_with(|| format!("{}: ({x}, {y})", e.name));
                    }
                }
            }
            (checks, fails, first)
        })
        .collect();
    let (checks, fails) = sum(rows.iter().map(|r| (r.0, r.1)));
    (checks, fails, rows.into_iter().find_map(|r| r.2))
}

fn convex_family(cx: &CubeComplex) -> Result<Vec<ConvexSet>> {
    let mut sets = Vec::new();
    for j in 0..cx.hyperplane_count() as u32 {
        sets.push(ConvexSet::halfspace(cx, j, Side::A)?);
        sets.push(ConvexSet::halfspace(cx, j, Side::B)?);
        sets.push(ConvexSet::carrier(cx, j)?);
    }
    Ok(sets)
}

/// Every vertex against every halfspace and carrier: the gate is the unique
/// nearest point and every point of the set is reached through it.
pub fn gate_laws(corpus: &[Entry]) -> Result<(u64, u64, Option<String>)> {
    let rows: Vec<(u64, u64, Option<String>)> = corpus
        .par_iter()
        .map(|e| {
            let cx = &e.complex;
            let sets = convex_family(cx)?;
            let (mut checks, mut fails, mut first) = (0u64, 0u64, None);
            for x in 0..cx.vertex_count() as u32 {
                for (i, c) in sets.iter().enumerate() {
                    let g = gate(cx, x, c)?;
                    let dg = cx.distance(x, g);
                    for &v in c.vertices() {
                        checks += 1;
                        let dv = cx.distance(x, v);
                        let ok = if v == g { true } else { dv > dg && dv == dg + cx.distance(g, v) };
                        if !ok || !c.contains(g) {
                            fails += 1;
                            first.get_or_insert_with(|| format!("{}: vertex {x}, set #{i}", e.name));
                        }
                    }
                }
            }
            Ok((checks, fails, first))
        })
        .collect::<Result<_>>()?;
    let (checks, fails) = sum(rows.iter().map(|r| (r.0, r.1)));
    Ok((checks, fails, rows.into_iter().find_map(|r| r.2)))
}

/// Sampled `(x, y, C)`: `C` is a halfspace, a carrier or the hull of up to
/// three random vertices.
pub fn projection_law(corpus: &[Entry], samples: usize, seed: u64) -> Result<(u64, u64, Option<String>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut fails, mut first) = (0u64, None);
    for _ in 0..samples {
        let e = &corpus[rng.gen_range(0..corpus.len())];
        let cx = &e.complex;
        let n = cx.vertex_count() as u32;
        let h = cx.hyperplane_count() as u32;
        let (x, y) = (rng.gen_range(0..n), rng.gen_range(0..n));
        let c = match rng.gen_range(0..3) {
            0 if h > 0 => ConvexSet::halfspace(cx, rng.gen_range(0..h), Side::from_bit(rng.gen()))?,
            1 if h > 0 => ConvexSet::carrier(cx, rng.gen_range(0..h))?,
            _ => {
                let k = rng.gen_range(1..=3);
                let pts: Vec<u32> = (0..k).map(|_| rng.gen_range(0..n)).collect();
                convex_hull(cx, &pts)?
            }
        };
        if !separator_law(cx, x, y, &c)?.holds {
            fails += 1;
            first.get_or_insert_with(|| format!("{}: ({x}, {y})", e.name));
        }
    }
    Ok((samples as u64, fails, first))
}

/// For every nested pair: the largest facing-triple-free family crossing
/// both equals the diameter of the projection of one carrier onto the other.
pub fn well_separation(corpus: &[Entry]) -> Result<(u64, u64, Option<String>)> {
    let rows: Vec<(u64, u64, Option<String>)> = corpus
        .par_iter()
        .map(|e| {
            let cx = &e.complex;
            let h = cx.hyperplane_count() as u32;
            let (mut checks, mut fails, mut first) = (0u64, 0u64, None);
            for a in 0..h {
                for b in a + 1..h {
                    if !matches!(relation(cx, a, b)?, Relation::Nested { .. }) {
                        continue;
                    }
                    checks += 1;
                    let ok = match well_separation_degree(cx, a, b) {
                        Ok(r) => {
                            let direct = max_facing_free(cx, &crossing_set(cx, a, b)) as u32;
                            Some(direct) == r.degree_projection && r.degree_direct == r.degree_projection
                        }
                        Err(Error::LawViolation(_)) => false,
                        Err(other) => return Err(other),
                    };
                    if !ok {
                        fails += 1;
                        first.get_or_insert_with(|| format!("{}: ({a}, {b})", e.name));
                    }
                }
            }
            Ok((checks, fails, first))
        })
        .collect::<Result<_>>()?;
    let (checks, fails) = sum(rows.iter().map(|r| (r.0, r.1)));
    Ok((checks, fails, rows.into_iter().find_map(|r| r.2)))
}

pub struct Sandwich {
    pub checks: u64,
    pub failures: u64,
    pub literal_upper_failures: u64,
    pub first: Option<String>,
}

/// `⌊d/5⌋ ≤ Δ ≤ d` over the corpus, plus the closed form on paths `P_k`.
pub fn contact_sandwich(corpus: &[Entry]) -> Result<Sandwich> {
    let rows: Vec<(u64, u64, u64, Option<String>)> = corpus
        .par_iter()
        .map(|e| {
            let cg = contact_graph(&e.complex);
            let r = qi_check(&e.complex, &cg)?;
            Ok((
                r.pairs_checked as u64,
                r.violations.len() as u64,
                r.literal_upper_failures as u64,
                r.violations.first().map(|v| format!("{}: {:?} {}", e.name, v.pair, v.law)),
            ))
        })
        .collect::<Result<_>>()?;
    let mut s = Sandwich {
        checks: rows.iter().map(|r| r.0).sum(),
        failures: rows.iter().map(|r| r.1).sum(),
        literal_upper_failures: rows.iter().map(|r| r.2).sum(),
        first: rows.into_iter().find_map(|r| r.3),
    };
    for k in 3..=64u32 {
        let cx = CubeComplex::new(generate::path(k))?;
        let cg = contact_graph(&cx);
        let r = qi_check(&cx, &cg)?;
        let delta = delta_chain(&cx, 0, k - 2)?.length as u32;
        let d = cg.distance(0, k - 2);
        s.checks += r.pairs_checked as u64 + 1;
        s.failures += r.violations.len() as u64;
        s.literal_upper_failures += r.literal_upper_failures as u64;
        if (delta, d) != (k - 3, k - 2) {
            s.failures += 1;
            s.first
                .get_or_insert_with(|| format!("path-{k}: delta {delta}, distance {d}"));
        }
    }
    Ok(s)
}

/// Both parts of the geodesic/separator correspondence, on complexes with
/// at most `max_hyperplanes` hyperplanes.
pub fn hagen(corpus: &[Entry], max_hyperplanes: usize) -> (u64, u64, u64, Option<String>) {
    let rows: Vec<(u64, u64, u64, Option<String>)> = corpus
        .par_iter()
        .filter(|e| e.complex.hyperplane_count() <= max_hyperplanes)
        .map(|e| {
            let r = hagen_check(&e.complex, &contact_graph(&e.complex));
            let first = r
                .part_i_failures
                .first()
                .or(r.part_ii_failures.first())
                .map(|t| format!("{}: {t:?}", e.name));
            (
                r.pairs_checked as u64,
                (r.part_i_failures.len() + r.part_ii_failures.len()) as u64,
                1,
                first,
            )
        })
        .collect();
    let (checks, fails) = sum(rows.iter().map(|r| (r.0, r.1)));
    let complexes = rows.iter().map(|r| r.2).sum();
    (checks, fails, complexes, rows.into_iter().find_map(|r| r.3))
}

pub fn duality(corpus: &[Entry]) -> (u64, u64, Option<String>) {
    let rows: Vec<(u64, Option<String>)> = corpus
        .par_iter()
        .map(|e| {
            let r = round_trip(&e.complex).and_then(|_| irreducible_decompose(&e.complex));
            match r {
                Ok(_) => (0, None),
                Err(err) => (1, Some(format!("{}: {err}", e.name))),
            }
        })
        .collect();
    let fails = rows.iter().map(|r| r.0).sum();
    (corpus.len() as u64 * 2, fails, rows.into_iter().find_map(|r| r.1))
}

pub struct DisplacementSummary {
    pub checks: u64,
    pub failures: u64,
    pub literal_failures: u64,
    pub first: Option<String>,
    /// `(max displacement, literal bound)` of the cube rotation on the
    /// geodesic `0, 1, 3, 7`.
    pub witness: (u32, u32),
}

/// Every vertex pair, every group element, on the default geodesic.
pub fn displacement(actions: &[ActionEntry]) -> Result<DisplacementSummary> {
    let mut s = DisplacementSummary {
        checks: 0,
        failures: 0,
        literal_failures: 0,
        first: None,
        witness: (0, 0),
    };
    for a in actions {
        let cx = &a.complex;
        let elements: Vec<PartialAutomorphism> = a.group.elements().iter().map(PartialAutomorphism::from_total).collect();
        let n = cx.vertex_count() as u32;
        let rows: Vec<(u64, u64, u64, Option<String>)> = (0..n)
            .into_par_iter()
            .map(|x| {
                let (mut checks, mut fails, mut literal, mut first) = (0, 0, 0, None);
                for y in x + 1..n {
                    let path = cx.geodesic(x, y)?;
                    let c = thinness_constant(cx, &path)?.constant;
                    for g in &elements {
                        let r = displacement_on_path(cx, g, path.clone(), c)?;
                        checks += 1;
                        if !r.holds {
                            fails += 1;
                            first.get_or_insert_with(|| format!("{}: ({x}, {y})", a.name));
                        }
                        if !r.literal_holds {
                            literal += 1;
                        }
                    }
                }
                Ok((checks, fails, literal, first))
            })
            .collect::<Result<_>>()?;
        s.checks += rows.iter().map(|r| r.0).sum::<u64>();
        s.failures += rows.iter().map(|r| r.1).sum::<u64>();
        s.literal_failures += rows.iter().map(|r| r.2).sum::<u64>();
        if s.first.is_none() {
            s.first = rows.into_iter().find_map(|r| r.3);
        }
    }
    let q3 = CubeComplex::new(generate::cube(3))?;
    let rot = PartialAutomorphism::from_total(&cube_rotation(&q3)?);
    let r = displacement_check(&q3, &rot, 0, 7, Some(&[0, 1, 3, 7]))?;
    s.witness = (r.max_displacement, r.literal_bound);
    Ok(s)
}

pub struct LinkageSummary {
    pub pairs: u64,
    pub literal_failures: u64,
    pub literal_example: Option<String>,
    pub subgroup_failures: u64,
    pub pigeonhole_checks: u64,
    pub pigeonhole_failures: u64,
    pub ram3: bool,
    pub ram3_seconds: f64,
}

pub const LINKAGE_R_MAX: u32 = 2;

pub fn linkage(corpus: &[Entry], actions: &[ActionEntry]) -> Result<LinkageSummary> {
    let mut s = LinkageSummary {
        pairs: 0,
        literal_failures: 0,
        literal_example: None,
        subgroup_failures: 0,
        pigeonhole_checks: 0,
        pigeonhole_failures: 0,
        ram3: false,
        ram3_seconds: 0.0,
    };
    for a in actions {
        let r = linkage_check(&a.complex, &a.group, LINKAGE_R_MAX)?;
        s.pairs += r.pairs_checked as u64;
        s.literal_failures += r.literal_failures as u64;
        s.subgroup_failures += (r.subgroup_failures + r.pigeonhole_failures) as u64;
        if let (None, Some(e)) = (&s.literal_example, r.literal_example) {
            s.literal_example = Some(format!(
                "{}: element #{} fixes {} and {} (R = {}) but no pair of hyperplanes at separation >= {}",
                a.name, e.element, e.x, e.y, e.r, e.r
            ));
        }
    }
    let rows: Vec<(u64, u64)> = corpus
        .par_iter()
        .map(|e| {
            let cx = &e.complex;
            let dim = cx.dimension().max(1) as u32;
            let n = cx.vertex_count() as u32;
            let mut fails = 0;
            for x in 0..n {
                let linf = cx.linf_bfs(x);
                for y in 0..n {
                    if linf[y as usize] < cx.distance(x, y).div_ceil(dim) {
                        fails += 1;
                    }
                }
            }
            (n as u64 * n as u64, fails)
        })
        .collect();
    (s.pigeonhole_checks, s.pigeonhole_failures) = sum(rows.into_iter());
    let t = Instant::now();
    s.ram3 = crate::oracle::every_colouring_has_mono_triangle(6) && !crate::oracle::every_colouring_has_mono_triangle(5);
    s.ram3_seconds = t.elapsed().as_secs_f64();
    Ok(s)
}

fn wpd_criterion() -> Result<(bool, String)> {
    let cases = wpd_cases()?;
    let path_ok = matches!(
        cases[0].1.certificate(),
        Some(c) if c.l == 0 && c.stabilizer == 1
    );
    let diag = match &cases[1].1 {
        WpdOutcome::Refusal { candidates, .. } => {
            !candidates.is_empty() && candidates.iter().all(|c| c.failure.is_some())
        }
        WpdOutcome::Certificate { .. } => false,
    };
    let detail = match (cases[0].1.certificate(), &cases[1].1) {
        (Some(c), WpdOutcome::Refusal { candidates, .. }) => format!(
            "path window: L = {}, stabilizer {}; diagonal window refused ({})",
            c.l,
            c.stabilizer,
            candidates
                .first()
                .and_then(|c| c.failure.clone())
                .unwrap_or_default()
        ),
        _ => "unexpected outcome".into(),
    };
    Ok((path_ok && diag, detail))
}

fn finish(id: u32, passed: bool, checks: u64, detail: String, started: Instant) -> CriterionResult {
    let seconds = started.elapsed().as_secs_f64();
    log::info!("criterion {id} finished in {seconds:.2}s");
    CriterionResult {
        id,
        name: CRITERIA[id as usize - 1],
        passed,
        checks,
        detail,
        seconds,
    }
}

fn failure_note(fails: u64, first: Option<String>) -> String {
    match first {
        Some(f) if fails > 0 => format!("{fails} failures, first {f}"),
        _ => format!("{fails} failures"),
    }
}

/// Runs the selected criteria (all when `only` is empty).
pub fn run(cfg: &SuiteConfig, only: &[u32]) -> Result<SuiteReport> {
    let wanted = |i: u32| only.is_empty() || only.contains(&i);
    let corpus = corpus(cfg)?;
    let actions = action_corpus()?;
    let mut criteria = Vec::new();

    if wanted(1) {
        let t = Instant::now();
        let (checks, fails, first) = metric_laws(&corpus);
        criteria.push(finish(1, fails == 0, checks, failure_note(fails, first), t));
    }
    if wanted(2) {
        let t = Instant::now();
        let (checks, fails, first) = gate_laws(&corpus)?;
        criteria.push(finish(2, fails == 0, checks, failure_note(fails, first), t));
    }
    if wanted(3) {
        let t = Instant::now();
        let (checks, fails, first) = projection_law(&corpus, cfg.samples, cfg.seed)?;
        criteria.push(finish(3, fails == 0, checks, failure_note(fails, first), t));
    }
    if wanted(4) {
        let t = Instant::now();
        let (checks, fails, first) = well_separation(&corpus)?;
        criteria.push(finish(4, fails == 0, checks, failure_note(fails, first), t));
    }
    if wanted(5) {
        let t = Instant::now();
        let s = contact_sandwich(&corpus)?;
        let detail = format!(
            "{}; literal d <= 5*Delta fails on {} pairs (reported only)",
            failure_note(s.failures, s.first),
            s.literal_upper_failures
        );
        criteria.push(finish(5, s.failures == 0, s.checks, detail, t));
    }
    if wanted(6) {
        let t = Instant::now();
        let (checks, fails, complexes, first) = hagen(&corpus, 40);
        let detail = format!("{complexes} complexes; {}", failure_note(fails, first));
        criteria.push(finish(6, fails == 0, checks, detail, t));
    }
    if wanted(7) {
        let t = Instant::now();
        let (checks, fails, first) = duality(&corpus);
        criteria.push(finish(7, fails == 0, checks, failure_note(fails, first), t));
    }
    if wanted(8) {
        let t = Instant::now();
        let s = displacement(&actions)?;
        let passed = s.failures == 0 && s.witness == (2, 1);
        let detail = format!(
            "{}; literal C + 6d exceeded in {} cases; cube rotation witness: displacement {} vs literal bound {}",
            failure_note(s.failures, s.first),
            s.literal_failures,
            s.witness.0,
            s.witness.1
        );
        criteria.push(finish(8, passed, s.checks, detail, t));
    }
    if wanted(9) {
        let t = Instant::now();
        let s = linkage(&corpus, &actions)?;
        let passed = s.literal_failures == 0 && s.subgroup_failures == 0 && s.pigeonhole_failures == 0 && s.ram3;
        let mut detail = format!(
            "{} far pairs; literal statement fails for {} stabilizer elements; subgroup form {} failures; pigeonhole {} failures; Ram(3) = 6 by brute force {} ({:.2}s)",
            s.pairs,
            s.literal_failures,
            s.subgroup_failures,
            s.pigeonhole_failures,
            if s.ram3 { "confirmed" } else { "NOT confirmed" },
            s.ram3_seconds
        );
        if let Some(e) = s.literal_example {
            detail.push_str(&format!("; {e}"));
        }
        criteria.push(finish(9, passed, s.pairs + s.pigeonhole_checks, detail, t));
    }
    if wanted(10) {
        let t = Instant::now();
        let (passed, detail) = wpd_criterion()?;
        criteria.push(finish(10, passed, 2, detail, t));
    }
    let all_passed = criteria.iter().all(|c| c.passed);
    Ok(SuiteReport {
        config: cfg.clone(),
        corpus_size: corpus.len(),
        action_corpus_size: actions.len(),
        criteria,
        all_passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SuiteConfig {
        SuiteConfig {
            seed: 7,
            wallspaces: 6,
            samples: 200,
            max_vertices: 500,
        }
    }

    #[test]
    fn corpus_is_deterministic() {
        let a = corpus(&small()).unwrap();
        let b = corpus(&small()).unwrap();
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.name, y.name);
            assert_eq!(x.complex.graph().edges(), y.complex.graph().edges());
        }
    }

    #[test]
    fn action_corpus_orders() {
        let a = action_corpus().unwrap();
        let order = |name: &str| a.iter().find(|e| e.name == name).unwrap().group.order();
        assert_eq!(order("cube-3/full"), 48);
        assert_eq!(order("cube-3/rotation"), 3);
        assert_eq!(order("star-4/symmetric"), 24);
        assert_eq!(order("grid-10x10/dihedral"), 8);
        assert_eq!(order("coset-tree-4"), 16);
    }

    #[test]
    fn small_run() {
        let r = run(&small(), &[1, 2, 3, 4, 7, 10]).unwrap();
        for c in &r.criteria {
            assert!(c.passed, "criterion {}: {}", c.id, c.detail);
        }
    }
}
