use serde::Serialize;

use super::{Group, PartialAutomorphism};
use crate::complex::{CubeComplex, Side};
use crate::contact::separators_between;
use crate::convexity::{project_set, ConvexSet};
use crate::error::Result;
use crate::separation::{relation, well_separation_degree, Relation};
use crate::util::bits_to_vec;

/// `gⁿ J^s ⊊ J^s`, witnessed on the edges of `J` inside `dom(gⁿ)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Skewer {
    pub hyperplane: u32,
    pub side: Side,
    pub n: u32,
    pub image: u32,
    /// Hyperplanes strictly between `J` and `gⁿJ`.
    pub between: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SkewerReport {
    pub skewers: Vec<Skewer>,
    /// Hyperplanes skewered by some power, sorted.
    pub skewered: Vec<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<String>,
}

/// Class of the first tracked edge image, if every tracked image lies in
/// one class.
fn common_class(cx: &CubeComplex, images: &[(u32, u32, u32, u32)]) -> Option<u32> {
    let graph = cx.graph();
    let mut found = None;
    for &(_, _, a, b) in images {
        let k = cx.edge_class(graph.edge_id(a, b)?);
        if *found.get_or_insert(k) != k {
            return None;
        }
    }
    found
}

fn proper_subset(a: &fixedbitset::FixedBitSet, b: &fixedbitset::FixedBitSet) -> bool {
    a.is_subset(b) && a != b
}

/// Every `(J, n)` with `gⁿ J^s ⊊ J^s` for some side `s`, for all `n` up to
/// where `gⁿ` is defined on some edge of `J`.
pub fn skewer_detect(cx: &CubeComplex, g: &PartialAutomorphism) -> SkewerReport {
    let mut skewers = Vec::new();
    let bound = cx.vertex_count() as u32;
    let total = g.domain().len() == cx.vertex_count();
    for j in 0..cx.hyperplane_count() as u32 {
        // (u, v, gⁿu, gⁿv) for the edges of J still inside dom(gⁿ)
        let mut images: Vec<(u32, u32, u32, u32)> = cx
            .class_edges(j)
            .iter()
            .map(|&e| {
                let (u, v) = cx.graph().edge(e);
                (u, v, u, v)
            })
            .collect();
        for n in 1..=bound {
            images = images
                .into_iter()
                .filter_map(|(u, v, a, b)| Some((u, v, g.apply(a)?, g.apply(b)?)))
                .collect();
            let Some(&(u, v, a, b)) = images.first() else {
                break;
            };
            let Some(k) = common_class(cx, &images) else {
                continue;
            };
            if k == j {
                if total {
                    // the orbit of J has closed up
                    break;
                }
                continue;
            }
            for (end, img) in [(u, a), (v, b)] {
                let s = cx.side(end, j);
                let s2 = cx.side(img, k);
                if proper_subset(cx.halfspace(k, s2), cx.halfspace(j, s)) {
                    skewers.push(Skewer {
                        hyperplane: j,
                        side: s,
                        n,
                        image: k,
                        between: separators_between(cx, j, k).len(),
                    });
                    break;
                }
            }
        }
    }
    let mut skewered: Vec<u32> = skewers.iter().map(|s| s.hyperplane).collect();
    skewered.dedup();
    let diagnostic = skewers.is_empty().then(|| {
        "no hyperplane is skewered: every defined image is the hyperplane itself, transverse, or not nested inside it"
            .to_string()
    });
    SkewerReport {
        skewers,
        skewered,
        diagnostic,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Candidate {
    pub hyperplane: u32,
    pub image: u32,
    pub n: u32,
    pub degree: Option<u32>,
    /// Order of the pair stabilizer of `(J, gⁿJ)` in the symmetry group.
    pub stabilizer: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WpdCertificate {
    pub hyperplane: u32,
    pub image: u32,
    pub n: u32,
    /// Well-separation degree of the pair.
    pub l: u32,
    pub stabilizer: usize,
    pub stabilizer_lower_bound_only: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum WpdOutcome {
    Certificate {
        certificate: WpdCertificate,
        candidates: Vec<Candidate>,
    },
    Refusal {
        reason: String,
        candidates: Vec<Candidate>,
    },
}

impl WpdOutcome {
    pub fn certificate(&self) -> Option<&WpdCertificate> {
        match self {
            WpdOutcome::Certificate { certificate, .. } => Some(certificate),
            WpdOutcome::Refusal { .. } => None,
        }
    }
}

/// Searches the skewered pairs `(J, gⁿJ)` for one that is well separated
/// with its gate projection staying clear of the window boundary, so the
/// degree is not an artefact of truncation. Picks the smallest pair
/// stabilizer in `sym`, then the smallest degree, power and hyperplane.
pub fn wpd_certificate(cx: &CubeComplex, g: &PartialAutomorphism, sym: &Group) -> Result<WpdOutcome> {
    let report = skewer_detect(cx, g);
    if report.skewers.is_empty() {
        return Ok(WpdOutcome::Refusal {
            reason: "no skewered hyperplane".into(),
            candidates: Vec::new(),
        });
    }
    let boundary = cx.vertex_set(&g.boundary())?;
    let mut candidates = Vec::new();
    for s in &report.skewers {
        let (j, k) = (s.hyperplane, s.image);
        let stabilizer = sym.pair_stabilizer(j, k).count_ones(..);
        let mut c = Candidate {
            hyperplane: j,
            image: k,
            n: s.n,
            degree: None,
            stabilizer,
            failure: None,
        };
        if !matches!(relation(cx, j, k)?, Relation::Nested { .. }) {
            c.failure = Some("not nested".into());
        } else {
            let rep = well_separation_degree(cx, j, k)?;
            c.degree = rep.degree_projection;
            let proj = project_set(cx, &bits_to_vec(cx.carrier(k)), &ConvexSet::carrier(cx, j)?)?;
            if let Some(&b) = proj.image.iter().find(|&&v| boundary.contains(v as usize)) {
                c.failure = Some(format!("projection reaches window boundary at vertex {b}"));
            }
        }
        candidates.push(c);
    }
    let best = candidates
        .iter()
        .filter(|c| c.failure.is_none())
        .min_by_key(|c| (c.stabilizer, c.degree, c.n, c.hyperplane))
        .cloned();
    Ok(match best {
        Some(c) => WpdOutcome::Certificate {
            certificate: WpdCertificate {
                hyperplane: c.hyperplane,
                image: c.image,
                n: c.n,
                l: c.degree.expect("nested pairs have a degree"),
                stabilizer: c.stabilizer,
                stabilizer_lower_bound_only: sym.truncated(),
            },
            candidates,
        },
        None => WpdOutcome::Refusal {
            reason: "every skewered pair failed".into(),
            candidates,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::super::Window;
    use super::*;
    use crate::generate;

    fn shift(n: u32, defined: impl Fn(u32) -> Option<u32>) -> Vec<Option<u32>> {
        (0..n).map(defined).collect()
    }

    #[test]
    fn path_window() {
        let cx = CubeComplex::new(generate::path(9)).unwrap();
        let g = PartialAutomorphism::new(&cx, shift(9, |v| (v < 8).then_some(v + 1)), Window::default()).unwrap();
        let r = skewer_detect(&cx, &g);
        assert_eq!(r.skewered, (0..7).collect::<Vec<_>>());
        let first = r.skewers.iter().find(|s| s.hyperplane == 0 && s.n == 1).unwrap();
        assert_eq!((first.image, first.side, first.between), (1, Side::B, 0));
        assert!(r.skewers.iter().any(|s| s.hyperplane == 0 && s.n == 7 && s.between == 6));
        let out = wpd_certificate(&cx, &g, &Group::trivial(&cx)).unwrap();
        let c = out.certificate().unwrap();
        assert_eq!((c.l, c.stabilizer, c.n, c.hyperplane), (0, 1, 1, 0));
    }

    #[test]
    fn strip_glide() {
        // P9 × P2, vertex 2r + c; (r, c) -> (r + 1, 1 - c).
        let cx = CubeComplex::new(generate::grid(9, 2)).unwrap();
        let g = PartialAutomorphism::new(
            &cx,
            shift(18, |v| (v / 2 < 8).then_some(2 * (v / 2 + 1) + (1 - v % 2))),
            Window::default(),
        )
        .unwrap();
        let r = skewer_detect(&cx, &g);
        let long = cx.edge_class(cx.graph().edge_id(0, 1).unwrap());
        assert!(!r.skewered.contains(&long));
        assert_eq!(r.skewered.len(), 7);
        let out = wpd_certificate(&cx, &g, &Group::trivial(&cx)).unwrap();
        assert_eq!(out.certificate().unwrap().l, 1);
    }

    #[test]
    fn diagonal_shift_is_refused() {
        let cx = CubeComplex::new(generate::grid(9, 9)).unwrap();
        let g = PartialAutomorphism::new(
            &cx,
            shift(81, |v| (v / 9 < 8 && v % 9 < 8).then_some(v + 10)),
            Window::default(),
        )
        .unwrap();
        assert!(!skewer_detect(&cx, &g).skewers.is_empty());
        match wpd_certificate(&cx, &g, &Group::trivial(&cx)).unwrap() {
            WpdOutcome::Refusal { candidates, .. } => {
                assert!(candidates.iter().all(|c| c.failure.as_deref().unwrap().contains("boundary")))
            }
            other => panic!("expected refusal, got {other:?}"),
        }
    }

    #[test]
    fn identity_skewers_nothing() {
        let cx = CubeComplex::new(generate::cube(3)).unwrap();
        let g = PartialAutomorphism::from_total(&super::super::Automorphism::identity(&cx));
        let r = skewer_detect(&cx, &g);
        assert!(r.skewers.is_empty() && r.diagnostic.is_some());
        assert!(matches!(
            wpd_certificate(&cx, &g, &Group::trivial(&cx)).unwrap(),
            WpdOutcome::Refusal { .. }
        ));
    }
}
