//! The full pipeline over one complex, with an optional action.

use serde::Serialize;

use crate::actions::{
    acyl_profile, displacement_check, essentiality_report, linkage_check, skewer_detect, wpd_certificate, Action,
    AcylProfile, DisplacementReport, Group, HalfspaceReach, LinkageReport, PartialAutomorphism, SkewerReport,
    WpdOutcome,
};
use crate::complex::{CubeComplex, Hyperplane, ValidationReport};
use crate::contact::{contact_graph, hagen_check, qi_check, ContactReport, HagenReport, QiReport};
use crate::duality::{irreducible_decompose, Decomposition};
use crate::error::Result;
use crate::separation::{separation_scan, SeparationReport};

#[derive(Debug, Clone)]
pub struct AnalyzeOptions {
    pub essential_depth: u32,
    pub linkage_r_max: u32,
    /// Complexes with more hyperplanes skip the geodesic/separator check.
    pub hagen_max_hyperplanes: usize,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions {
            essential_depth: 1,
            linkage_r_max: 2,
            hagen_max_hyperplanes: 40,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ActionReport {
    Group {
        group_order: usize,
        truncated: bool,
        profile: AcylProfile,
        essentiality: Vec<HalfspaceReach>,
        linkage: LinkageReport,
        /// First generator on a geodesic from vertex 0 to the first vertex
        /// farthest from it.
        displacement: Option<DisplacementReport>,
    },
    Partial {
        skewers: SkewerReport,
        wpd: WpdOutcome,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalyzeReport {
    pub validation: ValidationReport,
    pub hyperplanes: Vec<Hyperplane>,
    pub separation: Vec<SeparationReport>,
    pub contact: ContactReport,
    pub qi: QiReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hagen: Option<HagenReport>,
    pub decomposition: Decomposition,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub action: Option<ActionReport>,
}

pub fn analyze(cx: &CubeComplex, action: Option<&Action>, sym: Option<&Group>, opts: &AnalyzeOptions) -> Result<AnalyzeReport> {
    let cg = contact_graph(cx);
    let hagen = (cx.hyperplane_count() <= opts.hagen_max_hyperplanes).then(|| hagen_check(cx, &cg));
    let action = match action {
        None => None,
        Some(Action::Group { generators, group }) => {
            let far = (0..cx.vertex_count() as u32)
                .max_by_key(|&v| (cx.distance(0, v), std::cmp::Reverse(v)))
                .unwrap_or(0);
            let displacement = generators
                .first()
                .map(|g| displacement_check(cx, &PartialAutomorphism::from_total(g), 0, far, None))
                .transpose()?;
            Some(ActionReport::Group {
                group_order: group.order(),
                truncated: group.truncated(),
                profile: acyl_profile(cx, group),
                essentiality: essentiality_report(cx, group, opts.essential_depth),
                linkage: linkage_check(cx, group, opts.linkage_r_max)?,
                displacement,
            })
        }
        Some(Action::Partial(g)) => {
            let trivial = Group::trivial(cx);
            Some(ActionReport::Partial {
                skewers: skewer_detect(cx, g),
                wpd: wpd_certificate(cx, g, sym.unwrap_or(&trivial))?,
            })
        }
    };
    Ok(AnalyzeReport {
        validation: cx.validation_report(),
        hyperplanes: cx.hyperplanes(),
        separation: separation_scan(cx)?,
        contact: cg.report(),
        qi: qi_check(cx, &cg)?,
        hagen,
        decomposition: irreducible_decompose(cx)?,
        action,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::actions::{ActionJson, DEFAULT_GROUP_CAP};
    use crate::generate;

    #[test]
    fn q3_pipeline() {
        let cx = CubeComplex::new(generate::cube(3)).unwrap();
        let r = analyze(&cx, None, None, &AnalyzeOptions::default()).unwrap();
        assert_eq!(r.hyperplanes.len(), 3);
        assert_eq!(r.contact.edges, vec![[0, 1], [0, 2], [1, 2]]);
        assert_eq!(r.decomposition.classes.len(), 3);
        assert!(r.qi.clean);
    }

    #[test]
    fn p5_end_swap() {
        let cx = CubeComplex::new(generate::path(5)).unwrap();
        let j: ActionJson = serde_json::from_str(r#"{"map": [4, 3, 2, 1, 0]}"#).unwrap();
        let a = Action::from_json(&cx, &j, DEFAULT_GROUP_CAP).unwrap();
        let r = analyze(&cx, Some(&a), None, &AnalyzeOptions::default()).unwrap();
        let Some(ActionReport::Group { group_order, displacement: Some(d), .. }) = r.action else {
            panic!("expected a group report");
        };
        assert_eq!(group_order, 2);
        assert_eq!((d.d, d.c, d.points[2].displacement, d.bound), (4, 0, 0, 24));
    }
}
