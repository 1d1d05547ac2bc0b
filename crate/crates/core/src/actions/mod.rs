//! Finite group actions on cube complexes.
//!
//! A finite complex only admits elliptic isometries, so loxodromic
//! behaviour is modelled by [`PartialAutomorphism`]s defined on a window of
//! a periodic complex. Stabilizers are always taken inside an explicitly
//! enumerated finite group.

mod displacement;
mod profile;
mod ramsey;
mod skewer;

pub use displacement::{displacement_check, displacement_on_path, DisplacementReport, PointDisplacement};
pub use profile::{
    acyl_profile, coarse_stabilizer, essentiality_report, linkage_check, AcylProfile, HalfspaceReach,
    LinkageReport,
};
pub use ramsey::{ramsey_bound, ramsey_number, RamseyBound};
pub use skewer::{skewer_detect, wpd_certificate, Candidate, Skewer, SkewerReport, WpdCertificate, WpdOutcome};

use std::collections::{HashMap, VecDeque};

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::complex::CubeComplex;
use crate::error::{Error, Result};

/// Default refusal threshold for group enumeration.
pub const DEFAULT_GROUP_CAP: usize = 1_000_000;

/// An automorphism of a validated complex with its induced permutation of
/// hyperplanes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Automorphism {
    map: Vec<u32>,
    hyperplane_perm: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutomorphismJson {
    pub map: Vec<u32>,
}

impl Automorphism {
    /// Checks that `map` is a bijection sending edges to edges. Since edge
    /// counts agree, non-edges then go to non-edges as well.
    pub fn new(cx: &CubeComplex, map: Vec<u32>) -> Result<Self> {
        let n = cx.vertex_count();
        if map.len() != n {
            return Err(Error::InvalidMap(format!("map has {} entries for {n} vertices", map.len())));
        }
        let mut hit = vec![false; n];
        for &v in &map {
            if v as usize >= n || std::mem::replace(&mut hit[v as usize], true) {
                return Err(Error::InvalidMap(format!("map is not a bijection (image {v})")));
            }
        }
        let g = cx.graph();
        let mut hyperplane_perm = vec![u32::MAX; cx.hyperplane_count()];
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            let Some(img) = g.edge_id(map[u as usize], map[v as usize]) else {
                return Err(Error::NotAutomorphism(u, v));
            };
            let (j, k) = (cx.edge_class(e as u32), cx.edge_class(img));
            match hyperplane_perm[j as usize] {
                u32::MAX => hyperplane_perm[j as usize] = k,
                prev if prev != k => {
                    return Err(Error::InvalidMap(format!(
                        "hyperplane {j} is sent to both {prev} and {k}"
                    )))
                }
                _ => {}
            }
        }
        Ok(Automorphism { map, hyperplane_perm })
    }

    pub fn from_json(cx: &CubeComplex, j: &AutomorphismJson) -> Result<Self> {
        Self::new(cx, j.map.clone())
    }

    pub fn to_json(&self) -> AutomorphismJson {
        AutomorphismJson { map: self.map.clone() }
    }

    pub fn identity(cx: &CubeComplex) -> Self {
        Automorphism {
            map: (0..cx.vertex_count() as u32).collect(),
            hyperplane_perm: (0..cx.hyperplane_count() as u32).collect(),
        }
    }

    pub fn apply(&self, v: u32) -> u32 {
        self.map[v as usize]
    }

    pub fn hyperplane(&self, j: u32) -> u32 {
        self.hyperplane_perm[j as usize]
    }

    pub fn map(&self) -> &[u32] {
        &self.map
    }

    pub fn hyperplane_perm(&self) -> &[u32] {
        &self.hyperplane_perm
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Automorphism) -> Automorphism {
        Automorphism {
            map: other.map.iter().map(|&v| self.map[v as usize]).collect(),
            hyperplane_perm: other
                .hyperplane_perm
                .iter()
                .map(|&j| self.hyperplane_perm[j as usize])
                .collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &v)| i as u32 == v)
    }
}

/// A finite group of automorphisms, enumerated from generators.
#[derive(Debug, Clone)]
pub struct Group {
    elements: Vec<Automorphism>,
    truncated: bool,
}

impl Group {
    pub fn trivial(cx: &CubeComplex) -> Self {
        Group {
            elements: vec![Automorphism::identity(cx)],
            truncated: false,
        }
    }

    pub fn elements(&self) -> &[Automorphism] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Enumeration stopped at the cap; counts derived from it are lower
    /// bounds.
    pub fn truncated(&self) -> bool {
        self.truncated
    }

    /// Indicator bitset over elements satisfying `pred`.
    pub fn select(&self, pred: impl Fn(&Automorphism) -> bool) -> FixedBitSet {
        let mut b = FixedBitSet::with_capacity(self.order());
        for (i, g) in self.elements.iter().enumerate() {
            if pred(g) {
                b.insert(i);
            }
        }
        b
    }

    pub fn hyperplane_stabilizer(&self, j: u32) -> FixedBitSet {
        self.select(|g| g.hyperplane(j) == j)
    }

    pub fn pair_stabilizer(&self, j1: u32, j2: u32) -> FixedBitSet {
        self.select(|g| g.hyperplane(j1) == j1 && g.hyperplane(j2) == j2)
    }

    pub fn vertex_stabilizer(&self, v: u32) -> FixedBitSet {
        self.select(|g| g.apply(v) == v)
    }

    /// Orbit of `v`, sorted.
    pub fn orbit(&self, v: u32) -> Vec<u32> {
        let mut o: Vec<u32> = self.elements.iter().map(|g| g.apply(v)).collect();
        o.sort_unstable();
        o.dedup();
        o
    }
}

/// Closure of the generators under composition, breadth first from the
/// identity, stopping once `cap` elements are known.
pub fn generate_group(cx: &CubeComplex, gens: &[Automorphism], cap: usize) -> Group {
    let id = Automorphism::identity(cx);
    let mut index: HashMap<Vec<u32>, usize> = HashMap::from([(id.map.clone(), 0)]);
    let mut elements = vec![id];
    let mut queue = VecDeque::from([0usize]);
    let mut truncated = false;
    'outer: while let Some(i) = queue.pop_front() {
        for s in gens {
            let next = elements[i].compose(s);
            if index.contains_key(&next.map) {
                continue;
            }
            if elements.len() >= cap {
                truncated = true;
                break 'outer;
            }
            index.insert(next.map.clone(), elements.len());
            queue.push_back(elements.len());
            elements.push(next);
        }
    }
    if truncated {
        log::warn!("group enumeration stopped at the cap of {cap} elements");
    }
    Group { elements, truncated }
}

/// Any accepted action file: a partial automorphism (has `domain`), a list
/// of generators, or a single automorphism.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum ActionJson {
    Partial(PartialAutomorphismJson),
    Generators { generators: Vec<AutomorphismJson> },
    Single(AutomorphismJson),
}

pub enum Action {
    Group { generators: Vec<Automorphism>, group: Group },
    Partial(PartialAutomorphism),
}

impl Action {
    pub fn from_json(cx: &CubeComplex, j: &ActionJson, group_cap: usize) -> Result<Self> {
        let gens = match j {
            ActionJson::Partial(p) => return Ok(Action::Partial(PartialAutomorphism::from_json(cx, p)?)),
            ActionJson::Generators { generators } => generators.clone(),
            ActionJson::Single(a) => vec![a.clone()],
        };
        let generators = gens
            .iter()
            .map(|a| Automorphism::from_json(cx, a))
            .collect::<Result<Vec<_>>>()?;
        let group = generate_group(cx, &generators, group_cap);
        Ok(Action::Group { generators, group })
    }
}

/// Window metadata for a partial automorphism.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    /// Free-form description of the periodic complex and translation.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartialAutomorphismJson {
    pub domain: Vec<u32>,
    /// Image of vertex `i` at index `i`; `null` outside the domain. The
    /// array may also list only the domain's images, in domain order.
    pub map: Vec<Option<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<Window>,
}

/// An injective map from a vertex subset that preserves adjacency inside
/// its domain and sends each hyperplane's defined edges into one hyperplane.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialAutomorphism {
    map: Vec<Option<u32>>,
    window: Window,
}

impl PartialAutomorphism {
    pub fn new(cx: &CubeComplex, map: Vec<Option<u32>>, window: Window) -> Result<Self> {
        let n = cx.vertex_count();
        if map.len() != n {
            return Err(Error::InvalidMap(format!("map has {} entries for {n} vertices", map.len())));
        }
        let mut hit = vec![false; n];
        for &v in map.iter().flatten() {
            if v as usize >= n || std::mem::replace(&mut hit[v as usize], true) {
                return Err(Error::InvalidMap(format!("partial map is not injective (image {v})")));
            }
        }
        let g = cx.graph();
        let mut induced = vec![u32::MAX; cx.hyperplane_count()];
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            let (Some(a), Some(b)) = (map[u as usize], map[v as usize]) else {
                continue;
            };
            let Some(img) = g.edge_id(a, b) else {
                return Err(Error::NotAutomorphism(u, v));
            };
            let (j, k) = (cx.edge_class(e as u32), cx.edge_class(img));
            match induced[j as usize] {
                u32::MAX => induced[j as usize] = k,
                prev if prev != k => {
                    return Err(Error::InvalidMap(format!(
                        "hyperplane {j} is sent to both {prev} and {k}"
                    )))
                }
                _ => {}
            }
        }
        Ok(PartialAutomorphism { map, window })
    }

    pub fn from_json(cx: &CubeComplex, j: &PartialAutomorphismJson) -> Result<Self> {
        let n = cx.vertex_count();
        let map = if j.map.len() == n {
            for (v, img) in j.map.iter().enumerate() {
                if img.is_some() != j.domain.contains(&(v as u32)) {
                    return Err(Error::InvalidMap(format!("vertex {v}: map and domain disagree")));
                }
            }
            j.map.clone()
        } else if j.map.len() == j.domain.len() {
            let mut m = vec![None; n];
            for (&v, &img) in j.domain.iter().zip(&j.map) {
                cx.check_vertex(v)?;
                m[v as usize] = Some(img.ok_or_else(|| Error::InvalidMap(format!("no image for {v}")))?);
            }
            m
        } else {
            return Err(Error::InvalidMap("map length matches neither vertices nor domain".into()));
        };
        Self::new(cx, map, j.window.clone().unwrap_or_default())
    }

    pub fn to_json(&self) -> PartialAutomorphismJson {
        PartialAutomorphismJson {
            domain: self.domain(),
            map: self.map.clone(),
            window: (self.window != Window::default()).then(|| self.window.clone()),
        }
    }

    pub fn from_total(g: &Automorphism) -> Self {
        PartialAutomorphism {
            map: g.map.iter().map(|&v| Some(v)).collect(),
            window: Window::default(),
        }
    }

    pub fn apply(&self, v: u32) -> Option<u32> {
        self.map[v as usize]
    }

    /// `g^n(v)`, if every intermediate point is in the domain.
    pub fn power(&self, v: u32, n: u32) -> Option<u32> {
        (0..n).try_fold(v, |w, _| self.apply(w))
    }

    pub fn domain(&self) -> Vec<u32> {
        (0..self.map.len() as u32).filter(|&v| self.map[v as usize].is_some()).collect()
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    /// Vertices outside `dom(g) ∩ im(g)`: where the window is cut off.
    pub fn boundary(&self) -> Vec<u32> {
        let n = self.map.len();
        let mut image = vec![false; n];
        for &v in self.map.iter().flatten() {
            image[v as usize] = true;
        }
        (0..n as u32)
            .filter(|&v| self.map[v as usize].is_none() || !image[v as usize])
            .collect()
    }
}
