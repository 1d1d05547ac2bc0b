use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty graph: a complex needs at least one vertex")]
    EmptyGraph,

    #[error("structural error: {0}")]
    Structural(String),

    #[error("graph is not a median graph (witness {witness:?})")]
    NotMedian { witness: Vec<u32> },

    #[error("unknown vertex {0}")]
    UnknownVertex(u32),

    #[error("unknown hyperplane {0}")]
    UnknownHyperplane(u32),

    #[error("empty vertex set")]
    EmptySet,

    #[error("vertex set is not convex: {u} lies between {x} and {y} but outside the set")]
    NotConvex { x: u32, y: u32, u: u32 },

    #[error("not a geodesic: {0}")]
    NotGeodesic(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{what} cap exceeded: {actual} > {cap} (pass an explicit override to proceed)")]
    CapExceeded {
        what: &'static str,
        actual: usize,
        cap: usize,
    },

    #[error("invalid wallspace: {0}")]
    InvalidWallspace(String),

    #[error("map is not an automorphism: edge ({0}, {1}) is not sent to an edge")]
    NotAutomorphism(u32, u32),

    #[error("invalid map: {0}")]
    InvalidMap(String),

    /// A checked law failed on a validated input. Carries a human-readable
    /// description of the witness.
    #[error("law violated: {0}")]
    LawViolation(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable snake_case name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::EmptyGraph => "empty_graph",
            Error::Structural(_) => "structural",
            Error::NotMedian { .. } => "not_median",
            Error::UnknownVertex(_) => "unknown_vertex",
            Error::UnknownHyperplane(_) => "unknown_hyperplane",
            Error::EmptySet => "empty_set",
            Error::NotConvex { .. } => "not_convex",
            Error::NotGeodesic(_) => "not_geodesic",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::CapExceeded { .. } => "cap_exceeded",
            Error::InvalidWallspace(_) => "invalid_wallspace",
            Error::NotAutomorphism(..) => "not_automorphism",
            Error::InvalidMap(_) => "invalid_map",
            Error::LawViolation(_) => "law_violation",
            Error::Json(_) => "json",
            Error::Io(_) => "io",
        }
    }

    /// Machine-readable witness, for the variants that carry one.
    pub fn witness(&self) -> Option<serde_json::Value> {
        use serde_json::json;
        match self {
            Error::NotMedian { witness } => Some(json!({ "triple": witness })),
            Error::NotConvex { x, y, u } => Some(json!({ "x": x, "y": y, "between": u })),
            Error::NotAutomorphism(u, v) => Some(json!({ "edge": [u, v] })),
            Error::CapExceeded { what, actual, cap } => Some(json!({ "what": what, "actual": actual, "cap": cap })),
            Error::UnknownVertex(v) => Some(json!({ "vertex": v })),
            Error::UnknownHyperplane(j) => Some(json!({ "hyperplane": j })),
            _ => None,
        }
    }
}
