use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the library can report. [`Error::kind`] gives a stable
/// machine-readable tag, used by the CLI's structured error output.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    /// A metric entry breaks symmetry, the diagonal or the value range.
    #[error("invalid metric at ({row}, {col}): {reason}")]
    InvalidMetric { row: String, col: String, reason: String },
    #[error("triangle inequality fails for ({0}, {1}, {2})")]
    TriangleViolation(String, String, String),
    #[error("not an ultrametric: witness ({0}, {1}, {2})")]
    NotUltrametric(String, String, String),
    #[error("four-point condition fails for ({0}, {1}, {2}, {3})")]
    FourPointViolation(String, String, String, String),
    #[error("invalid hierarchy: {0}")]
    InvalidHierarchy(String),
    #[error("invalid hierarchical tree: {0}")]
    InvalidTree(String),
    /// Depth is not strictly decreasing along the edge `parent -> child`.
    #[error("depth not strictly decreasing on edge {parent} -> {child}")]
    DepthNotDecreasing { parent: String, child: String },
    #[error("leaf label sets differ: {0}")]
    LabelMismatch(String),
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("duplicate id {0:?}")]
    DuplicateId(String),
    #[error("loop edge at {0:?}")]
    LoopEdge(String),
    #[error("graph has {0} components")]
    Disconnected(usize),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("missing self-intersection for {0:?}")]
    MissingSelfIntersection(String),
    /// The k-th leading principal minor (1-based) has the wrong sign.
    #[error("not negative definite at minor k={0}")]
    NotNegativeDefinite(usize),
    #[error("unknown branch {0:?}")]
    UnknownBranch(String),
    #[error("{0} and {1} are the same branch")]
    SameBranch(String, String),
    #[error("arrows are not attached injectively: {0:?} and {1:?} share {2:?}")]
    NonInjectiveArrows(String, String, String),
    #[error("need at least {needed} branches, got {got}")]
    TooFewBranches { needed: usize, got: usize },
    #[error("invalid branch {id:?}: {reason}")]
    InvalidBranch { id: String, reason: String },
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

impl Error {
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse(_) => "parse",
            Error::InvalidMetric { .. } => "invalid_metric",
            Error::TriangleViolation(..) => "triangle_violation",
            Error::NotUltrametric(..) => "not_ultrametric",
            Error::FourPointViolation(..) => "four_point_violation",
            Error::InvalidHierarchy(_) => "invalid_hierarchy",
            Error::InvalidTree(_) => "invalid_tree",
            Error::DepthNotDecreasing { .. } => "depth_not_decreasing",
            Error::LabelMismatch(_) => "label_mismatch",
            Error::UnknownVertex(_) => "unknown_vertex",
            Error::DuplicateId(_) => "duplicate_id",
            Error::LoopEdge(_) => "loop_edge",
            Error::Disconnected(_) => "disconnected",
            Error::InvalidGraph(_) => "invalid_graph",
            Error::MissingSelfIntersection(_) => "missing_self_intersection",
            Error::NotNegativeDefinite(_) => "not_negative_definite",
            Error::UnknownBranch(_) => "unknown_branch",
            Error::SameBranch(..) => "same_branch",
            Error::NonInjectiveArrows(..) => "non_injective_arrows",
            Error::TooFewBranches { .. } => "too_few_branches",
            Error::InvalidBranch { .. } => "invalid_branch",
            Error::Internal(_) => "internal",
        }
    }

    /// Witness ids carried by the error, if any.
    pub fn witness(&self) -> Option<Vec<String>> {
        match self {
            Error::TriangleViolation(a, b, c) | Error::NotUltrametric(a, b, c) => {
                Some(vec![a.clone(), b.clone(), c.clone()])
            }
            Error::FourPointViolation(a, b, c, d) => Some(vec![a.clone(), b.clone(), c.clone(), d.clone()]),
            Error::SameBranch(a, b) => Some(vec![a.clone(), b.clone()]),
            _ => None,
        }
    }
}
