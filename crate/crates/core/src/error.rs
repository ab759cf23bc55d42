use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("precision too low: {0}; retry with more precision bits")]
    PrecisionTooLow(String),

    #[error("empty polyhedron: {0}")]
    EmptyPolyhedron(String),

    #[error("sets {0} and {1} are not disjoint")]
    Overlap(usize, usize),

    #[error("family {family}: members {a} and {b} are not disjoint")]
    FamilyOverlap { family: usize, a: usize, b: usize },

    #[error("not a partition: {0}")]
    NotAPartition(String),

    #[error("duplicate points in grid at {0:?} and {1:?}")]
    DuplicatePoints((usize, usize), (usize, usize)),

    #[error("search cap exceeded: {0}")]
    CapExceeded(String),

    #[error("missing table entry F({0}, {1}, {2})")]
    MissingEntry(usize, usize, usize),

    #[error("separation failed: {0}")]
    SeparationFailed(String),

    #[error("drawing arcs of edges {0:?} and {1:?} cross")]
    DrawingCrossing((usize, usize), (usize, usize)),

    #[error("invalid separating system: {0}")]
    InvalidSystem(String),

    #[error("malformed rational {0:?}")]
    MalformedRational(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable snake_case name of the variant, for structured reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::EmptyInput(_) => "empty_input",
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::PrecisionTooLow(_) => "precision_too_low",
            Error::EmptyPolyhedron(_) => "empty_polyhedron",
            Error::Overlap(..) => "overlap",
            Error::FamilyOverlap { .. } => "family_overlap",
            Error::NotAPartition(_) => "not_a_partition",
            Error::DuplicatePoints(..) => "duplicate_points",
            Error::CapExceeded(_) => "cap_exceeded",
            Error::MissingEntry(..) => "missing_entry",
            Error::SeparationFailed(_) => "separation_failed",
            Error::DrawingCrossing(..) => "drawing_crossing",
            Error::InvalidSystem(_) => "invalid_system",
            Error::MalformedRational(_) => "malformed_rational",
            Error::Json(_) => "json",
        }
    }
}
