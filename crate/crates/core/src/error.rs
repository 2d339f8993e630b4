use thiserror::Error;

/// Errors raised anywhere in the pipeline.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("m = {0} is not square-free")]
    NotSquareFree(u64),
    #[error("m must be a positive integer")]
    NonPositive,
    #[error("point is the cusp sent to infinity")]
    IdealPoint,
    #[error("hemisphere norm bound {bound} exceeds the configured cap {cap}")]
    ResourceBudgetExceeded { bound: u64, cap: u64 },
    #[error("face {0} has no partner under the face pairing")]
    UnpairedFace(usize),
    #[error("stabiliser search on a cell touching a cusp is unbounded")]
    UnboundedSearch,
    #[error("finite subgroup of order {order} and exponent {exponent} is not one of the six Bianchi types")]
    UnknownType { order: usize, exponent: usize },
    #[error("boundary of boundary is nonzero in degree {0}")]
    BoundaryCheckFailed(usize),
    #[error("homology of degree {0} not covered by the stored tables")]
    UnsupportedDegree(usize),
    #[error("homomorphism image is not a subgroup of the target")]
    NotASubgroup,
    #[error("top Bredon homology is nonzero; assembly outside validated scope")]
    AssemblyAmbiguous,
    #[error("unknown artifact: {0}")]
    UnknownArtifact(String),
    #[error("time budget of {0} s exceeded")]
    BudgetExceeded(u64),
    #[error("i/o: {0}")]
    Io(String),
    #[error("cache entry unreadable: {0}")]
    Cache(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Variant name, for machine-readable error records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotSquareFree(_) => "NotSquareFree",
            Error::NonPositive => "NonPositive",
            Error::IdealPoint => "IdealPoint",
            Error::ResourceBudgetExceeded { .. } => "ResourceBudgetExceeded",
            Error::UnpairedFace(_) => "UnpairedFace",
            Error::UnboundedSearch => "UnboundedSearch",
            Error::UnknownType { .. } => "UnknownType",
            Error::BoundaryCheckFailed(_) => "BoundaryCheckFailed",
            Error::UnsupportedDegree(_) => "UnsupportedDegree",
            Error::NotASubgroup => "NotASubgroup",
            Error::AssemblyAmbiguous => "AssemblyAmbiguous",
            Error::UnknownArtifact(_) => "UnknownArtifact",
            Error::BudgetExceeded(_) => "BudgetExceeded",
            Error::Io(_) => "Io",
            Error::Cache(_) => "Cache",
            Error::Internal(_) => "Internal",
        }
    }
}
