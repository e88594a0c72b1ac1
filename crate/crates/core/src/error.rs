use thiserror::Error;

/// Errors raised by the toolkit. Cap violations always name the cap that was hit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("generator index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: i32, rank: usize },
    #[error("basis mismatch: expected rank {expected}, found rank {found}")]
    BasisMismatch { expected: usize, found: usize },
    #[error("map is not surjective: generator {generator} is not in the image")]
    NotSurjective { generator: usize },
    #[error("rank mismatch: domain rank {domain}, codomain rank {codomain}")]
    RankMismatch { domain: usize, codomain: usize },
    #[error("images do not form a basis of the target factor: {0}")]
    NotABasisOfFactor(String),
    #[error("{cap} cap exceeded (limit {limit})")]
    CapExceeded { cap: &'static str, limit: usize },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph of groups is not algebraically clean: {0}")]
    NotClean(String),
    #[error("word lies outside the covering subgroup (path ends at state {state})")]
    OutsideSubgroup { state: usize },
    #[error("psi system depends on the path: cycle through edge {edge:?}")]
    PathDependence { edge: (usize, usize) },
    #[error("element is trivial")]
    IdentityElement,
    #[error("no separating depth up to the depth cap {cap}")]
    DepthExceeded { cap: usize },
    #[error("unsupported prime {0}")]
    UnsupportedPrime(u32),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
