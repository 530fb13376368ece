use thiserror::Error;

use crate::exact::ExactError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Parameter validation failures for `(n, k, d)` triples.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParamError {
    #[error("n must be at least 1")]
    NTooSmall,
    #[error("d exceeds k (d={d}, k={k})")]
    DExceedsK { d: u32, k: u32 },
    #[error("k exceeds n (k={k}, n={n})")]
    KExceedsN { k: u32, n: u32 },
    #[error("k must be < n for f (k={k}, n={n})")]
    KNotBelowN { k: u32, n: u32 },
    #[error("requires 0 < k < n (k={k}, n={n})")]
    NotInterior { k: u32, n: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error("n={n} exceeds the enumeration limit of {limit}")]
    TooLarge { n: u32, limit: u32 },
    #[error("{what} out of range: {detail}")]
    Range { what: &'static str, detail: String },
    #[error("point {point} is outside [1, {n}]")]
    PointOutOfRange { point: u32, n: u32 },
    #[error("point {0} belongs to the conditioning set")]
    PointInSubset(u32),
    #[error("conditioning event is empty")]
    EmptyCondition,
    #[error("not a permutation: {0}")]
    NotPermutation(String),
    #[error("rho({i}) = {actual}, expected {j}")]
    ImageMismatch { i: u32, j: u32, actual: u32 },
    #[error("no closed form for k={0}; supported k are 0..=3")]
    NoClosedForm(u32),
    #[error("closed form for k={k} is undefined at n={n}")]
    DegenerateClosedForm { n: u32, k: u32 },
    #[error("no sample satisfied the conditioning event")]
    DegenerateEstimate,
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
}
