use std::path::PathBuf;

use num_bigint::BigUint;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed delimited input: {0}")]
    Csv(#[from] csv::Error),

    #[error("dataset has {found} usable numeric attribute(s); at least 2 are required")]
    TooFewAttributes { found: usize },

    #[error("dataset has {found} usable object(s); at least 2 are required")]
    TooFewObjects { found: usize },

    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("a search space needs at least 2 attributes, got {0}")]
    AttributeCount(usize),

    #[error("candidate {candidate} lies outside the search space [{lower}, {upper}]")]
    OutOfBounds {
        candidate: BigUint,
        lower: BigUint,
        upper: BigUint,
    },

    #[error("malformed bit vector: {0}")]
    BitVector(String),

    #[error("invalid gradual pattern: {0}")]
    Pattern(String),

    #[error("attribute index {index} out of range for a dataset with {m} attributes")]
    AttributeOutOfRange { index: usize, m: usize },

    #[error("{m} attributes exceeds the enumeration limit of {limit}")]
    ResourceLimit { m: usize, limit: usize },

    #[error("support threshold must lie in [0, 1], got {0}")]
    Sigma(f64),

    #[error("invalid search configuration: {0}")]
    Config(String),

    #[error("unknown algorithm `{0}` (expected one of rs, ls, ga, pso, graank)")]
    UnknownAlgorithm(String),

    #[error("unknown search space `{0}` (expected numeric or bitmap)")]
    UnknownSpace(String),

    #[error("paired samples differ in length ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },

    #[error("signed-rank test needs at least 5 non-zero differences, got {0}")]
    TooFewDifferences(usize),

    #[error("invalid benchmark specification: {0}")]
    BenchSpec(String),

    #[error("serialization failed: {0}")]
    Json(#[from] serde_json::Error),
}
