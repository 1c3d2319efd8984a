use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vector is not weakly decreasing: {0:?}")]
    NotDecreasing(Vec<i64>),
    #[error("partition has a negative part: {0:?}")]
    NegativePart(Vec<i64>),
    #[error("incomparable partitions: weights {0} and {1} differ")]
    Incomparable(i64, i64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("index set {indices:?} is not strictly increasing within 1..={dim}")]
    InvalidIndexSet { indices: Vec<usize>, dim: usize },
    #[error("minor index sets have unequal cardinalities: {0:?}")]
    UnequalCardinality(Vec<usize>),
    #[error("size guard exceeded: {what} needs {needed} but the limit is {limit}")]
    SizeGuard { what: &'static str, needed: u128, limit: u128 },
    #[error("moment table has no value at argument {0}")]
    MissingMoment(i64),
    #[error("tuple {0:?} does not satisfy the delta constraint")]
    ConstraintViolation(Vec<usize>),
    #[error("oracle found nonzero coefficient {coeff} at inadmissible partition {lambda:?}")]
    InadmissibleNonzero { lambda: Vec<i64>, coeff: String },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("shard mismatch: {0}")]
    Shard(String),
    #[error("incomplete merge: {} missing of {total}, {} duplicated", .missing.len(), .duplicated.len())]
    Incomplete { missing: Vec<Vec<i64>>, duplicated: Vec<Vec<i64>>, total: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
