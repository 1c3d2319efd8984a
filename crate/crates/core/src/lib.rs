//! Exact Schur-basis coefficients of even powers of the Vandermonde determinant.
//!
//! Each coefficient `g_λ^{n,k}` of `V(z₁,…,zₙ)^{2k} = Σ g_λ s_λ` is the
//! hyperdeterminant of a sparse 0/1 tensor encoded by a handful of decreasing
//! vectors. The [`engine`] evaluates those hyperdeterminants by a memoized
//! Laplace recursion, [`coefficients`] turns them into expansions, and
//! [`oracle`] provides brute-force polynomial ground truth.

pub mod coefficients;
pub mod engine;
pub mod error;
pub mod hyperdet;
pub mod oracle;
pub mod partitions;
pub mod records;
pub mod selftest;
pub mod shard;

pub use coefficients::{count_vanishing, expand, factorize_g, g_coefficient, SchurExpansion};
pub use engine::{DeltaSpec, Engine, EngineConfig};
pub use error::{Error, Result};
pub use partitions::{enumerate_admissible, is_admissible, AdmissibleBounds, DecreasingVector, Partition};

/// Arbitrary-precision signed integer used for every hyperdeterminant value.
pub type Coefficient = num_bigint::BigInt;
