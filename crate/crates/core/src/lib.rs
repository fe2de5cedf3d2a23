//! Fast Johnson-Lindenstrauss transform `A = B D H D'`.
//!
//! `D'` and `D` are seeded Rademacher diagonals, `H` is the orthonormal
//! Walsh-Hadamard transform and `B` is a `k x d` 4-wise independent sign
//! matrix built from a BCH-type code over GF(2^m). The crate also carries
//! experiments that measure the transform's concentration behaviour and a
//! calculator for chaining-based embedding dimensions.

pub mod chaining;
pub mod error;
pub mod experiments;
pub mod fjlt;
pub mod fourwise;
pub mod hadamard;
pub mod seed;
pub mod selftest;

pub use error::{FjltError, Result};
pub use fjlt::{check_jl, DistortionReport, FjltPlan, PointSet, SignVector};
pub use fourwise::CodeMatrix;
pub use hadamard::{fwht_inplace, hadamard_entry};
