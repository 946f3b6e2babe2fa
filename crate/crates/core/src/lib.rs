//! Rank-metric codes over `F_{q^m}`: constructions, exact generalized rank
//! weights, bounds for reducible codes, rank equivalences and coset-coding
//! leakage. Everything is exact; nothing touches floating point.

pub mod bounds;
pub mod codes;
pub mod equivalence;
pub mod error;
pub mod field;
pub mod format;
pub mod grw;
pub mod linalg;
pub mod mrd;
pub mod rankmetric;
pub mod reduction;
pub mod wiretap;

pub use codes::LinearCode;
pub use error::{Error, Result};
pub use field::{FieldTower, Scalar};
pub use grw::{GrwEntry, GrwReport, Method};
pub use linalg::{Budget, Mat};
pub use mrd::{MrdCase, MrdPlan, MrdVerdict};
pub use rankmetric::GaloisClosedSpace;
pub use reduction::Reduction;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Deterministic generator for `(seed, stream)`. Different streams of one
/// seed are independent, so workers can each take their own.
pub fn seeded_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
