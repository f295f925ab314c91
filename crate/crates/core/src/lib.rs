//! Simulation and numerical verification of quantum single-deletion codes.
//!
//! * [`qstate`]: dense states, density matrices, the deletion channel
//!   (partial trace), fidelity and projective measurement.
//! * [`q4code`]: the four-qubit permutation-invariant code, its encoder and
//!   the four-step measurement decoder.
//! * [`gencode`]: the weight-class family of length `4(l-1)` for a level-`l`
//!   message, with a constructed recovery map per measurement outcome.
//! * [`circuits`]: gate-level encoder and decoder circuits, a text format and
//!   equivalence checks against the abstract maps.

pub mod circuits;
mod error;
pub mod gencode;
pub mod q4code;
pub mod qstate;

pub use error::{Error, Result};
pub use qstate::{DensityMatrix, Matrix, Measurement, Projector, PureState, QubitIndex, Tensor};

pub use num_complex::Complex64;

/// Tolerance for numerical assertions (purity, isometry, resolutions of identity).
pub const ASSERT_TOL: f64 = 1e-10;
/// Tolerance for exact algebraic identities (normalization, Hermiticity).
pub const IDENTITY_TOL: f64 = 1e-12;
/// Outcomes below this probability are refused rather than renormalized.
pub const DEGENERATE_PROBABILITY: f64 = 1e-14;

/// Deterministic generator for trial `stream` of a sweep seeded with `seed`.
///
/// Each trial gets its own ChaCha stream, so results do not depend on how
/// trials are scheduled.
pub fn trial_rng(seed: u64, stream: u64) -> rand_chacha::ChaCha8Rng {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
