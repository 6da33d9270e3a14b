//! Exact-arithmetic toolkit for big Witt vectors over truncation sets and the
//! K-groups of truncated polynomial rings over prime fields.
//!
//! The crate is organized around five building blocks:
//!
//! * [`truncation`] — finite truncation sets (divisor-closed index sets) and
//!   the combinatorics shared by everything else;
//! * [`witt`] — big Witt vector rings `W_S(Z)` and `W_S(Z/m)` with ghost
//!   coordinates, Frobenius, Verschiebung, restriction, and the p-typical
//!   coordinate decomposition over a prime field;
//! * [`matrix`] / [`abgroup`] — dense arbitrary-precision integer linear
//!   algebra (Smith and Hermite normal forms) and finitely generated abelian
//!   groups presented as integer matrix cokernels;
//! * [`ktheory`] — invariant-factor presentations of the odd relative
//!   K-groups of `F_p[x]/(x^m)`, the power maps between them, and the two
//!   colimit towers attached to the ramified extensions of `Z_p`;
//! * [`nerve`] — the weight-graded cyclic bar complex of the pointed monoid
//!   `{0, 1, x, ..., x^{k-1}}`, its integral homology, and the chain-level
//!   power maps.
//!
//! All arithmetic is exact; no floating point is used anywhere.

pub mod abgroup;
pub mod ktheory;
pub mod matrix;
pub mod nerve;
pub mod selftest;
pub mod truncation;
pub mod witt;

use num_bigint::BigInt;
use thiserror::Error;

/// Error type shared by every module.
///
/// The three plain variants mirror the CLI exit codes: usage errors (1),
/// domain errors (2), resource-bound errors (3).
#[derive(Debug, Error)]
pub enum Error {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("{0}")]
    Domain(String),
    #[error("resource bound exceeded: {0}")]
    Resource(String),
    #[error("map is not well-defined on the quotients; witness relator image {witness:?}")]
    NotWellDefined { witness: Vec<BigInt> },
}

pub type Result<T> = std::result::Result<T, Error>;

pub use abgroup::{ses_check, AbGroupPresentation, GroupMap, GroupOrder, SesReport};
pub use matrix::{snf, IntMatrix, Snf};
pub use truncation::TruncationSet;
pub use witt::{GhostVector, WittVector};

/// Deterministic primality test for the word-sized parameters used here.
pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.checked_mul(d).is_some_and(|dd| dd <= n) {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}
