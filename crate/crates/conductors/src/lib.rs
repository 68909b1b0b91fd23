//! Computations around elliptic curves of prime and semiprime conductor.
//!
//! The library is organized bottom-up:
//!
//! * [`arith`] - exact integer arithmetic: primality, factorization, perfect
//!   squares, the Kronecker symbol.
//! * [`quadforms`] - class numbers of quadratic fields by reduced binary
//!   quadratic forms, with independent analytic cross-checks.
//! * [`curves`] - Weierstrass models, their standard invariants, and the
//!   one-parameter conductor family y^2 + y = x^3 + a x^2 + b x + n.
//! * [`existence`] - searches over the family for prime and semiprime
//!   conductors, almost-prime discriminant counts, and density constants.
//! * [`diophantine`] - the two-torsion Diophantine systems for semiprime
//!   conductor: B-value case analysis, seven power-equation families, bounded
//!   searches, and residue obstruction certificates.
//! * [`nonexistence`] - the pipeline combining congruence filtering and
//!   class-number conditions to certify that no curve of conductor N = pq
//!   exists.

pub mod arith;
pub mod curves;
pub mod diophantine;
pub mod existence;
pub mod nonexistence;
pub mod quadforms;

/// Errors shared across the library.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// A precondition on an argument was violated.
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// Factorization gave up; the value is the composite cofactor left over.
    #[error("factorization budget exhausted on composite cofactor {0}")]
    IncompleteFactorization(u128),
    /// The requested computation is only defined away from this prime.
    #[error("unsupported prime {0}")]
    UnsupportedPrime(u128),
}

pub type Result<T> = std::result::Result<T, Error>;
