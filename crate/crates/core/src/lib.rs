//! Sparse interpolation of polynomials given by straight-line programs over
//! finite fields.
//!
//! Given a division-free straight-line program computing an unknown
//! `f ∈ F_q[z]`, together with bounds `T ≥ #f` and `D ≥ deg f`, the
//! [`interp::majority_vote_interpolate`] driver recovers the sparse form of
//! `f` with probability at least `1 - ε`. The engine works from images
//! `f(αz) mod (z^p - 1)` for small primes `p` and diversifying multipliers
//! `α` drawn from an extension field, matching images of like terms across
//! primes by their coefficient vectors and Chinese-remaindering the exponent
//! residues of the winners.
//!
//! Module layout:
//!
//! * [`ff`] — arithmetic in `F_q` and `F_{q^s}`, irreducible moduli.
//! * [`modpoly`] — sparse polynomials with big-integer exponents and dense
//!   cyclic polynomials in `R[z]/(z^p - 1)`.
//! * [`slp`] — the straight-line program model, generic ring evaluation,
//!   probing, and Kronecker exponent packing.
//! * [`primes`] — parameter formulas, prime generation, and the probe-based
//!   prime selection procedure.
//! * [`interp`] — image computation, the evidence dictionary, and the
//!   interpolation driver with its single-term endgame.
//! * [`oracle`] — brute-force oracles for tests and experiments; never used
//!   by the interpolation path.

pub mod exec;
pub mod ff;
pub mod interp;
pub mod modpoly;
pub mod oracle;
pub mod primes;
mod real;
pub mod seed;
pub mod slp;

pub use ff::{ExtField, ExtFieldElement, FieldElement, PrimeField};
pub use interp::{InterpolationResult, IterationTrace};
pub use modpoly::{CyclicPoly, SparsePoly};
pub use primes::{ParamSet, PrimeImages};
pub use slp::{ProbeLedger, Slp};

/// Errors surfaced by every fallible operation in this crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("modulus {0} is not a prime in [2, 2^62)")]
    NotPrime(u64),
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("cycle length mismatch: {0} vs {1}")]
    CycleMismatch(u64, u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("exponent bound violated: {0}")]
    BoundViolation(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("inconsistent single-term endgame: {0}")]
    EndgameInconsistent(String),
    #[error("internal limit exceeded: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
