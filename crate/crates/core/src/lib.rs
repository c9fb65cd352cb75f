//! Binary operations on ℕ and the interval of binary clones above the unary
//! clone.
//!
//! The crate is organised bottom-up:
//!
//! * [`ops`] represents total unary and binary operations and evaluates them,
//!   including the pairing function `p` and the gated variants `p_Δ`, `p_∇`.
//! * [`terms`] is the binary-clone term algebra (composition, evaluation,
//!   bounded enumeration).
//! * [`canonize`] searches finite witness sets on which a function is
//!   canonical.
//! * [`membership`] produces graded verdicts for the almost-unary clone `T1`
//!   and the nowhere-injective clone `T2`.
//! * [`generation`] synthesizes terms over `{p_Δ}` plus unaries for witnessed
//!   almost-unary functions and extracts the dichotomy from non-`T2`
//!   functions.
//! * [`trees`] covers finite-sequence trees, the global sequence enumeration
//!   and the reduction from trees to binary functions.
//!
//! Natural numbers are arbitrary precision ([`Nat`]); indices of long
//! sequences in the enumeration quickly leave any fixed-width range.

pub mod canonize;
pub mod generation;
pub mod membership;
pub mod ops;
pub mod terms;
pub mod trees;

pub use canonize::{BlockTag, BlockType, CanonicalReport, RangeRelation, Region, RegionKind};
pub use generation::{AlmostUnaryWitness, Axis};
pub use membership::{CloneName, Status, Verdict};
pub use ops::{BinaryBuiltin, BinaryFn, DefaultRule, EvalError, Expr, UnaryBuiltin, UnaryFn};
pub use terms::{GenEnv, Term};
pub use trees::{Seq, SeqTree};

pub use num_bigint::BigUint;

/// A natural number.
pub type Nat = BigUint;

/// Shorthand for building a [`Nat`] from a machine integer.
pub fn nat(v: u64) -> Nat {
    Nat::from(v)
}
