//! Total unary and binary operations on ℕ.
//!
//! Every representation is structured and inspectable, so that membership
//! checks can reason about it syntactically where possible. Evaluation is
//! pure; the only failure modes are a contradicted almost-unary witness, an
//! unbound generator inside a term, or a malformed inverse lookup.

mod expr;
mod region;
pub mod pairing;
pub mod serde_nat;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use expr::{Expr, Growth, Op, Var};
pub use pairing::{pair, pair_delta, pair_diag, pair_nabla, unpair};
pub use region::{Region, RegionKind};

use crate::generation::{AlmostUnaryWitness, Axis, Decoder};
use crate::terms::{GenEnv, Term};
use crate::trees::SeqTree;
use crate::Nat;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("almost-unary witness violated at ({x}, {y}): value {value} exceeds bound {bound}")]
    WitnessViolation {
        x: Nat,
        y: Nat,
        value: Nat,
        bound: Nat,
    },
    #[error("generator {0:?} is not bound in the environment")]
    UnboundGenerator(String),
    #[error("min+ expects {expected} arguments (at least 2), got {got}")]
    ArityMismatch { expected: usize, got: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error("malformed function spec: {0}")]
    Json(String),
    #[error("invalid function spec: {0}")]
    Invalid(String),
}

impl From<serde_json::Error> for SpecError {
    fn from(e: serde_json::Error) -> Self {
        SpecError::Json(e.to_string())
    }
}

/// Named unary operations.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum UnaryBuiltin {
    Id,
    Succ,
    /// Truncated predecessor, `pred(0) = 0`.
    Pred,
    Double,
    DoubleSucc,
    Half,
    Sgn,
    /// `x ↦ p(x,x)`
    PairDiag,
    Const(Nat),
}

impl UnaryBuiltin {
    pub fn eval(&self, x: &Nat) -> Nat {
        match self {
            UnaryBuiltin::Id => x.clone(),
            UnaryBuiltin::Succ => x + 1u32,
            UnaryBuiltin::Pred => {
                if x.is_zero() {
                    Nat::zero()
                } else {
                    x - 1u32
                }
            }
            UnaryBuiltin::Double => x << 1u32,
            UnaryBuiltin::DoubleSucc => (x << 1u32) + 1u32,
            UnaryBuiltin::Half => x >> 1u32,
            UnaryBuiltin::Sgn => {
                if x.is_zero() {
                    Nat::zero()
                } else {
                    Nat::one()
                }
            }
            UnaryBuiltin::PairDiag => pair_diag(x),
            UnaryBuiltin::Const(c) => c.clone(),
        }
    }
}

impl fmt::Display for UnaryBuiltin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UnaryBuiltin::Id => f.write_str("id"),
            UnaryBuiltin::Succ => f.write_str("succ"),
            UnaryBuiltin::Pred => f.write_str("pred"),
            UnaryBuiltin::Double => f.write_str("double"),
            UnaryBuiltin::DoubleSucc => f.write_str("double_succ"),
            UnaryBuiltin::Half => f.write_str("half"),
            UnaryBuiltin::Sgn => f.write_str("sgn"),
            UnaryBuiltin::PairDiag => f.write_str("pair_diag"),
            UnaryBuiltin::Const(c) => write!(f, "const:{c}"),
        }
    }
}

impl FromStr for UnaryBuiltin {
    type Err = SpecError;

    fn from_str(s: &str) -> Result<Self, SpecError> {
        Ok(match s {
            "id" => UnaryBuiltin::Id,
            "succ" => UnaryBuiltin::Succ,
            "pred" => UnaryBuiltin::Pred,
            "double" => UnaryBuiltin::Double,
            "double_succ" => UnaryBuiltin::DoubleSucc,
            "half" => UnaryBuiltin::Half,
            "sgn" => UnaryBuiltin::Sgn,
            "pair_diag" => UnaryBuiltin::PairDiag,
            _ => match s.strip_prefix("const:").and_then(serde_nat::parse_nat) {
                Some(c) => UnaryBuiltin::Const(c),
                None => return Err(SpecError::Invalid(format!("unknown unary builtin {s:?}"))),
            },
        })
    }
}

/// Named binary operations.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BinaryBuiltin {
    /// The pairing `p`.
    Pair,
    /// `p_Δ`
    PairDelta,
    /// `p_∇`
    PairNabla,
    /// `χ_Δ`, the indicator of `x > y`.
    CharDelta,
    /// `χ_∇`, the indicator of `x < y`.
    CharNabla,
    Proj1,
    Proj2,
    Const(Nat),
    /// `min⁺₂ = max`
    MinPlus2,
}

impl BinaryBuiltin {
    pub const NAMED: [BinaryBuiltin; 8] = [
        BinaryBuiltin::Pair,
        BinaryBuiltin::PairDelta,
        BinaryBuiltin::PairNabla,
        BinaryBuiltin::CharDelta,
        BinaryBuiltin::CharNabla,
        BinaryBuiltin::Proj1,
        BinaryBuiltin::Proj2,
        BinaryBuiltin::MinPlus2,
    ];

    pub fn eval(&self, x: &Nat, y: &Nat) -> Nat {
        let indicator = |b: bool| if b { Nat::one() } else { Nat::zero() };
        match self {
            BinaryBuiltin::Pair => pair(x, y),
            BinaryBuiltin::PairDelta => pair_delta(x, y),
            BinaryBuiltin::PairNabla => pair_nabla(x, y),
            BinaryBuiltin::CharDelta => indicator(x > y),
            BinaryBuiltin::CharNabla => indicator(x < y),
            BinaryBuiltin::Proj1 => x.clone(),
            BinaryBuiltin::Proj2 => y.clone(),
            BinaryBuiltin::Const(c) => c.clone(),
            BinaryBuiltin::MinPlus2 => x.max(y).clone(),
        }
    }
}

impl fmt::Display for BinaryBuiltin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BinaryBuiltin::Pair => f.write_str("p"),
            BinaryBuiltin::PairDelta => f.write_str("p_delta"),
            BinaryBuiltin::PairNabla => f.write_str("p_nabla"),
            BinaryBuiltin::CharDelta => f.write_str("chi_delta"),
            BinaryBuiltin::CharNabla => f.write_str("chi_nabla"),
            BinaryBuiltin::Proj1 => f.write_str("pi1"),
            BinaryBuiltin::Proj2 => f.write_str("pi2"),
            BinaryBuiltin::Const(c) => write!(f, "const:{c}"),
            BinaryBuiltin::MinPlus2 => f.write_str("minplus2"),
        }
    }
}

impl FromStr for BinaryBuiltin {
    type Err = SpecError;

    fn from_str(s: &str) -> Result<Self, SpecError> {
        Ok(match s {
            "p" => BinaryBuiltin::Pair,
            "p_delta" => BinaryBuiltin::PairDelta,
            "p_nabla" => BinaryBuiltin::PairNabla,
            "chi_delta" => BinaryBuiltin::CharDelta,
            "chi_nabla" => BinaryBuiltin::CharNabla,
            "pi1" => BinaryBuiltin::Proj1,
            "pi2" => BinaryBuiltin::Proj2,
            "minplus2" | "max" => BinaryBuiltin::MinPlus2,
            _ => match s.strip_prefix("const:").and_then(serde_nat::parse_nat) {
                Some(c) => BinaryBuiltin::Const(c),
                None => return Err(SpecError::Invalid(format!("unknown binary builtin {s:?}"))),
            },
        })
    }
}

macro_rules! string_serde {
    ($ty:ty) => {
        impl Serialize for $ty {
            fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                s.serialize_str(&self.to_string())
            }
        }

        impl<'de> Deserialize<'de> for $ty {
            fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
                let s = String::deserialize(d)?;
                s.parse().map_err(serde::de::Error::custom)
            }
        }
    };
}

string_serde!(UnaryBuiltin);
string_serde!(BinaryBuiltin);

/// Fallback for inputs not listed in a unary table.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DefaultRule {
    Const(#[serde(with = "serde_nat")] Nat),
    Identity,
    /// `a·x + b`
    Affine(#[serde(with = "serde_nat")] Nat, #[serde(with = "serde_nat")] Nat),
}

impl DefaultRule {
    pub fn eval(&self, x: &Nat) -> Nat {
        match self {
            DefaultRule::Const(c) => c.clone(),
            DefaultRule::Identity => x.clone(),
            DefaultRule::Affine(a, b) => a * x + b,
        }
    }
}

/// Fallback for points not listed in a binary grid; depends on at most one
/// coordinate.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridDefault {
    Const(#[serde(with = "serde_nat")] Nat),
    X,
    Y,
    AffineX(#[serde(with = "serde_nat")] Nat, #[serde(with = "serde_nat")] Nat),
    AffineY(#[serde(with = "serde_nat")] Nat, #[serde(with = "serde_nat")] Nat),
}

impl GridDefault {
    pub fn eval(&self, x: &Nat, y: &Nat) -> Nat {
        match self {
            GridDefault::Const(c) => c.clone(),
            GridDefault::X => x.clone(),
            GridDefault::Y => y.clone(),
            GridDefault::AffineX(a, b) => a * x + b,
            GridDefault::AffineY(a, b) => a * y + b,
        }
    }

    /// The same rule as a unary rule in the axis coordinate, if it ignores
    /// the other coordinate.
    pub fn along(&self, axis: Axis) -> Option<DefaultRule> {
        match (self, axis) {
            (GridDefault::Const(c), _) => Some(DefaultRule::Const(c.clone())),
            (GridDefault::AffineX(a, b), _) | (GridDefault::AffineY(a, b), _) if a.is_zero() => {
                Some(DefaultRule::Const(b.clone()))
            }
            (GridDefault::X, Axis::X) | (GridDefault::Y, Axis::Y) => Some(DefaultRule::Identity),
            (GridDefault::AffineX(a, b), Axis::X) | (GridDefault::AffineY(a, b), Axis::Y) => {
                Some(DefaultRule::Affine(a.clone(), b.clone()))
            }
            _ => None,
        }
    }
}

/// Finite map `ℕ → ℕ`, serialized as `[[x, value], ...]`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "Vec<(serde_nat::N, serde_nat::N)>", into = "Vec<(serde_nat::N, serde_nat::N)>")]
pub struct UnaryTable(pub BTreeMap<Nat, Nat>);

impl From<Vec<(serde_nat::N, serde_nat::N)>> for UnaryTable {
    fn from(v: Vec<(serde_nat::N, serde_nat::N)>) -> Self {
        UnaryTable(v.into_iter().map(|(k, x)| (k.0, x.0)).collect())
    }
}

impl From<UnaryTable> for Vec<(serde_nat::N, serde_nat::N)> {
    fn from(t: UnaryTable) -> Self {
        t.0.into_iter()
            .map(|(k, v)| (serde_nat::N(k), serde_nat::N(v)))
            .collect()
    }
}

/// Finite map `ℕ×ℕ → ℕ`, serialized as `[[x, y, value], ...]`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(
    from = "Vec<(serde_nat::N, serde_nat::N, serde_nat::N)>",
    into = "Vec<(serde_nat::N, serde_nat::N, serde_nat::N)>"
)]
pub struct Grid(pub BTreeMap<(Nat, Nat), Nat>);

impl From<Vec<(serde_nat::N, serde_nat::N, serde_nat::N)>> for Grid {
    fn from(v: Vec<(serde_nat::N, serde_nat::N, serde_nat::N)>) -> Self {
        Grid(v.into_iter().map(|(x, y, z)| ((x.0, y.0), z.0)).collect())
    }
}

impl From<Grid> for Vec<(serde_nat::N, serde_nat::N, serde_nat::N)> {
    fn from(g: Grid) -> Self {
        g.0.into_iter()
            .map(|((x, y), z)| (serde_nat::N(x), serde_nat::N(y), serde_nat::N(z)))
            .collect()
    }
}

/// A total unary operation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "repr", rename_all = "snake_case")]
pub enum UnaryFn {
    Builtin {
        name: UnaryBuiltin,
    },
    Table {
        entries: UnaryTable,
        default: DefaultRule,
    },
    /// Applied left to right: `parts[0]` first.
    Compose {
        parts: Vec<UnaryFn>,
    },
    /// An expression in `x` alone.
    Formula {
        expr: Expr,
    },
    /// Inverse lookups used by the synthesizer; see [`Decoder`].
    Inverse {
        decoder: Decoder,
    },
}

impl UnaryFn {
    pub fn builtin(name: UnaryBuiltin) -> Self {
        UnaryFn::Builtin { name }
    }

    pub fn id() -> Self {
        UnaryFn::builtin(UnaryBuiltin::Id)
    }

    pub fn succ() -> Self {
        UnaryFn::builtin(UnaryBuiltin::Succ)
    }

    pub fn constant(c: u64) -> Self {
        UnaryFn::builtin(UnaryBuiltin::Const(Nat::from(c)))
    }

    pub fn table(entries: impl IntoIterator<Item = (Nat, Nat)>, default: DefaultRule) -> Self {
        UnaryFn::Table {
            entries: UnaryTable(entries.into_iter().collect()),
            default,
        }
    }

    pub fn compose(parts: Vec<UnaryFn>) -> Self {
        UnaryFn::Compose { parts }
    }

    pub fn formula(expr: Expr) -> Result<Self, SpecError> {
        let f = UnaryFn::Formula { expr };
        f.validate()?;
        Ok(f)
    }

    pub fn eval(&self, x: &Nat) -> Result<Nat, EvalError> {
        match self {
            UnaryFn::Builtin { name } => Ok(name.eval(x)),
            UnaryFn::Table { entries, default } => Ok(match entries.0.get(x) {
                Some(v) => v.clone(),
                None => default.eval(x),
            }),
            UnaryFn::Compose { parts } => {
                let mut v = x.clone();
                for part in parts {
                    v = part.eval(&v)?;
                }
                Ok(v)
            }
            UnaryFn::Formula { expr } => Ok(expr.eval(x, &Nat::zero())),
            UnaryFn::Inverse { decoder } => decoder.eval(x),
        }
    }

    pub fn eval_u64(&self, x: u64) -> Result<Nat, EvalError> {
        self.eval(&Nat::from(x))
    }

    pub fn validate(&self) -> Result<(), SpecError> {
        match self {
            UnaryFn::Formula { expr } if expr.mentions(Var::Y) => Err(SpecError::Invalid(
                "a unary formula may only mention x".into(),
            )),
            UnaryFn::Compose { parts } => parts.iter().try_for_each(UnaryFn::validate),
            UnaryFn::Inverse { decoder } => decoder.validate(),
            _ => Ok(()),
        }
    }

    pub fn from_json(s: &str) -> Result<Self, SpecError> {
        let f: UnaryFn = serde_json::from_str(s)?;
        f.validate()?;
        Ok(f)
    }
}

/// A term together with the environment resolving its generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TermFn {
    pub term: Term,
    #[serde(default = "GenEnv::standard", skip_serializing_if = "GenEnv::is_standard")]
    pub env: GenEnv,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "repr", rename_all = "snake_case")]
pub enum BinaryRepr {
    Builtin {
        name: BinaryBuiltin,
    },
    Table {
        entries: Grid,
        default: GridDefault,
    },
    /// One rule per region: below the diagonal, above it, on it.
    Piecewise {
        delta: Expr,
        nabla: Expr,
        diagonal: Expr,
    },
    Term(TermFn),
    /// The function `F(T)` built from a tree by [`crate::trees::tree_reduce`].
    TreeReduction {
        tree: SeqTree,
    },
}

/// A total binary operation, optionally carrying an almost-unary witness
/// that is checked at every evaluated point.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BinaryFn {
    #[serde(flatten)]
    pub repr: BinaryRepr,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<AlmostUnaryWitness>,
}

impl From<BinaryBuiltin> for BinaryFn {
    fn from(name: BinaryBuiltin) -> Self {
        BinaryFn::builtin(name)
    }
}

impl BinaryFn {
    pub fn new(repr: BinaryRepr) -> Self {
        BinaryFn { repr, witness: None }
    }

    pub fn builtin(name: BinaryBuiltin) -> Self {
        BinaryFn::new(BinaryRepr::Builtin { name })
    }

    pub fn constant(c: u64) -> Self {
        BinaryFn::builtin(BinaryBuiltin::Const(Nat::from(c)))
    }

    pub fn table(entries: impl IntoIterator<Item = ((Nat, Nat), Nat)>, default: GridDefault) -> Self {
        BinaryFn::new(BinaryRepr::Table {
            entries: Grid(entries.into_iter().collect()),
            default,
        })
    }

    pub fn piecewise(delta: Expr, nabla: Expr, diagonal: Expr) -> Self {
        BinaryFn::new(BinaryRepr::Piecewise {
            delta,
            nabla,
            diagonal,
        })
    }

    /// The same rule everywhere.
    pub fn formula(e: Expr) -> Self {
        BinaryFn::piecewise(e.clone(), e.clone(), e)
    }

    pub fn from_term(term: Term, env: GenEnv) -> Self {
        BinaryFn::new(BinaryRepr::Term(TermFn { term, env }))
    }

    /// `(x, y) ↦ self(y, x)`
    pub fn swapped(&self) -> Self {
        let env = GenEnv::new().bind("f", self.clone());
        BinaryFn::from_term(
            Term::compose(Term::gen("f"), Term::Proj2, Term::Proj1),
            env,
        )
    }

    pub fn with_witness(mut self, w: AlmostUnaryWitness) -> Self {
        self.witness = Some(w);
        self
    }

    pub fn as_builtin(&self) -> Option<&BinaryBuiltin> {
        match &self.repr {
            BinaryRepr::Builtin { name } => Some(name),
            _ => None,
        }
    }

    pub fn eval(&self, x: &Nat, y: &Nat) -> Result<Nat, EvalError> {
        let value = self.eval_unchecked(x, y)?;
        if let Some(w) = &self.witness {
            let coord = match w.axis {
                Axis::X => x,
                Axis::Y => y,
            };
            let bound = w.bound.eval(coord)?;
            if value > bound {
                return Err(EvalError::WitnessViolation {
                    x: x.clone(),
                    y: y.clone(),
                    value,
                    bound,
                });
            }
        }
        Ok(value)
    }

    pub fn eval_u64(&self, x: u64, y: u64) -> Result<Nat, EvalError> {
        self.eval(&Nat::from(x), &Nat::from(y))
    }

    fn eval_unchecked(&self, x: &Nat, y: &Nat) -> Result<Nat, EvalError> {
        match &self.repr {
            BinaryRepr::Builtin { name } => Ok(name.eval(x, y)),
            BinaryRepr::Table { entries, default } => {
                // BTreeMap<(Nat, Nat), _> only looks up by owned key
                Ok(match entries.0.get(&(x.clone(), y.clone())) {
                    Some(v) => v.clone(),
                    None => default.eval(x, y),
                })
            }
            BinaryRepr::Piecewise {
                delta,
                nabla,
                diagonal,
            } => Ok(match x.cmp(y) {
                std::cmp::Ordering::Greater => delta.eval(x, y),
                std::cmp::Ordering::Less => nabla.eval(x, y),
                std::cmp::Ordering::Equal => diagonal.eval(x, y),
            }),
            BinaryRepr::Term(TermFn { term, env }) => term.eval(env, x, y),
            BinaryRepr::TreeReduction { tree } => Ok(crate::trees::reduction_value(tree, x, y)),
        }
    }

    pub fn validate(&self) -> Result<(), SpecError> {
        if let Some(w) = &self.witness {
            w.bound.validate()?;
        }
        match &self.repr {
            BinaryRepr::Term(TermFn { term, env }) => {
                for name in term.generators() {
                    if env.get(&name).is_none() {
                        return Err(SpecError::Invalid(format!("generator {name:?} is unbound")));
                    }
                }
                term.validate()?;
                env.iter().try_for_each(|(_, f)| f.validate())
            }
            BinaryRepr::TreeReduction { tree } => tree
                .validate()
                .map_err(|e| SpecError::Invalid(e.to_string())),
            _ => Ok(()),
        }
    }

    pub fn from_json(s: &str) -> Result<Self, SpecError> {
        let f: BinaryFn = serde_json::from_str(s)?;
        f.validate()?;
        Ok(f)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("function specs always serialize")
    }
}

/// Free-function form of [`BinaryFn::eval`].
pub fn eval_binary(f: &BinaryFn, x: &Nat, y: &Nat) -> Result<Nat, EvalError> {
    f.eval(x, y)
}

/// Values on `[0,n)²`; row index is `x`, column index is `y`.
pub fn window_table(f: &BinaryFn, n: usize) -> Result<Vec<Vec<Nat>>, EvalError> {
    (0..n as u64)
        .map(|x| (0..n as u64).map(|y| f.eval_u64(x, y)).collect())
        .collect()
}

/// `min⁺ₙ`: the second smallest argument (with multiplicity).
pub fn minplus(n: usize, args: &[Nat]) -> Result<Nat, EvalError> {
    if n < 2 || args.len() != n {
        return Err(EvalError::ArityMismatch {
            expected: n,
            got: args.len(),
        });
    }
    let mut sorted: Vec<&Nat> = args.iter().collect();
    sorted.sort();
    Ok(sorted[1].clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nat;

    fn nats(v: &[u64]) -> Vec<Nat> {
        v.iter().copied().map(nat).collect()
    }

    #[test]
    fn char_functions() {
        let chi = BinaryFn::builtin(BinaryBuiltin::CharDelta);
        assert_eq!(chi.eval_u64(3, 1).unwrap(), nat(1));
        assert_eq!(chi.eval_u64(1, 3).unwrap(), nat(0));
        assert_eq!(chi.eval_u64(2, 2).unwrap(), nat(0));
    }

    #[test]
    fn windows() {
        let chi = BinaryFn::builtin(BinaryBuiltin::CharDelta);
        assert_eq!(window_table(&chi, 2).unwrap(), vec![nats(&[0, 0]), nats(&[1, 0])]);
        let p = BinaryFn::builtin(BinaryBuiltin::Pair);
        assert_eq!(window_table(&p, 2).unwrap(), vec![nats(&[1, 3]), nats(&[2, 5])]);
        let zero = BinaryFn::constant(0);
        assert_eq!(window_table(&zero, 3).unwrap(), vec![nats(&[0, 0, 0]); 3]);
    }

    #[test]
    fn minplus_examples() {
        assert_eq!(minplus(2, &nats(&[3, 7])).unwrap(), nat(7));
        assert_eq!(minplus(3, &nats(&[1, 5, 2])).unwrap(), nat(2));
        assert_eq!(minplus(3, &nats(&[4, 4, 9])).unwrap(), nat(4));
        assert!(matches!(
            minplus(3, &nats(&[1, 2])),
            Err(EvalError::ArityMismatch { expected: 3, got: 2 })
        ));
        assert!(minplus(1, &nats(&[1])).is_err());
    }

    #[test]
    fn witness_is_checked_lazily() {
        let f = BinaryFn::formula(Expr::add(Expr::x(), Expr::y())).with_witness(AlmostUnaryWitness::new(
            Axis::X,
            UnaryFn::builtin(UnaryBuiltin::Double),
        ));
        assert_eq!(f.eval_u64(3, 2).unwrap(), nat(5));
        let err = f.eval_u64(3, 4).unwrap_err();
        assert!(matches!(err, EvalError::WitnessViolation { .. }));
    }

    #[test]
    fn table_and_defaults() {
        let f = BinaryFn::table([((nat(1), nat(1)), nat(9))], GridDefault::AffineY(nat(2), nat(1)));
        assert_eq!(f.eval_u64(1, 1).unwrap(), nat(9));
        assert_eq!(f.eval_u64(0, 3).unwrap(), nat(7));
        let u = UnaryFn::table([(nat(0), nat(4))], DefaultRule::Affine(nat(3), nat(1)));
        assert_eq!(u.eval_u64(0).unwrap(), nat(4));
        assert_eq!(u.eval_u64(2).unwrap(), nat(7));
    }

    #[test]
    fn builtin_names_roundtrip() {
        for b in BinaryBuiltin::NAMED {
            assert_eq!(b.to_string().parse::<BinaryBuiltin>().unwrap(), b);
        }
        assert_eq!("const:12".parse::<BinaryBuiltin>().unwrap(), BinaryBuiltin::Const(nat(12)));
        assert!("q".parse::<BinaryBuiltin>().is_err());
        assert_eq!("max".parse::<BinaryBuiltin>().unwrap(), BinaryBuiltin::MinPlus2);
    }

    #[test]
    fn spec_json_shapes() {
        let f = BinaryFn::from_json(r#"{"repr":"builtin","name":"p_delta"}"#).unwrap();
        assert_eq!(f, BinaryFn::builtin(BinaryBuiltin::PairDelta));

        let t = BinaryFn::from_json(
            r#"{"repr":"table","entries":[[0,1,5]],"default":{"const":2}}"#,
        )
        .unwrap();
        assert_eq!(t.eval_u64(0, 1).unwrap(), nat(5));
        assert_eq!(t.eval_u64(4, 4).unwrap(), nat(2));

        let pw = BinaryFn::from_json(
            r#"{"repr":"piecewise","delta":["add","x","y"],"nabla":"x","diagonal":0,
                "witness":{"axis":"x","bound":{"repr":"builtin","name":"double"}}}"#,
        )
        .unwrap();
        assert_eq!(pw.eval_u64(3, 2).unwrap(), nat(5));
        assert!(pw.witness.is_some());

        let term = BinaryFn::from_json(r#"{"repr":"term","term":["compose",["gen","p_delta"],"p2","p1"]}"#)
            .unwrap();
        assert_eq!(term.eval_u64(1, 2).unwrap(), nat(8));

        let bad = UnaryFn::from_json(r#"{"repr":"formula","expr":["add","x","y"]}"#);
        assert!(bad.is_err());
        assert!(BinaryFn::from_json(r#"{"repr":"term","term":["gen","nope"]}"#).is_err());
    }

    #[test]
    fn spec_json_roundtrip() {
        let specs = [
            BinaryFn::builtin(BinaryBuiltin::Const(nat(7))),
            BinaryFn::table([((nat(2), nat(3)), nat(1))], GridDefault::X),
            BinaryFn::piecewise(Expr::x(), Expr::y(), Expr::lit(0)),
            BinaryFn::builtin(BinaryBuiltin::Pair).swapped(),
        ];
        for f in specs {
            let text = serde_json::to_string(&f).unwrap();
            assert_eq!(BinaryFn::from_json(&text).unwrap(), f, "{text}");
        }
        let big = BinaryFn::builtin(BinaryBuiltin::Const(nat(u64::MAX) * nat(10)));
        let text = serde_json::to_string(&big).unwrap();
        assert!(text.contains("184467440737095516150"));
        assert_eq!(BinaryFn::from_json(&text).unwrap(), big);
    }
}
