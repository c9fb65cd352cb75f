//! Term synthesis for almost-unary functions and the dichotomy for
//! functions outside the nowhere-injective clone.
//!
//! The synthesizer follows the generation proof step by step. With
//! `g = f + 1` and `B = F + 2` (so `0 < g < B`), it builds
//!
//! ```text
//! q(x,y)  = p_Δ(P(x), p_Δ(x,y))            P(x) = p(x,x) + 1
//! f₁      = u₁ ∘ q                          p(B(x), g(x,y)) on Δ, B(x) elsewhere
//! f₂      = u₂ ∘ p_Δ(y+1, x)                0 on Δ, g(x,y) elsewhere
//! f       = v ∘ p_Δ(f₁, f₂)
//! ```
//!
//! The second pairing of the proof is `p` itself, which works because
//! `p(x,y) > x` everywhere. The unaries `u₁`, `u₂`, `v` are [`Decoder`]s:
//! they invert `p` with `unpair` and consult `f` where needed, returning 0
//! off the ranges the term actually feeds them.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::canonize::{validate_report, CanonicalReport, RangeRelation};
use crate::ops::{pair, pair_delta, unpair, BinaryBuiltin, BinaryFn, BinaryRepr, DefaultRule, EvalError, Expr, SpecError, UnaryBuiltin, UnaryFn};
use crate::terms::{GenEnv, Mismatch, Term};
use crate::Nat;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
}

impl Axis {
    pub fn pick<'a>(self, x: &'a Nat, y: &'a Nat) -> &'a Nat {
        match self {
            Axis::X => x,
            Axis::Y => y,
        }
    }
}

/// `f(x,y) ≤ bound(x)` (axis `x`) or `f(x,y) ≤ bound(y)` (axis `y`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AlmostUnaryWitness {
    pub axis: Axis,
    pub bound: UnaryFn,
    /// Set by the synthesizer when it shifted `f` by one to make it positive.
    #[serde(default)]
    pub positivity_shift: bool,
}

impl AlmostUnaryWitness {
    pub fn new(axis: Axis, bound: UnaryFn) -> Self {
        AlmostUnaryWitness {
            axis,
            bound,
            positivity_shift: false,
        }
    }
}

/// The table-backed inverse unaries.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Decoder {
    /// `u₁`: from a value of `q` to `f₁` at the same point.
    SynthRowCode {
        f: Box<BinaryFn>,
        bound: Box<UnaryFn>,
        #[serde(default)]
        swap: bool,
    },
    /// `u₂`: from `p_Δ(y+1, x)` to `f₂(x,y)`.
    SynthColumnCode {
        f: Box<BinaryFn>,
        #[serde(default)]
        swap: bool,
    },
    /// `v`: from `p(f₁, f₂)` back to `f`, undoing the positivity shift.
    SynthRecover,
    /// From `p(2x, 2y+1)` (or `p(2y+1, 2x)` when swapped) to `p_Δ(x,y)`.
    DoubledGridPairing {
        #[serde(default)]
        swapped: bool,
    },
}

/// `P(x) = p(x,x) + 1`
pub fn p_row(x: &Nat) -> Nat {
    crate::ops::pair_diag(x) + 1u32
}

/// Inverse of [`p_row`] on its range.
fn p_row_inverse(a: &Nat) -> Option<Nat> {
    // P(x) = 2x² + 2x + 2, so 2a - 3 = (2x + 1)²
    if *a < Nat::from(2u32) {
        return None;
    }
    let d = (a * 2u32 - 3u32).sqrt();
    if d.is_zero() {
        return None;
    }
    let x = (d - 1u32) / 2u32;
    (p_row(&x) == *a).then_some(x)
}

fn shifted(f: &BinaryFn, swap: bool, x: &Nat, y: &Nat) -> Result<Nat, EvalError> {
    let v = if swap { f.eval(y, x)? } else { f.eval(x, y)? };
    Ok(v + 1u32)
}

impl Decoder {
    pub fn eval(&self, z: &Nat) -> Result<Nat, EvalError> {
        match self {
            Decoder::SynthRowCode { f, bound, swap } => {
                let Some((a, b)) = unpair(z) else {
                    return Ok(Nat::zero());
                };
                if b.is_zero() {
                    match p_row_inverse(&a) {
                        Some(x) => Ok(bound.eval(&x)? + 2u32),
                        None => Ok(Nat::zero()),
                    }
                } else {
                    let (x, y) = unpair(&b).expect("b is nonzero");
                    let big = bound.eval(&x)? + 2u32;
                    Ok(pair(&big, &shifted(f, *swap, &x, &y)?))
                }
            }
            Decoder::SynthColumnCode { f, swap } => match unpair(z) {
                Some((a, x)) if !a.is_zero() => shifted(f, *swap, &x, &(a - 1u32)),
                _ => Ok(Nat::zero()),
            },
            Decoder::SynthRecover => {
                let Some((a, b)) = unpair(z) else {
                    return Ok(Nat::zero());
                };
                let g = if b.is_zero() {
                    unpair(&a).map(|(_, g)| g).unwrap_or_default()
                } else {
                    b
                };
                Ok(if g.is_zero() { g } else { g - 1u32 })
            }
            Decoder::DoubledGridPairing { swapped } => {
                let Some((a, b)) = unpair(z) else {
                    return Ok(Nat::zero());
                };
                let (even, odd) = if *swapped { (b, a) } else { (a, b) };
                let two = Nat::from(2u32);
                if (&even % &two).is_zero() && (&odd % &two).is_one() {
                    Ok(pair_delta(&(even / 2u32), &(odd / 2u32)))
                } else {
                    Ok(Nat::zero())
                }
            }
        }
    }

    pub fn validate(&self) -> Result<(), SpecError> {
        match self {
            Decoder::SynthRowCode { f, bound, .. } => {
                bound.validate()?;
                f.validate()
            }
            Decoder::SynthColumnCode { f, .. } => f.validate(),
            Decoder::SynthRecover | Decoder::DoubledGridPairing { .. } => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerationError {
    #[error("witness bound violated at ({x}, {y}): f = {value} > {bound}")]
    WitnessInvalid { x: u64, y: u64, value: Nat, bound: Nat },
    #[error("report does not certify the function: {0}")]
    ReportInvalid(String),
    #[error("report has no one-one block")]
    ReportNotInjective,
    #[error("window verification failed at ({x}, {y}): {detail}")]
    WindowVerificationFailed { x: u64, y: u64, detail: String },
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// `q` with its row functions `P` and `Q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QFunction {
    /// `p(P(x), p_Δ(x,y))`, evaluated through the pairing `p`.
    pub q: BinaryFn,
    pub p: UnaryFn,
    /// `Q(x) = p(P(x), 0)`, the value of `q` on row `x` of `∇`.
    pub q_nabla: UnaryFn,
}

fn p_unary() -> UnaryFn {
    UnaryFn::compose(vec![UnaryFn::builtin(UnaryBuiltin::PairDiag), UnaryFn::succ()])
}

/// `a ↦ p(a, 0) = a(a+1)/2 + 1`
fn pair_with_zero() -> UnaryFn {
    let x = Expr::x();
    UnaryFn::formula(Expr::add(
        Expr::div(Expr::mul(x.clone(), Expr::add(x, Expr::lit(1))), Expr::lit(2)),
        Expr::lit(1),
    ))
    .expect("mentions only x")
}

/// `q` as a term over `p_Δ` and unaries.
pub fn q_term() -> Term {
    Term::compose(
        Term::gen("p_delta"),
        Term::uapp(p_unary(), Term::Proj1),
        Term::gen("p_delta"),
    )
}

pub fn p_delta_env() -> GenEnv {
    GenEnv::with_builtins(&[BinaryBuiltin::PairDelta])
}

pub fn build_q() -> (QFunction, Term) {
    let direct = Term::compose(
        Term::gen("p"),
        Term::uapp(p_unary(), Term::Proj1),
        Term::gen("p_delta"),
    );
    let env = GenEnv::with_builtins(&[BinaryBuiltin::Pair, BinaryBuiltin::PairDelta]);
    let q = QFunction {
        q: BinaryFn::from_term(direct, env),
        p: p_unary(),
        q_nabla: UnaryFn::compose(vec![p_unary(), pair_with_zero()]),
    };
    (q, q_term())
}

/// Result of [`synthesize_t1_term`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Synthesis {
    pub input: BinaryFn,
    pub witness: AlmostUnaryWitness,
    pub term: Term,
    pub env: GenEnv,
    pub window: u64,
    pub mismatch: Option<Mismatch>,
}

impl Synthesis {
    pub fn verified(&self) -> bool {
        self.mismatch.is_none()
    }

    pub fn as_binary_fn(&self) -> BinaryFn {
        BinaryFn::from_term(self.term.clone(), self.env.clone())
    }
}

pub const DEFAULT_SYNTH_WINDOW: u64 = 40;

/// A term over `p_Δ` and unaries equal to `f`, checked on `[0,window)²`.
pub fn synthesize_t1_term(
    f: &BinaryFn,
    w: &AlmostUnaryWitness,
    window: u64,
) -> Result<Synthesis, GenerationError> {
    for x in 0..window {
        for y in 0..window {
            let (nx, ny) = (Nat::from(x), Nat::from(y));
            let value = f.eval(&nx, &ny)?;
            let bound = w.bound.eval(w.axis.pick(&nx, &ny))?;
            if value > bound {
                return Err(GenerationError::WitnessInvalid { x, y, value, bound });
            }
        }
    }

    let swap = w.axis == Axis::Y;
    let u1 = UnaryFn::Inverse {
        decoder: Decoder::SynthRowCode {
            f: Box::new(f.clone()),
            bound: Box::new(w.bound.clone()),
            swap,
        },
    };
    let u2 = UnaryFn::Inverse {
        decoder: Decoder::SynthColumnCode {
            f: Box::new(f.clone()),
            swap,
        },
    };
    let v = UnaryFn::Inverse {
        decoder: Decoder::SynthRecover,
    };
    let f1 = Term::uapp(u1, q_term());
    let f2 = Term::uapp(
        u2,
        Term::compose(Term::gen("p_delta"), Term::uapp(UnaryFn::succ(), Term::Proj2), Term::Proj1),
    );
    let mut term = Term::uapp(v, Term::compose(Term::gen("p_delta"), f1, f2));
    if swap {
        term = Term::compose(term, Term::Proj2, Term::Proj1);
    }

    let env = p_delta_env();
    let mut mismatch = None;
    'outer: for x in 0..window {
        for y in 0..window {
            let left = term.eval_u64(&env, x, y)?;
            let right = f.eval_u64(x, y)?;
            if left != right {
                mismatch = Some(Mismatch { x, y, left, right });
                break 'outer;
            }
        }
    }
    Ok(Synthesis {
        input: f.clone(),
        witness: AlmostUnaryWitness {
            positivity_shift: true,
            ..w.clone()
        },
        term,
        env,
        window,
        mismatch,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DichotomyKind {
    /// `f(2x, 2y+1)` is 1-1, so together with the unaries it generates all
    /// binary operations.
    FullCloneWitness,
    /// `u(f(2x, 2y+1)) = p_Δ(x,y)`, so the clone contains `p_Δ`.
    PDeltaTerm,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dichotomy {
    pub kind: DichotomyKind,
    /// A term over the single generator `f`.
    pub term: Term,
    pub env: GenEnv,
    /// Whether the arguments were swapped to put the 1-1 block below the
    /// diagonal.
    pub swapped: bool,
    pub window: u64,
}

pub const DEFAULT_DICHOTOMY_WINDOW: u64 = 25;

/// `(base, swapped)` when `f` is `p`, `p_Δ`, `p_∇` or one of them with its
/// arguments exchanged.
fn pairing_shape(f: &BinaryFn) -> Option<(BinaryBuiltin, bool)> {
    let is_pairing = |b: &BinaryBuiltin| {
        matches!(b, BinaryBuiltin::Pair | BinaryBuiltin::PairDelta | BinaryBuiltin::PairNabla)
    };
    if f.witness.is_some() {
        return None;
    }
    match &f.repr {
        BinaryRepr::Builtin { name } if is_pairing(name) => Some((name.clone(), false)),
        BinaryRepr::Term(tf) => match &tf.term {
            Term::Compose(head, l, r) if **l == Term::Proj2 && **r == Term::Proj1 => match &**head {
                Term::Gen(g) => {
                    let (inner, sw) = pairing_shape(tf.env.get(g)?)?;
                    Some((inner, !sw))
                }
                _ => None,
            },
            _ => None,
        },
        _ => None,
    }
}

/// `(x, y) ↦ f(2x, 2y+1)`, or `f(2y+1, 2x)` when `swap` is set.
fn doubled(swap: bool) -> Term {
    let even = Term::uapp(UnaryFn::builtin(UnaryBuiltin::Double), Term::Proj1);
    let odd = Term::uapp(UnaryFn::builtin(UnaryBuiltin::DoubleSucc), Term::Proj2);
    if swap {
        Term::compose(Term::gen("f"), odd, even)
    } else {
        Term::compose(Term::gen("f"), even, odd)
    }
}

/// Extract `p_Δ` or a 1-1 function from `f` and a canonical report with a
/// 1-1 block, verifying the result on `[0,window)²`.
pub fn derive_from_non_t2(
    f: &BinaryFn,
    report: &CanonicalReport,
    window: u64,
) -> Result<Dichotomy, GenerationError> {
    validate_report(f, report).map_err(|e| GenerationError::ReportInvalid(e.to_string()))?;
    if !report.has_injective_block() {
        return Err(GenerationError::ReportNotInjective);
    }
    let swap = !report.delta_type.is_one_one();
    let env = GenEnv::new().bind("f", f.clone());
    let inner = doubled(swap);

    match report.range_relation {
        RangeRelation::Symmetric => {
            let mut seen: BTreeMap<Nat, (u64, u64)> = BTreeMap::new();
            for x in 0..window {
                for y in 0..window {
                    let z = inner.eval_u64(&env, x, y)?;
                    if let Some((a, b)) = seen.insert(z.clone(), (x, y)) {
                        return Err(GenerationError::WindowVerificationFailed {
                            x,
                            y,
                            detail: format!("f(2x,2y+1) = {z} also at ({a}, {b}); not 1-1"),
                        });
                    }
                }
            }
            Ok(Dichotomy {
                kind: DichotomyKind::FullCloneWitness,
                term: inner,
                env,
                swapped: swap,
                window,
            })
        }
        RangeRelation::Disjoint => {
            let u = match pairing_shape(f) {
                Some((_, sw)) => UnaryFn::Inverse {
                    decoder: Decoder::DoubledGridPairing { swapped: sw != swap },
                },
                None => {
                    let mut entries: BTreeMap<Nat, (Nat, u64, u64)> = BTreeMap::new();
                    for x in 0..window {
                        for y in 0..window {
                            let z = inner.eval_u64(&env, x, y)?;
                            let want = pair_delta(&Nat::from(x), &Nat::from(y));
                            match entries.get(&z) {
                                Some((other, a, b)) if *other != want => {
                                    return Err(GenerationError::WindowVerificationFailed {
                                        x,
                                        y,
                                        detail: format!(
                                            "value {z} must decode to both {other} (at ({a}, {b})) and {want}"
                                        ),
                                    })
                                }
                                Some(_) => {}
                                None => {
                                    entries.insert(z, (want, x, y));
                                }
                            }
                        }
                    }
                    UnaryFn::table(
                        entries.into_iter().map(|(z, (v, _, _))| (z, v)),
                        DefaultRule::Const(Nat::zero()),
                    )
                }
            };
            let term = Term::uapp(u, inner);
            for x in 0..window {
                for y in 0..window {
                    let got = term.eval_u64(&env, x, y)?;
                    let want = pair_delta(&Nat::from(x), &Nat::from(y));
                    if got != want {
                        return Err(GenerationError::WindowVerificationFailed {
                            x,
                            y,
                            detail: format!("u(f(2x,2y+1)) = {got}, p_delta = {want}"),
                        });
                    }
                }
            }
            Ok(Dichotomy {
                kind: DichotomyKind::PDeltaTerm,
                term,
                env,
                swapped: swap,
                window,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonize::greedy_canonize;
    use crate::nat;

    #[test]
    fn p_row_values() {
        let p = p_unary();
        assert_eq!(p.eval_u64(0).unwrap(), nat(2));
        assert_eq!(p.eval_u64(1).unwrap(), nat(6));
        assert_eq!(p.eval_u64(2).unwrap(), nat(14));
        for x in 0..300u64 {
            // the max over y ≤ x of p(x, y) sits at y = x
            let max = (0..=x).map(|y| pair(&nat(x), &nat(y))).max().unwrap();
            assert_eq!(p_row(&nat(x)), max + 1u32);
            assert_eq!(p_row_inverse(&p_row(&nat(x))), Some(nat(x)));
            assert_eq!(p_row_inverse(&(p_row(&nat(x)) + 1u32)), None);
        }
        assert_eq!(p_row_inverse(&nat(0)), None);
        assert_eq!(p_row_inverse(&nat(1)), None);
    }

    #[test]
    fn q_values() {
        let (q, t) = build_q();
        let env = p_delta_env();
        assert_eq!(q.q.eval_u64(0, 5).unwrap(), nat(4));
        assert_eq!(q.q.eval_u64(1, 0).unwrap(), nat(39));
        assert_eq!(t.eval_u64(&env, 0, 5).unwrap(), nat(4));
        assert_eq!(t.eval_u64(&env, 1, 0).unwrap(), nat(39));
        assert_eq!(q.q_nabla.eval_u64(0).unwrap(), nat(4));
        assert_eq!(t.generators().into_iter().collect::<Vec<_>>(), vec!["p_delta".to_string()]);
    }

    #[test]
    fn synthesize_constant() {
        let f = BinaryFn::constant(1);
        let w = AlmostUnaryWitness::new(Axis::X, UnaryFn::constant(2));
        let s = synthesize_t1_term(&f, &w, 40).unwrap();
        assert!(s.verified(), "{:?}", s.mismatch);
        assert!(s.witness.positivity_shift);
    }

    #[test]
    fn synthesize_min_plus_one() {
        let f = BinaryFn::formula(Expr::add(Expr::min(Expr::x(), Expr::y()), Expr::lit(1)));
        let bound = UnaryFn::formula(Expr::add(Expr::x(), Expr::lit(2))).unwrap();
        let s = synthesize_t1_term(&f, &AlmostUnaryWitness::new(Axis::X, bound.clone()), 40).unwrap();
        assert!(s.verified(), "{:?}", s.mismatch);
        let s = synthesize_t1_term(&f, &AlmostUnaryWitness::new(Axis::Y, bound), 40).unwrap();
        assert!(s.verified(), "{:?}", s.mismatch);
    }

    #[test]
    fn synthesize_zero_valued_and_y_axis() {
        // g(x,y) = y mod 3 is bounded by a function of y only
        let f = BinaryFn::formula(Expr::modulo(Expr::y(), Expr::lit(3)));
        let w = AlmostUnaryWitness::new(Axis::Y, UnaryFn::constant(2));
        assert!(synthesize_t1_term(&f, &w, 30).unwrap().verified());
        let w = AlmostUnaryWitness::new(Axis::X, UnaryFn::constant(1));
        assert!(matches!(
            synthesize_t1_term(&f, &w, 30),
            Err(GenerationError::WitnessInvalid { x: 0, y: 2, .. })
        ));
    }

    #[test]
    fn recover_decoder_skips_off_range() {
        let v = Decoder::SynthRecover;
        assert_eq!(v.eval(&nat(0)).unwrap(), nat(0));
        // p(a, 0) with a = 1 = p(0,0): recovered g is 0, stays 0
        assert_eq!(v.eval(&pair(&nat(1), &nat(0))).unwrap(), nat(0));
        assert_eq!(v.eval(&pair(&nat(9), &nat(4))).unwrap(), nat(3));
    }

    #[test]
    fn dichotomy_for_p() {
        let f = BinaryFn::builtin(BinaryBuiltin::Pair);
        let seeds: Vec<Nat> = (0..20).map(nat).collect();
        let r = greedy_canonize(&f, &seeds, &seeds, 4).unwrap().unwrap();
        let d = derive_from_non_t2(&f, &r, 25).unwrap();
        assert_eq!(d.kind, DichotomyKind::PDeltaTerm);
        let u = Decoder::DoubledGridPairing { swapped: false };
        assert_eq!(u.eval(&nat(8)).unwrap(), nat(2));
    }

    #[test]
    fn dichotomy_for_swapped_pairings() {
        let seeds: Vec<Nat> = (0..20).map(nat).collect();
        for f in [
            BinaryFn::builtin(BinaryBuiltin::Pair).swapped(),
            BinaryFn::builtin(BinaryBuiltin::PairNabla),
            BinaryFn::builtin(BinaryBuiltin::PairDelta),
            BinaryFn::builtin(BinaryBuiltin::PairDelta).swapped(),
        ] {
            let r = greedy_canonize(&f, &seeds, &seeds, 4).unwrap().unwrap();
            let d = derive_from_non_t2(&f, &r, 25).unwrap();
            assert_eq!(d.kind, DichotomyKind::PDeltaTerm);
        }
    }

    #[test]
    fn dichotomy_table_fallback() {
        // p(x+1, y) is 1-1 but not one of the recognised pairings
        let t = Term::compose(Term::gen("p"), Term::uapp(UnaryFn::succ(), Term::Proj1), Term::Proj2);
        let f = BinaryFn::from_term(t, GenEnv::standard());
        let seeds: Vec<Nat> = (0..10).map(nat).collect();
        let r = greedy_canonize(&f, &seeds, &seeds, 3).unwrap().unwrap();
        let d = derive_from_non_t2(&f, &r, 12).unwrap();
        assert_eq!(d.kind, DichotomyKind::PDeltaTerm);
        assert!(matches!(d.term, Term::UnaryApp(UnaryFn::Table { .. }, _)));
    }

    #[test]
    fn dichotomy_needs_injective_block() {
        let f = BinaryFn::builtin(BinaryBuiltin::CharDelta);
        let seeds: Vec<Nat> = (0..10).map(nat).collect();
        let r = greedy_canonize(&f, &seeds, &seeds, 3).unwrap().unwrap();
        assert_eq!(derive_from_non_t2(&f, &r, 10), Err(GenerationError::ReportNotInjective));
    }

    #[test]
    fn dichotomy_symmetric_sum_fails() {
        let f = BinaryFn::formula(Expr::add(Expr::x(), Expr::y()));
        let seeds: Vec<Nat> = (0..=10).map(|i| nat(1 << i)).collect();
        let r = greedy_canonize(&f, &seeds, &seeds, 4).unwrap().unwrap();
        assert_eq!(r.range_relation, RangeRelation::Symmetric);
        let err = derive_from_non_t2(&f, &r, 10).unwrap_err();
        assert!(matches!(err, GenerationError::WindowVerificationFailed { .. }));
    }

    #[test]
    fn tampered_report_rejected() {
        let f = BinaryFn::builtin(BinaryBuiltin::Pair);
        let seeds: Vec<Nat> = (0..10).map(nat).collect();
        let mut r = greedy_canonize(&f, &seeds, &seeds, 3).unwrap().unwrap();
        r.s1[0] = nat(100);
        assert!(matches!(derive_from_non_t2(&f, &r, 5), Err(GenerationError::ReportInvalid(_))));
    }
}
