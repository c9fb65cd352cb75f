//! Membership evidence for the almost-unary clone `T1` and the
//! nowhere-injective clone `T2`.
//!
//! Both properties quantify over infinite data, so verdicts are graded:
//! `DecidedIn`/`DecidedOut` only come from representations where the
//! property can be read off syntactically, `EvidenceIn` records a finite
//! check that found nothing against membership, and `Falsified` carries a
//! re-validated counterexample. `Inconclusive` covers black boxes whose
//! window data fits neither way, and searches stopped by their budget.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::canonize::{canonize_search, validate_report, CanonError, CanonicalReport, Requirement, SearchConfig};
use crate::generation::{AlmostUnaryWitness, Axis};
use crate::ops::serde_nat;
use crate::ops::{BinaryBuiltin, BinaryFn, BinaryRepr, DefaultRule, EvalError, Expr, Growth, UnaryBuiltin, UnaryFn, Var};
use crate::trees::SeqTree;
use crate::Nat;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MembershipError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("unknown builtin {0:?}")]
    UnknownBuiltin(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Canon(#[from] CanonError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CloneName {
    T1,
    T2,
    #[serde(rename = "T1&T2")]
    T1AndT2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    DecidedIn,
    DecidedOut,
    EvidenceIn { k: u64 },
    Falsified,
    Inconclusive,
}

impl Status {
    /// `DecidedIn` or `EvidenceIn`.
    pub fn leans_in(self) -> bool {
        matches!(self, Status::DecidedIn | Status::EvidenceIn { .. })
    }

    /// `DecidedOut` or `Falsified`.
    pub fn is_out(self) -> bool {
        matches!(self, Status::DecidedOut | Status::Falsified)
    }

    pub fn is_decided(self) -> bool {
        matches!(self, Status::DecidedIn | Status::DecidedOut)
    }

    /// Whether one verdict asserts membership and the other refutes it.
    pub fn contradicts(self, other: Status) -> bool {
        (self.leans_in() && other.is_out()) || (self.is_out() && other.leans_in())
    }
}

/// Why a row (axis `x`) or column (axis `y`) is unbounded.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnboundedCert {
    pub axis: Axis,
    pub reason: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeedFamily {
    Initial,
    PowersOfTwo,
    FactorialGaps,
}

impl SeedFamily {
    pub const ALL: [SeedFamily; 3] = [SeedFamily::Initial, SeedFamily::PowersOfTwo, SeedFamily::FactorialGaps];
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    Bound {
        axis: Axis,
        bound: UnaryFn,
    },
    Unbounded {
        certificates: Vec<UnboundedCert>,
    },
    /// Row (axis `x`) or column maxima over `[0,n)`; `stable` is whether
    /// they stayed the same when the window grew to `probe`.
    WindowMaxima {
        axis: Axis,
        n: u64,
        probe: u64,
        #[serde(with = "serde_nat::seq")]
        maxima: Vec<Nat>,
        stable: bool,
    },
    Canonical {
        report: CanonicalReport,
        family: Option<SeedFamily>,
    },
    Search {
        seed_bound: u64,
        seed_start: u64,
        k: usize,
        families: Vec<SeedFamily>,
        nodes: u64,
        complete: bool,
    },
    Components {
        t1: Box<Verdict>,
        t2: Box<Verdict>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub clone: CloneName,
    #[serde(flatten)]
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl Verdict {
    fn new(clone: CloneName, status: Status, witness: Option<Witness>) -> Self {
        Verdict { clone, status, witness }
    }

    fn bound(axis: Axis, bound: UnaryFn) -> Self {
        Verdict::new(CloneName::T1, Status::DecidedIn, Some(Witness::Bound { axis, bound }))
    }

    fn unbounded(certificates: Vec<UnboundedCert>) -> Self {
        Verdict::new(CloneName::T1, Status::DecidedOut, Some(Witness::Unbounded { certificates }))
    }
}

fn both_unbounded(why: &str) -> Vec<UnboundedCert> {
    [Axis::X, Axis::Y]
        .into_iter()
        .map(|axis| UnboundedCert {
            axis,
            reason: why.to_string(),
        })
        .collect()
}

fn builtin_t1(b: &BinaryBuiltin) -> Verdict {
    use BinaryBuiltin::*;
    let diag = || UnaryFn::builtin(UnaryBuiltin::PairDiag);
    match b {
        CharDelta | CharNabla => Verdict::bound(Axis::X, UnaryFn::constant(1)),
        Const(c) => Verdict::bound(Axis::X, UnaryFn::builtin(UnaryBuiltin::Const(c.clone()))),
        Proj1 => Verdict::bound(Axis::X, UnaryFn::id()),
        Proj2 => Verdict::bound(Axis::Y, UnaryFn::id()),
        // p(x,y) ≤ p(x,x) for y ≤ x, and 0 above the diagonal
        PairDelta => Verdict::bound(Axis::X, diag()),
        PairNabla => Verdict::bound(Axis::Y, diag()),
        Pair => Verdict::unbounded(both_unbounded("p(x,y) ≥ x + y, so every row and column diverges")),
        MinPlus2 => Verdict::unbounded(both_unbounded("max(x,y) ≥ x + y over 2 diverges in either coordinate")),
    }
}

/// Whether `b` is nowhere injective, from the hand table.
fn builtin_in_t2(b: &BinaryBuiltin) -> bool {
    !matches!(b, BinaryBuiltin::Pair | BinaryBuiltin::PairDelta | BinaryBuiltin::PairNabla)
}

/// Small canonical report with a 1-1 block, used as the payload of
/// `DecidedOut(T2)` for the pairing builtins.
fn injective_report(f: &BinaryFn) -> Result<Option<CanonicalReport>, MembershipError> {
    let seeds: Vec<Nat> = (0..12u64).map(Nat::from).collect();
    let cfg = SearchConfig::for_size(3, Requirement::InjectiveBlock);
    Ok(canonize_search(f, &seeds, &seeds, 3, cfg)?.report)
}

/// The hand-audited `(T1, T2)` classification of a builtin.
pub fn classify(b: &BinaryBuiltin) -> Result<(Verdict, Verdict), MembershipError> {
    let t1 = builtin_t1(b);
    let t2 = if builtin_in_t2(b) {
        Verdict::new(CloneName::T2, Status::DecidedIn, None)
    } else {
        let report = injective_report(&BinaryFn::builtin(b.clone()))?;
        Verdict::new(
            CloneName::T2,
            Status::DecidedOut,
            report.map(|report| Witness::Canonical { report, family: None }),
        )
    };
    Ok((t1, t2))
}

pub fn classify_builtin(name: &str) -> Result<(Verdict, Verdict), MembershipError> {
    let b: BinaryBuiltin = name
        .parse()
        .map_err(|_| MembershipError::UnknownBuiltin(name.to_string()))?;
    classify(&b)
}

/// Conjunction of a `T1` and a `T2` verdict.
pub fn intersect(t1: &Verdict, t2: &Verdict) -> Verdict {
    let (a, b) = (t1.status, t2.status);
    let status = if a == Status::DecidedOut || b == Status::DecidedOut {
        Status::DecidedOut
    } else if a == Status::Falsified || b == Status::Falsified {
        Status::Falsified
    } else if a == Status::DecidedIn && b == Status::DecidedIn {
        Status::DecidedIn
    } else if a == Status::Inconclusive || b == Status::Inconclusive {
        Status::Inconclusive
    } else {
        let k = |s: Status| match s {
            Status::EvidenceIn { k } => k,
            _ => u64::MAX,
        };
        Status::EvidenceIn { k: k(a).min(k(b)) }
    };
    Verdict::new(
        CloneName::T1AndT2,
        status,
        Some(Witness::Components {
            t1: Box::new(t1.clone()),
            t2: Box::new(t2.clone()),
        }),
    )
}

enum AxisBound {
    Bounded(UnaryFn),
    Unbounded(String),
    Unknown,
}

fn unary_formula(e: Expr) -> UnaryFn {
    UnaryFn::formula(e).expect("bound mentions only x")
}

/// Bound along `axis` for a piecewise rule. With the axis coordinate fixed,
/// only the off-axis region is infinite: `∇` for rows, `Δ` for columns.
fn piecewise_bound(delta: &Expr, nabla: &Expr, diagonal: &Expr, axis: Axis) -> AxisBound {
    let (fixed, free) = match axis {
        Axis::X => (Var::X, Var::Y),
        Axis::Y => (Var::Y, Var::X),
    };
    let (finite_side, infinite_side) = match axis {
        Axis::X => (delta, nabla),
        Axis::Y => (nabla, delta),
    };
    let fixed_expr = Expr::Var(fixed);
    let near = |v: Var| Some(Expr::Var(if v == free { fixed } else { v }));
    let far = |v: Var| (v == fixed).then_some(Expr::Var(fixed));
    match infinite_side.growth(free) {
        Growth::Divergent => {
            return AxisBound::Unbounded(format!(
                "the {} rule {} diverges as {} grows",
                if axis == Axis::X { "nabla" } else { "delta" },
                infinite_side,
                if free == Var::Y { "y" } else { "x" },
            ))
        }
        Growth::Unknown => return AxisBound::Unknown,
        Growth::Bounded => {}
    }
    let (Some(a), Some(c)) = (finite_side.upper_bound(&near), infinite_side.upper_bound(&far)) else {
        return AxisBound::Unknown;
    };
    let d = diagonal.substitute(free, &fixed_expr);
    let mut bound = Expr::max(Expr::max(a, d), c);
    if fixed == Var::Y {
        // rename so the bound is a formula in its own argument
        bound = bound.substitute(Var::Y, &Expr::x());
    }
    AxisBound::Bounded(unary_formula(bound))
}

/// Bound for a finite grid plus a default rule in one coordinate.
fn table_bound(entries: &BTreeMap<(Nat, Nat), Nat>, default: &crate::ops::GridDefault, axis: Axis) -> Option<UnaryFn> {
    let rule = default.along(axis)?;
    let mut rows: BTreeMap<Nat, Nat> = BTreeMap::new();
    for ((x, y), v) in entries {
        let key = axis.pick(x, y).clone();
        let base = rule.eval(&key);
        let slot = rows.entry(key).or_insert(base);
        if v > slot {
            *slot = v.clone();
        }
    }
    Some(UnaryFn::table(rows, rule))
}

fn tree_bound(tree: &SeqTree) -> Verdict {
    if let Some(t) = tree.as_finite() {
        // finitely many nonzero values: a per-row table with default 0
        let mut rows: BTreeMap<Nat, Nat> = BTreeMap::new();
        let members: Vec<&Nat> = t.indices().collect();
        for (i, k) in members.iter().enumerate() {
            for n in &members[i + 1..] {
                let v = crate::trees::reduction_value(tree, k, n);
                if !v.is_zero() {
                    let slot = rows.entry((*k).clone()).or_default();
                    if &v > slot {
                        *slot = v;
                    }
                }
            }
        }
        return Verdict::bound(Axis::X, UnaryFn::table(rows, DefaultRule::Const(Nat::zero())));
    }
    // F(T)(k,n) is p(k,n) with k < n, or 0, and p(k,n) < p(n,n)
    Verdict::bound(Axis::Y, UnaryFn::builtin(UnaryBuiltin::PairDiag))
}

fn window_maxima(f: &BinaryFn, axis: Axis, n: u64, width: u64) -> Result<Vec<Nat>, EvalError> {
    (0..n)
        .map(|a| {
            let mut best = Nat::zero();
            for b in 0..width {
                let v = match axis {
                    Axis::X => f.eval_u64(a, b)?,
                    Axis::Y => f.eval_u64(b, a)?,
                };
                if v > best {
                    best = v;
                }
            }
            Ok(best)
        })
        .collect()
}

/// `T1` membership of `f`, decided from its representation where possible.
///
/// Black boxes get the window form of `∀x ∃z ∀y f(x,y) ≤ z`: row maxima over
/// `y < n` are compared with maxima over `y < probe`, and likewise for
/// columns. Maxima that do not move on some axis give `EvidenceIn(n)`.
/// A `probe` not above `n` is raised to `2n`.
pub fn check_t1_window(f: &BinaryFn, n: u64, probe: u64) -> Result<Verdict, MembershipError> {
    if n == 0 {
        return Err(MembershipError::InvalidArgument("window size must be at least 1".into()));
    }
    if let Some(w) = &f.witness {
        // evaluation checks the witness at each point
        for x in 0..n {
            for y in 0..n {
                f.eval_u64(x, y)?;
            }
        }
        let AlmostUnaryWitness { axis, bound, .. } = w;
        return Ok(Verdict::bound(*axis, bound.clone()));
    }
    match &f.repr {
        BinaryRepr::Builtin { name } => return Ok(builtin_t1(name)),
        BinaryRepr::Table { entries, default } => {
            for axis in [Axis::X, Axis::Y] {
                if let Some(b) = table_bound(&entries.0, default, axis) {
                    return Ok(Verdict::bound(axis, b));
                }
            }
        }
        BinaryRepr::Piecewise { delta, nabla, diagonal } => {
            match (
                piecewise_bound(delta, nabla, diagonal, Axis::X),
                piecewise_bound(delta, nabla, diagonal, Axis::Y),
            ) {
                (AxisBound::Bounded(b), _) => return Ok(Verdict::bound(Axis::X, b)),
                (_, AxisBound::Bounded(b)) => return Ok(Verdict::bound(Axis::Y, b)),
                (AxisBound::Unbounded(rx), AxisBound::Unbounded(ry)) => {
                    return Ok(Verdict::unbounded(vec![
                        UnboundedCert { axis: Axis::X, reason: rx },
                        UnboundedCert { axis: Axis::Y, reason: ry },
                    ]))
                }
                _ => {}
            }
        }
        BinaryRepr::TreeReduction { tree } => return Ok(tree_bound(tree)),
        BinaryRepr::Term(_) => {}
    }

    let probe = if probe > n { probe } else { 2 * n };
    let mut first = None;
    for axis in [Axis::X, Axis::Y] {
        let small = window_maxima(f, axis, n, n)?;
        let large = window_maxima(f, axis, n, probe)?;
        let stable = small == large;
        let w = Witness::WindowMaxima {
            axis,
            n,
            probe,
            maxima: small,
            stable,
        };
        if stable {
            return Ok(Verdict::new(CloneName::T1, Status::EvidenceIn { k: n }, Some(w)));
        }
        first.get_or_insert(w);
    }
    Ok(Verdict::new(CloneName::T1, Status::Inconclusive, first))
}

/// Seeds for the `T2` search: `start + s` for `s` in each family, the
/// initial segment taking `s < bound` and the sparse families taking their
/// members below `bound`, but never fewer than `2k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedPlan {
    pub start: u64,
    pub bound: u64,
    pub families: Vec<SeedFamily>,
}

impl SeedPlan {
    pub fn new(bound: u64) -> Self {
        SeedPlan {
            start: 0,
            bound,
            families: SeedFamily::ALL.to_vec(),
        }
    }

    pub fn starting_at(mut self, start: u64) -> Self {
        self.start = start;
        self
    }

    pub fn with_families(mut self, families: &[SeedFamily]) -> Self {
        self.families = families.to_vec();
        self
    }

    pub fn seeds(&self, family: SeedFamily, k: usize) -> Vec<Nat> {
        let start = Nat::from(self.start);
        let bound = Nat::from(self.bound);
        let min = 2 * k;
        let mut out = Vec::new();
        match family {
            SeedFamily::Initial => {
                out.extend((0..self.bound).map(|s| &start + s));
            }
            SeedFamily::PowersOfTwo => {
                let mut s = Nat::from(1u32);
                while s < bound || out.len() < min {
                    out.push(&start + &s);
                    s *= 2u32;
                }
            }
            SeedFamily::FactorialGaps => {
                // 1!, 2!, 3!, …
                let mut s = Nat::from(1u32);
                let mut i = 1u32;
                while s < bound || out.len() < min {
                    out.push(&start + &s);
                    i += 1;
                    s *= i;
                }
            }
        }
        out
    }
}

/// Node budget shared by all searches of one `T2` check.
pub const T2_TOTAL_BUDGET: u64 = 4_000_000;

/// `T2` search over `[0, seed_bound)` and the sparse families.
pub fn check_t2_search(f: &BinaryFn, seed_bound: u64, k: usize) -> Result<Verdict, MembershipError> {
    check_t2_search_with(f, &SeedPlan::new(seed_bound), k)
}

/// Looks for a canonical report with a 1-1 block, at size `k` and then at
/// every smaller size, so that `EvidenceIn(k)` also rules out witnesses of
/// any size below `k`.
pub fn check_t2_search_with(f: &BinaryFn, plan: &SeedPlan, k: usize) -> Result<Verdict, MembershipError> {
    if k < 2 {
        return Err(MembershipError::InvalidArgument("k must be at least 2".into()));
    }
    let mut nodes = 0;
    let mut complete = true;
    for &family in &plan.families {
        let seeds = plan.seeds(family, k);
        for size in (2..=k).rev() {
            if seeds.len() < size {
                continue;
            }
            let left = T2_TOTAL_BUDGET.saturating_sub(nodes);
            if left == 0 {
                complete = false;
                break;
            }
            let mut cfg = SearchConfig::for_size(size, Requirement::InjectiveBlock);
            cfg.budget = cfg.budget.map(|b| b.min(left));
            let out = canonize_search(f, &seeds, &seeds, size, cfg)?;
            nodes += out.nodes;
            complete &= out.complete;
            if let Some(report) = out.report {
                validate_report(f, &report)?;
                return Ok(Verdict::new(
                    CloneName::T2,
                    Status::Falsified,
                    Some(Witness::Canonical {
                        report,
                        family: Some(family),
                    }),
                ));
            }
        }
    }
    let status = if complete {
        Status::EvidenceIn { k: k as u64 }
    } else {
        Status::Inconclusive
    };
    Ok(Verdict::new(
        CloneName::T2,
        status,
        Some(Witness::Search {
            seed_bound: plan.bound,
            seed_start: plan.start,
            k,
            families: plan.families.clone(),
            nodes,
            complete,
        }),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nat;
    use crate::ops::GridDefault;
    use crate::terms::{GenEnv, Term};

    fn bb(b: BinaryBuiltin) -> BinaryFn {
        BinaryFn::builtin(b)
    }

    fn black_box(b: BinaryBuiltin) -> BinaryFn {
        BinaryFn::from_term(Term::gen(b.to_string()), GenEnv::standard())
    }

    #[test]
    fn t1_examples() {
        let v = check_t1_window(&bb(BinaryBuiltin::PairDelta), 50, 100).unwrap();
        assert_eq!(v.status, Status::DecidedIn);
        let Some(Witness::Bound { axis, bound }) = v.witness else { panic!() };
        assert_eq!(axis, Axis::X);
        for x in 0..20 {
            assert_eq!(bound.eval_u64(x).unwrap(), nat(2 * x * x + 2 * x + 1));
        }
        let v = check_t1_window(&bb(BinaryBuiltin::Pair), 50, 100).unwrap();
        assert_eq!(v.status, Status::DecidedOut);
        let v = check_t1_window(&BinaryFn::constant(7), 10, 20).unwrap();
        assert_eq!(v.witness, Some(Witness::Bound { axis: Axis::X, bound: UnaryFn::constant(7) }));
    }

    #[test]
    fn t1_piecewise() {
        // min(x,y)+1 is bounded by x+1 along rows
        let f = BinaryFn::formula(Expr::add(Expr::min(Expr::x(), Expr::y()), Expr::lit(1)));
        let v = check_t1_window(&f, 10, 20).unwrap();
        assert_eq!(v.status, Status::DecidedIn);
        let Some(Witness::Bound { bound, .. }) = v.witness else { panic!() };
        for x in 0..30u64 {
            for y in 0..30u64 {
                assert!(f.eval_u64(x, y).unwrap() <= bound.eval_u64(x).unwrap());
            }
        }
        // y only, so bounded along columns
        let g = BinaryFn::formula(Expr::mul(Expr::y(), Expr::lit(3)));
        let v = check_t1_window(&g, 10, 20).unwrap();
        let Some(Witness::Bound { axis, bound }) = v.witness else { panic!() };
        assert_eq!(axis, Axis::Y);
        assert_eq!(bound.eval_u64(4).unwrap(), nat(12));
        let sum = BinaryFn::formula(Expr::add(Expr::x(), Expr::y()));
        assert_eq!(check_t1_window(&sum, 10, 20).unwrap().status, Status::DecidedOut);
    }

    #[test]
    fn t1_tables_and_witnesses() {
        let f = BinaryFn::table([((nat(3), nat(9)), nat(50))], GridDefault::X);
        let v = check_t1_window(&f, 12, 24).unwrap();
        let Some(Witness::Bound { axis, bound }) = v.witness else { panic!() };
        assert_eq!(axis, Axis::X);
        assert_eq!(bound.eval_u64(3).unwrap(), nat(50));
        assert_eq!(bound.eval_u64(4).unwrap(), nat(4));

        let w = AlmostUnaryWitness::new(Axis::Y, UnaryFn::id());
        let g = bb(BinaryBuiltin::Proj2).with_witness(w.clone());
        assert_eq!(check_t1_window(&g, 10, 20).unwrap().status, Status::DecidedIn);
        let bad = bb(BinaryBuiltin::Proj1).with_witness(w);
        assert!(matches!(
            check_t1_window(&bad, 10, 20),
            Err(MembershipError::Eval(EvalError::WitnessViolation { .. }))
        ));
    }

    #[test]
    fn t1_black_box() {
        let v = check_t1_window(&black_box(BinaryBuiltin::PairDelta), 20, 40).unwrap();
        assert_eq!(v.status, Status::EvidenceIn { k: 20 });
        let v = check_t1_window(&black_box(BinaryBuiltin::Pair), 20, 40).unwrap();
        assert_eq!(v.status, Status::Inconclusive);
    }

    #[test]
    fn t2_examples() {
        let v = check_t2_search(&bb(BinaryBuiltin::CharDelta), 40, 3).unwrap();
        assert_eq!(v.status, Status::EvidenceIn { k: 3 });
        for b in [BinaryBuiltin::Pair, BinaryBuiltin::PairDelta, BinaryBuiltin::PairNabla] {
            let v = check_t2_search(&bb(b.clone()), 40, 4).unwrap();
            assert_eq!(v.status, Status::Falsified, "{b}");
            let Some(Witness::Canonical { report, .. }) = v.witness else { panic!() };
            assert!(report.has_injective_block());
        }
        let v = check_t2_search(&bb(BinaryBuiltin::PairDelta), 40, 4).unwrap();
        let Some(Witness::Canonical { report, .. }) = v.witness else { panic!() };
        assert!(report.delta_type.is_one_one());
    }

    #[test]
    fn sparse_seed_sizes() {
        let plan = SeedPlan::new(200);
        assert_eq!(plan.seeds(SeedFamily::Initial, 8).len(), 200);
        let p2 = plan.seeds(SeedFamily::PowersOfTwo, 8);
        assert_eq!(p2.len(), 16);
        assert_eq!(p2[7], nat(128));
        let fact = plan.seeds(SeedFamily::FactorialGaps, 2);
        assert_eq!(fact, vec![nat(1), nat(2), nat(6), nat(24), nat(120)]);
        let shifted = SeedPlan::new(4).starting_at(100).seeds(SeedFamily::Initial, 2);
        assert_eq!(shifted, vec![nat(100), nat(101), nat(102), nat(103)]);
    }

    #[test]
    fn builtin_table() {
        let expect = [
            ("chi_delta", Status::DecidedIn, Status::DecidedIn),
            ("chi_nabla", Status::DecidedIn, Status::DecidedIn),
            ("p_delta", Status::DecidedIn, Status::DecidedOut),
            ("p_nabla", Status::DecidedIn, Status::DecidedOut),
            ("p", Status::DecidedOut, Status::DecidedOut),
        ];
        for (name, t1, t2) in expect {
            let (a, b) = classify_builtin(name).unwrap();
            assert_eq!((a.status, b.status), (t1, t2), "{name}");
        }
        assert!(matches!(classify_builtin("q"), Err(MembershipError::UnknownBuiltin(_))));
    }

    #[test]
    fn intersection() {
        let (a, b) = classify_builtin("chi_delta").unwrap();
        assert_eq!(intersect(&a, &b).status, Status::DecidedIn);
        let (a, b) = classify_builtin("p_delta").unwrap();
        assert_eq!(intersect(&a, &b).status, Status::DecidedOut);
        let ev = Verdict::new(CloneName::T2, Status::EvidenceIn { k: 4 }, None);
        assert_eq!(intersect(&a, &ev).status, Status::EvidenceIn { k: 4 });
    }

    #[test]
    fn verdict_json() {
        let v = Verdict::new(CloneName::T2, Status::EvidenceIn { k: 3 }, None);
        assert_eq!(
            serde_json::to_string(&v).unwrap(),
            r#"{"clone":"T2","status":"EVIDENCE_IN","k":3}"#
        );
        let back: Verdict = serde_json::from_str(r#"{"clone":"T2","status":"EVIDENCE_IN","k":3}"#).unwrap();
        assert_eq!(back, v);
    }
}
