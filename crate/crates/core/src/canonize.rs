//! Finite-scale canonization.
//!
//! On finite blocks the four canonical shapes are not mutually exclusive (a
//! two-point block is usually both `x` and `y`), so classification resolves
//! ties by the precedence `constant > x > y > one_one`. Diagonal points
//! belong to neither `Δ` nor `∇` and are never evaluated.
//!
//! The search grows `S1`, `S2` one element at a time in increasing order and
//! backtracks as soon as a hereditary constraint fails: a block that already
//! fits no shape, overlapping ranges, or (when an injective block is
//! required) a block that is already not 1-1. Every constraint it prunes on
//! is preserved by taking subsets, so a completed search without a witness
//! really has no witness over the given seeds.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ops::serde_nat::{self, N};
use crate::ops::{BinaryFn, EvalError};
use crate::Nat;

pub use crate::ops::{Region, RegionKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CanonError {
    #[error("region has {0} point(s); at least 2 are needed")]
    RegionEmpty(usize),
    #[error("seeds of size {size} cannot hold a witness set of size {k} (k must be at least 2)")]
    SeedTooSmall { size: usize, k: usize },
    #[error("report does not re-validate: {0}")]
    InvalidReport(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockTag {
    Constant,
    X,
    Y,
    OneOne,
}

/// The shape of `f` on one block, with its witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "snake_case")]
pub enum BlockType {
    Constant {
        #[serde(with = "serde_nat")]
        value: Nat,
    },
    /// `f(x,y) = G(x)` with `G` 1-1; `graph` lists `(x, G(x))`.
    X { graph: Vec<(N, N)> },
    /// `f(x,y) = G(y)` with `G` 1-1; `graph` lists `(y, G(y))`.
    Y { graph: Vec<(N, N)> },
    OneOne,
}

impl BlockType {
    pub fn tag(&self) -> BlockTag {
        match self {
            BlockType::Constant { .. } => BlockTag::Constant,
            BlockType::X { .. } => BlockTag::X,
            BlockType::Y { .. } => BlockTag::Y,
            BlockType::OneOne => BlockTag::OneOne,
        }
    }

    pub fn is_one_one(&self) -> bool {
        self.tag() == BlockTag::OneOne
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RangeRelation {
    Disjoint,
    Symmetric,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanonicalReport {
    #[serde(with = "serde_nat::seq")]
    pub s1: Vec<Nat>,
    #[serde(with = "serde_nat::seq")]
    pub s2: Vec<Nat>,
    pub delta_type: BlockType,
    pub nabla_type: BlockType,
    pub range_relation: RangeRelation,
    pub requested_k: usize,
    pub achieved_k: usize,
}

impl CanonicalReport {
    pub fn delta_region(&self) -> Region {
        Region::delta(self.s1.clone(), self.s2.clone())
    }

    pub fn nabla_region(&self) -> Region {
        Region::nabla(self.s1.clone(), self.s2.clone())
    }

    pub fn has_injective_block(&self) -> bool {
        self.delta_type.is_one_one() || self.nabla_type.is_one_one()
    }
}

type Point = (Nat, Nat, Nat);

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
struct Shapes {
    constant: bool,
    x: bool,
    y: bool,
    one_one: bool,
}

impl Shapes {
    fn any(self) -> bool {
        self.constant || self.x || self.y || self.one_one
    }
}

fn depends_on_one(points: &[Point], key: impl Fn(&Point) -> &Nat) -> bool {
    let mut graph: HashMap<&Nat, &Nat> = HashMap::new();
    for p in points {
        match graph.get(key(p)) {
            Some(v) if *v != &p.2 => return false,
            Some(_) => {}
            None => {
                graph.insert(key(p), &p.2);
            }
        }
    }
    let values: HashSet<&Nat> = graph.values().copied().collect();
    values.len() == graph.len()
}

fn shapes(points: &[Point]) -> Shapes {
    let distinct: HashSet<&Nat> = points.iter().map(|p| &p.2).collect();
    Shapes {
        constant: distinct.len() <= 1,
        x: depends_on_one(points, |p| &p.0),
        y: depends_on_one(points, |p| &p.1),
        one_one: distinct.len() == points.len(),
    }
}

fn graph_of(points: &[Point], key: impl Fn(&Point) -> &Nat) -> Vec<(N, N)> {
    let graph: BTreeMap<&Nat, &Nat> = points.iter().map(|p| (key(p), &p.2)).collect();
    graph
        .into_iter()
        .map(|(k, v)| (N(k.clone()), N(v.clone())))
        .collect()
}

/// Classify a block given as evaluated points, using the fixed precedence.
fn classify(points: &[Point]) -> Option<BlockType> {
    let s = shapes(points);
    if s.constant {
        Some(BlockType::Constant {
            value: points.first().map(|p| p.2.clone()).unwrap_or_default(),
        })
    } else if s.x {
        Some(BlockType::X {
            graph: graph_of(points, |p| &p.0),
        })
    } else if s.y {
        Some(BlockType::Y {
            graph: graph_of(points, |p| &p.1),
        })
    } else if s.one_one {
        Some(BlockType::OneOne)
    } else {
        None
    }
}

fn evaluate_region(f: &BinaryFn, r: &Region) -> Result<Vec<Point>, EvalError> {
    r.points()
        .map(|(x, y)| Ok((x.clone(), y.clone(), f.eval(x, y)?)))
        .collect()
}

/// The canonical type of `f` on a region, if any.
pub fn block_type(f: &BinaryFn, r: &Region) -> Result<Option<BlockType>, CanonError> {
    let points = evaluate_region(f, r)?;
    if points.len() < 2 {
        return Err(CanonError::RegionEmpty(points.len()));
    }
    Ok(classify(&points))
}

fn ranges_disjoint(a: &[Point], b: &[Point]) -> bool {
    let values: HashSet<&Nat> = a.iter().map(|p| &p.2).collect();
    b.iter().all(|p| !values.contains(&p.2))
}

/// Re-check a report by direct evaluation of `f`.
pub fn validate_report(f: &BinaryFn, report: &CanonicalReport) -> Result<(), CanonError> {
    let bad = |msg: String| Err(CanonError::InvalidReport(msg));
    let strictly_increasing = |s: &[Nat]| s.windows(2).all(|w| w[0] < w[1]);
    if !strictly_increasing(&report.s1) || !strictly_increasing(&report.s2) {
        return bad("witness sets must be strictly increasing".into());
    }
    if report.s1.len() != report.achieved_k || report.s2.len() != report.achieved_k {
        return bad("witness sets do not have the achieved size".into());
    }
    if report.achieved_k < report.requested_k {
        return bad("achieved size is below the requested size".into());
    }
    let delta = evaluate_region(f, &report.delta_region())?;
    let nabla = evaluate_region(f, &report.nabla_region())?;
    for (name, points, claimed) in [
        ("delta", &delta, &report.delta_type),
        ("nabla", &nabla, &report.nabla_type),
    ] {
        if points.len() < 2 {
            return bad(format!("{name} block has fewer than 2 points"));
        }
        match classify(points) {
            Some(t) if &t == claimed => {}
            Some(t) => return bad(format!("{name} block is {:?}, report claims {:?}", t.tag(), claimed.tag())),
            None => return bad(format!("{name} block is not canonical")),
        }
    }
    match report.range_relation {
        RangeRelation::Disjoint if !ranges_disjoint(&delta, &nabla) => bad("block ranges intersect".into()),
        RangeRelation::Symmetric => {
            if report.s1 != report.s2 {
                return bad("symmetric relation needs S1 = S2".into());
            }
            for (x, y, v) in &delta {
                if &f.eval(y, x)? != v {
                    return bad(format!("f({x},{y}) != f({y},{x})"));
                }
            }
            Ok(())
        }
        _ => Ok(()),
    }
}

/// What the search must find.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Requirement {
    /// Any canonical report.
    Any,
    /// A canonical report with at least one `one_one` block.
    InjectiveBlock,
}

#[derive(Clone, Copy, Debug)]
pub struct SearchConfig {
    pub requirement: Requirement,
    /// Maximum number of search nodes; `None` for no limit.
    pub budget: Option<u64>,
}

impl SearchConfig {
    /// Larger budget for `k ≤ 5`, where the search is expected to run to
    /// completion.
    pub fn for_size(k: usize, requirement: Requirement) -> Self {
        let budget = if k <= 5 { 5_000_000 } else { 500_000 };
        SearchConfig {
            requirement,
            budget: Some(budget),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    pub report: Option<CanonicalReport>,
    /// True when the whole search space was covered (or a witness was found).
    pub complete: bool,
    pub nodes: u64,
}

struct Evaluator<'a> {
    f: &'a BinaryFn,
    cache: HashMap<(Nat, Nat), Nat>,
}

impl<'a> Evaluator<'a> {
    fn get(&mut self, x: &Nat, y: &Nat) -> Result<Nat, EvalError> {
        let key = (x.clone(), y.clone());
        if let Some(v) = self.cache.get(&key) {
            return Ok(v.clone());
        }
        let v = self.f.eval(x, y)?;
        self.cache.insert(key, v.clone());
        Ok(v)
    }
}

struct Search<'a> {
    ev: Evaluator<'a>,
    k: usize,
    requirement: Requirement,
    /// Sides that can still end up 1-1 under an injective requirement.
    delta_may_inject: bool,
    nabla_may_inject: bool,
    budget: Option<u64>,
    nodes: u64,
    out_of_budget: bool,
    symmetric: bool,
    s1: Vec<Nat>,
    s2: Vec<Nat>,
    delta: Vec<Point>,
    nabla: Vec<Point>,
}

enum Step {
    Found(CanonicalReport),
    Continue,
    Abort,
}

impl<'a> Search<'a> {
    fn tick(&mut self) -> bool {
        self.nodes += 1;
        if let Some(b) = self.budget {
            if self.nodes > b {
                self.out_of_budget = true;
            }
        }
        !self.out_of_budget
    }

    fn feasible(&self) -> bool {
        let (sd, sn) = (shapes(&self.delta), shapes(&self.nabla));
        if !sd.any() || !sn.any() {
            return false;
        }
        if self.requirement == Requirement::InjectiveBlock
            && !(self.delta_may_inject && sd.one_one)
            && !(self.nabla_may_inject && sn.one_one)
        {
            return false;
        }
        let disjoint = ranges_disjoint(&self.delta, &self.nabla);
        disjoint || (self.symmetric && self.mirror_consistent())
    }

    fn mirror_consistent(&self) -> bool {
        let nabla: HashMap<(&Nat, &Nat), &Nat> = self.nabla.iter().map(|(x, y, v)| ((x, y), v)).collect();
        self.delta
            .iter()
            .all(|(x, y, v)| nabla.get(&(y, x)).is_none_or(|w| *w == v))
    }

    fn leaf(&self) -> Option<CanonicalReport> {
        if self.delta.len() < 2 || self.nabla.len() < 2 {
            return None;
        }
        let delta_type = classify(&self.delta)?;
        let nabla_type = classify(&self.nabla)?;
        let range_relation = if ranges_disjoint(&self.delta, &self.nabla) {
            RangeRelation::Disjoint
        } else if self.symmetric && self.mirror_consistent() {
            RangeRelation::Symmetric
        } else {
            return None;
        };
        if self.requirement == Requirement::InjectiveBlock
            && !(self.delta_may_inject && delta_type.is_one_one())
            && !(self.nabla_may_inject && nabla_type.is_one_one())
        {
            return None;
        }
        Some(CanonicalReport {
            s1: self.s1.clone(),
            s2: self.s2.clone(),
            delta_type,
            nabla_type,
            range_relation,
            requested_k: self.k,
            achieved_k: self.k,
        })
    }

    /// Add `v` to S1 and/or S2 (it exceeds everything already chosen).
    fn push(&mut self, v: &Nat, to_s1: bool, to_s2: bool) -> Result<(usize, usize), EvalError> {
        let marks = (self.delta.len(), self.nabla.len());
        if to_s1 {
            for y in self.s2.clone() {
                let val = self.ev.get(v, &y)?;
                self.delta.push((v.clone(), y, val));
            }
        }
        if to_s2 {
            for x in self.s1.clone() {
                let val = self.ev.get(&x, v)?;
                self.nabla.push((x, v.clone(), val));
            }
        }
        if to_s1 {
            self.s1.push(v.clone());
        }
        if to_s2 {
            self.s2.push(v.clone());
        }
        Ok(marks)
    }

    fn pop(&mut self, marks: (usize, usize), from_s1: bool, from_s2: bool) {
        self.delta.truncate(marks.0);
        self.nabla.truncate(marks.1);
        if from_s1 {
            self.s1.pop();
        }
        if from_s2 {
            self.s2.pop();
        }
    }

    fn symmetric_dfs(&mut self, cands: &[Nat], start: usize) -> Result<Step, EvalError> {
        if !self.tick() {
            return Ok(Step::Abort);
        }
        if self.s1.len() == self.k {
            return Ok(self.leaf().map_or(Step::Continue, Step::Found));
        }
        let need = self.k - self.s1.len();
        for i in start..cands.len() {
            if cands.len() - i < need {
                break;
            }
            let v = cands[i].clone();
            let marks = self.push(&v, true, true)?;
            if self.feasible() {
                match self.symmetric_dfs(cands, i + 1)? {
                    Step::Continue => {}
                    done => return Ok(done),
                }
            }
            self.pop(marks, true, true);
        }
        Ok(Step::Continue)
    }

    /// `cands[i] = (value, in seeds1, in seeds2)`; `rest[i]` counts seed
    /// memberships from position `i` on.
    fn general_dfs(
        &mut self,
        cands: &[(Nat, bool, bool)],
        rest: &[(usize, usize)],
        idx: usize,
    ) -> Result<Step, EvalError> {
        if !self.tick() {
            return Ok(Step::Abort);
        }
        if self.s1.len() == self.k && self.s2.len() == self.k {
            return Ok(self.leaf().map_or(Step::Continue, Step::Found));
        }
        if idx == cands.len()
            || self.s1.len() + rest[idx].0 < self.k
            || self.s2.len() + rest[idx].1 < self.k
        {
            return Ok(Step::Continue);
        }
        let (v, in1, in2) = cands[idx].clone();
        let room1 = in1 && self.s1.len() < self.k;
        let room2 = in2 && self.s2.len() < self.k;
        for (a, b) in [(true, true), (true, false), (false, true), (false, false)] {
            if (a && !room1) || (b && !room2) {
                continue;
            }
            let marks = self.push(&v, a, b)?;
            if self.feasible() {
                match self.general_dfs(cands, rest, idx + 1)? {
                    Step::Continue => {}
                    done => return Ok(done),
                }
            }
            self.pop(marks, a, b);
        }
        Ok(Step::Continue)
    }
}

/// Whether some block inside `rows × cols` on the given side could be
/// classified `one_one`. That needs three distinct values, and `f` must
/// depend on both coordinates there: a side that is a function of `x` alone
/// (or `y` alone) only has blocks tagged `constant`, `x` (or `y`), or none.
fn side_may_inject(ev: &mut Evaluator, rows: &[Nat], cols: &[Nat], kind: RegionKind) -> Result<bool, EvalError> {
    let mut values = HashSet::new();
    let mut points = Vec::new();
    for x in rows {
        for y in cols {
            if Region::holds(kind, x, y) {
                let v = ev.get(x, y)?;
                values.insert(v.clone());
                points.push((x.clone(), y.clone(), v));
            }
        }
    }
    if values.len() < 3 {
        return Ok(false);
    }
    let depends_only_on = |key: fn(&Point) -> &Nat| {
        let mut graph: HashMap<&Nat, &Nat> = HashMap::new();
        points.iter().all(|p| *graph.entry(key(p)).or_insert(&p.2) == &p.2)
    };
    Ok(!depends_only_on(|p| &p.0) && !depends_only_on(|p| &p.1))
}

fn normalize(seeds: &[Nat]) -> Vec<Nat> {
    let set: BTreeSet<Nat> = seeds.iter().cloned().collect();
    set.into_iter().collect()
}

/// Search `S1 ⊆ seed1`, `S2 ⊆ seed2` of size `k` on which `f` is canonical.
///
/// Tries `S1 = S2` first, then independent sets; within each, candidates are
/// taken smallest first, so the first report found is deterministic.
pub fn canonize_search(
    f: &BinaryFn,
    seed1: &[Nat],
    seed2: &[Nat],
    k: usize,
    cfg: SearchConfig,
) -> Result<SearchOutcome, CanonError> {
    let (seed1, seed2) = (normalize(seed1), normalize(seed2));
    let smallest = seed1.len().min(seed2.len());
    if k < 2 || smallest < k {
        return Err(CanonError::SeedTooSmall { size: smallest, k });
    }
    let mut ev = Evaluator {
        f,
        cache: HashMap::new(),
    };
    let (mut delta_may_inject, mut nabla_may_inject) = (true, true);
    if cfg.requirement == Requirement::InjectiveBlock {
        delta_may_inject = side_may_inject(&mut ev, &seed1, &seed2, RegionKind::Delta)?;
        nabla_may_inject = side_may_inject(&mut ev, &seed1, &seed2, RegionKind::Nabla)?;
        if !delta_may_inject && !nabla_may_inject {
            return Ok(SearchOutcome {
                report: None,
                complete: true,
                nodes: 0,
            });
        }
    }
    let mut search = Search {
        ev,
        k,
        requirement: cfg.requirement,
        delta_may_inject,
        nabla_may_inject,
        budget: cfg.budget,
        nodes: 0,
        out_of_budget: false,
        symmetric: true,
        s1: Vec::new(),
        s2: Vec::new(),
        delta: Vec::new(),
        nabla: Vec::new(),
    };

    let common: Vec<Nat> = seed1
        .iter()
        .filter(|v| seed2.binary_search(v).is_ok())
        .cloned()
        .collect();
    if common.len() >= k {
        if let Step::Found(r) = search.symmetric_dfs(&common, 0)? {
            return Ok(SearchOutcome {
                report: Some(r),
                complete: true,
                nodes: search.nodes,
            });
        }
    }

    if !search.out_of_budget {
        search.symmetric = false;
        let all: BTreeSet<&Nat> = seed1.iter().chain(seed2.iter()).collect();
        let cands: Vec<(Nat, bool, bool)> = all
            .into_iter()
            .map(|v| (v.clone(), seed1.binary_search(v).is_ok(), seed2.binary_search(v).is_ok()))
            .collect();
        let mut rest = vec![(0usize, 0usize); cands.len() + 1];
        for i in (0..cands.len()).rev() {
            rest[i] = (
                rest[i + 1].0 + cands[i].1 as usize,
                rest[i + 1].1 + cands[i].2 as usize,
            );
        }
        if let Step::Found(r) = search.general_dfs(&cands, &rest, 0)? {
            return Ok(SearchOutcome {
                report: Some(r),
                complete: true,
                nodes: search.nodes,
            });
        }
    }
    Ok(SearchOutcome {
        report: None,
        complete: !search.out_of_budget,
        nodes: search.nodes,
    })
}

/// A canonical report of size `k` drawn from the seeds, if the search finds
/// one. `None` is not a refutation: finite seeds cannot decide the infinite
/// statement.
pub fn greedy_canonize(
    f: &BinaryFn,
    seed1: &[Nat],
    seed2: &[Nat],
    k: usize,
) -> Result<Option<CanonicalReport>, CanonError> {
    let outcome = canonize_search(f, seed1, seed2, k, SearchConfig::for_size(k, Requirement::Any))?;
    Ok(outcome.report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nat;
    use crate::ops::{BinaryBuiltin, Expr};

    fn nats(v: impl IntoIterator<Item = u64>) -> Vec<Nat> {
        v.into_iter().map(nat).collect()
    }

    fn builtin(b: BinaryBuiltin) -> BinaryFn {
        BinaryFn::builtin(b)
    }

    #[test]
    fn block_type_examples() {
        let r = Region::delta(nats([2, 5]), nats([0, 1]));
        assert_eq!(
            block_type(&BinaryFn::constant(5), &r).unwrap(),
            Some(BlockType::Constant { value: nat(5) })
        );
        assert_eq!(
            block_type(&builtin(BinaryBuiltin::Proj1), &r).unwrap(),
            Some(BlockType::X {
                graph: vec![(N(nat(2)), N(nat(2))), (N(nat(5)), N(nat(5)))]
            })
        );
        let r = Region::delta(nats([1, 2, 3]), nats([0, 1, 2]));
        assert_eq!(block_type(&builtin(BinaryBuiltin::Pair), &r).unwrap(), Some(BlockType::OneOne));
    }

    #[test]
    fn block_type_errors_and_gaps() {
        let r = Region::delta(nats([1, 2]), nats([3, 4]));
        assert_eq!(
            block_type(&builtin(BinaryBuiltin::Pair), &r),
            Err(CanonError::RegionEmpty(0))
        );
        // two values repeated in a crossing pattern: no shape fits
        let f = BinaryFn::formula(Expr::modulo(Expr::add(Expr::x(), Expr::y()), Expr::lit(2)));
        let r = Region::delta(nats([2, 3]), nats([0, 1]));
        assert_eq!(block_type(&f, &r).unwrap(), None);
    }

    #[test]
    fn two_point_blocks_never_classify_one_one() {
        let p = builtin(BinaryBuiltin::Pair);
        let r = Region::delta(nats([1, 2]), nats([0, 5]));
        assert_eq!(block_type(&p, &r).unwrap().map(|t| t.tag()), Some(BlockTag::X));
        let r = Region::delta(nats([3]), nats([0, 1]));
        assert_eq!(block_type(&p, &r).unwrap().map(|t| t.tag()), Some(BlockTag::Y));
    }

    #[test]
    fn chi_delta_report() {
        let f = builtin(BinaryBuiltin::CharDelta);
        let r = greedy_canonize(&f, &nats(0..30), &nats(0..30), 4).unwrap().unwrap();
        assert_eq!(r.delta_type, BlockType::Constant { value: nat(1) });
        assert_eq!(r.nabla_type, BlockType::Constant { value: nat(0) });
        assert_eq!(r.range_relation, RangeRelation::Disjoint);
        assert_eq!(r.s1, nats(0..4));
        validate_report(&f, &r).unwrap();
    }

    #[test]
    fn sum_on_powers_of_two_is_symmetric() {
        let f = BinaryFn::formula(Expr::add(Expr::x(), Expr::y()));
        let seeds = nats((0..=10).map(|i| 1u64 << i));
        let r = greedy_canonize(&f, &seeds, &seeds, 4).unwrap().unwrap();
        assert_eq!(r.delta_type, BlockType::OneOne);
        assert_eq!(r.nabla_type, BlockType::OneOne);
        assert_eq!(r.range_relation, RangeRelation::Symmetric);
        assert_eq!(r.s1, r.s2);
        validate_report(&f, &r).unwrap();
    }

    #[test]
    fn p_delta_report() {
        let f = builtin(BinaryBuiltin::PairDelta);
        let r = greedy_canonize(&f, &nats(0..30), &nats(0..30), 4).unwrap().unwrap();
        assert_eq!(r.delta_type, BlockType::OneOne);
        assert_eq!(r.nabla_type, BlockType::Constant { value: nat(0) });
        assert_eq!(r.range_relation, RangeRelation::Disjoint);
        validate_report(&f, &r).unwrap();
    }

    #[test]
    fn seeds_must_fit() {
        let f = builtin(BinaryBuiltin::Pair);
        assert_eq!(
            greedy_canonize(&f, &nats(0..3), &nats(0..10), 4),
            Err(CanonError::SeedTooSmall { size: 3, k: 4 })
        );
        assert!(greedy_canonize(&f, &nats(0..10), &nats(0..10), 1).is_err());
    }

    #[test]
    fn injective_requirement_prunes_finite_ranges() {
        let cfg = SearchConfig {
            requirement: Requirement::InjectiveBlock,
            budget: None,
        };
        for b in [BinaryBuiltin::CharDelta, BinaryBuiltin::CharNabla, BinaryBuiltin::Const(nat(3))] {
            let out = canonize_search(&builtin(b), &nats(0..40), &nats(0..40), 3, cfg).unwrap();
            assert_eq!(out.report, None);
            assert!(out.complete);
        }
        let out = canonize_search(&builtin(BinaryBuiltin::PairNabla), &nats(0..40), &nats(0..40), 3, cfg).unwrap();
        let r = out.report.unwrap();
        assert!(r.nabla_type.is_one_one());
    }

    #[test]
    fn general_mode_finds_disjoint_seeds() {
        // seeds share nothing, so S1 = S2 is impossible
        let f = builtin(BinaryBuiltin::Pair);
        let r = greedy_canonize(&f, &nats([1, 4, 16, 64]), &nats([2, 8, 32, 128]), 3)
            .unwrap()
            .unwrap();
        assert_ne!(r.s1, r.s2);
        validate_report(&f, &r).unwrap();
    }

    #[test]
    fn tampered_report_fails_validation() {
        let f = builtin(BinaryBuiltin::PairDelta);
        let mut r = greedy_canonize(&f, &nats(0..10), &nats(0..10), 3).unwrap().unwrap();
        r.nabla_type = BlockType::Constant { value: nat(1) };
        assert!(matches!(validate_report(&f, &r), Err(CanonError::InvalidReport(_))));
        let mut r2 = greedy_canonize(&f, &nats(0..10), &nats(0..10), 3).unwrap().unwrap();
        r2.range_relation = RangeRelation::Symmetric;
        assert!(validate_report(&f, &r2).is_err());
    }

    #[test]
    fn budget_is_reported() {
        let f = builtin(BinaryBuiltin::CharDelta);
        let cfg = SearchConfig {
            requirement: Requirement::Any,
            budget: Some(1),
        };
        let out = canonize_search(&f, &nats(0..10), &nats(0..10), 3, cfg).unwrap();
        assert_eq!(out.report, None);
        assert!(!out.complete);
    }
}
