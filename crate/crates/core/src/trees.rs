//! Trees of finite sequences and the reduction from trees to binary
//! functions.
//!
//! Sequences are enumerated by stage, `stage(s) = max(len(s), 1 + max(s))`
//! (and 0 for the empty sequence), then by length, then lexicographically.
//! Every sequence of stage `m` has length `≤ m` and entries `< m`, so each
//! stage is finite, and a proper prefix never comes later than its
//! extension.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::ops::{pair, BinaryFn, BinaryRepr, EvalError};
use crate::Nat;

pub type Seq = Vec<u64>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("tree is not downward closed: {present:?} is present but its prefix {missing:?} is not")]
    Malformed { missing: Seq, present: Seq },
    #[error("tree is empty")]
    Empty,
    #[error("operation needs a finite tree")]
    NotFinite,
    #[error("branch prefix {0:?} is not in the tree")]
    BranchNotInTree(Seq),
    #[error("branch has {got} entries, {need} are needed")]
    BranchTooShort { need: usize, got: usize },
    #[error("invalid tree spec: {0}")]
    Invalid(String),
}

fn pow(b: u64, e: usize) -> Nat {
    num_traits::pow(Nat::from(b), e)
}

/// `Σ_{l < len} b^l`, with `0^0 = 1`.
fn geom(b: u64, len: usize) -> Nat {
    match (b, len) {
        (_, 0) => Nat::zero(),
        (0, _) => Nat::one(),
        (1, _) => Nat::from(len),
        _ => (pow(b, len) - 1u32) / (b - 1),
    }
}

/// Number of sequences of stage at most `m`.
fn up_to_stage(m: u64) -> Nat {
    geom(m, m as usize + 1)
}

pub fn stage(s: &[u64]) -> u64 {
    let top = s.iter().max().map_or(0, |&v| v + 1);
    top.max(s.len() as u64)
}

fn class_size(m: u64, len: usize, rest: usize, has_top: bool) -> Nat {
    // sequences of `rest` further entries < m that keep the whole in
    // stage m, given whether m - 1 already occurred
    if len as u64 == m || has_top {
        pow(m, rest)
    } else {
        pow(m, rest) - pow(m - 1, rest)
    }
}

/// Position of `s` in the enumeration.
pub fn index_of(s: &[u64]) -> Nat {
    let m = stage(s);
    if m == 0 {
        return Nat::zero();
    }
    let len = s.len();
    let mut idx = up_to_stage(m - 1) + geom(m, len) - geom(m - 1, len);
    let mut has_top = false;
    for (i, &d) in s.iter().enumerate() {
        let rest = len - i - 1;
        if d > 0 {
            // every smaller digit is below m - 1, so contributes nothing new
            idx += class_size(m, len, rest, has_top) * d;
        }
        has_top |= d == m - 1;
    }
    idx
}

/// The sequence at position `n`.
pub fn seq_of(n: &Nat) -> Seq {
    let mut m = 0u64;
    while up_to_stage(m) <= *n {
        m += 1;
    }
    if m == 0 {
        return Vec::new();
    }
    let mut r = n - up_to_stage(m - 1);
    let mut len = 0usize;
    loop {
        let here = if len as u64 == m {
            pow(m, len)
        } else {
            pow(m, len) - pow(m - 1, len)
        };
        if r < here {
            break;
        }
        r -= here;
        len += 1;
    }
    let mut s = Vec::with_capacity(len);
    let mut has_top = false;
    for i in 0..len {
        let rest = len - i - 1;
        let below_top = class_size(m, len, rest, has_top);
        // digits below m - 1 each cover `below_top` sequences
        let d = if below_top.is_zero() {
            m - 1
        } else {
            let q = &r / &below_top;
            if q < Nat::from(m - 1) {
                let d = u64::try_from(&q).expect("q < m");
                r -= &below_top * d;
                d
            } else {
                r -= &below_top * (m - 1);
                m - 1
            }
        };
        has_top |= d == m - 1;
        s.push(d);
    }
    s
}

pub fn seq_of_u64(n: u64) -> Seq {
    seq_of(&Nat::from(n))
}

/// `s ◁ t`: `s` is a proper initial segment of `t`.
pub fn is_proper_prefix(s: &[u64], t: &[u64]) -> bool {
    s.len() < t.len() && t.starts_with(s)
}

/// Named trees defined by a membership rule.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "generator", rename_all = "snake_case")]
pub enum Generator {
    /// The single branch `⟨0,0,0,…⟩`.
    AllZero,
    /// All strictly increasing sequences; declared branch `⟨0,1,2,…⟩`.
    Increasing,
    /// The single branch `prefix` followed by `period` repeated forever.
    Periodic { prefix: Seq, period: Seq },
    /// A pseudo-random branch over `{0,1,2}` with a one-node side shoot
    /// off every branch node.
    Random { seed: u64 },
    /// All 0/1 sequences of length at most `height`; well-founded.
    Binary { height: u64 },
}

const RANDOM_ALPHABET: u64 = 3;

impl Generator {
    /// The first `len` entries of the declared branch.
    pub fn branch(&self, len: usize) -> Option<Seq> {
        match self {
            Generator::AllZero => Some(vec![0; len]),
            Generator::Increasing => Some((0..len as u64).collect()),
            Generator::Periodic { prefix, period } => Some(
                prefix
                    .iter()
                    .chain(period.iter().cycle())
                    .take(len)
                    .copied()
                    .collect(),
            ),
            Generator::Random { seed } => Some(random_branch(*seed, len).0),
            Generator::Binary { .. } => None,
        }
    }

    fn contains(&self, s: &[u64]) -> bool {
        match self {
            Generator::AllZero => s.iter().all(|&v| v == 0),
            Generator::Increasing => s.windows(2).all(|w| w[0] < w[1]),
            Generator::Periodic { .. } => self.branch(s.len()).as_deref() == Some(s),
            Generator::Random { seed } => {
                let (branch, shoots) = random_branch(*seed, s.len());
                match s.iter().zip(&branch).position(|(a, b)| a != b) {
                    None => true,
                    Some(i) => i + 1 == s.len() && s[i] == shoots[i],
                }
            }
            Generator::Binary { height } => s.len() as u64 <= *height && s.iter().all(|&v| v < 2),
        }
    }
}

/// Branch entries and, per position, the side shoot's last entry.
fn random_branch(seed: u64, len: usize) -> (Seq, Seq) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut branch = Vec::with_capacity(len);
    let mut shoots = Vec::with_capacity(len);
    for _ in 0..len {
        let b = rng.gen_range(0..RANDOM_ALPHABET);
        let off = rng.gen_range(1..RANDOM_ALPHABET);
        branch.push(b);
        shoots.push((b + off) % RANDOM_ALPHABET);
    }
    (branch, shoots)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GeneratedTree {
    #[serde(flatten)]
    pub generator: Generator,
    /// How deep checks probe the tree.
    pub depth: u64,
}

/// An explicit finite tree, indexed by enumeration position.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteTree {
    seqs: BTreeSet<Seq>,
    by_index: BTreeMap<Nat, Seq>,
}

impl FiniteTree {
    fn from_set(seqs: BTreeSet<Seq>) -> Self {
        let by_index = seqs.iter().map(|s| (index_of(s), s.clone())).collect();
        FiniteTree { seqs, by_index }
    }

    pub fn seqs(&self) -> &BTreeSet<Seq> {
        &self.seqs
    }

    pub fn len(&self) -> usize {
        self.seqs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seqs.is_empty()
    }

    /// Enumeration positions of the members, ascending.
    pub fn indices(&self) -> impl Iterator<Item = &Nat> + '_ {
        self.by_index.keys()
    }

    pub fn seq_at(&self, n: &Nat) -> Option<&Seq> {
        self.by_index.get(n)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SeqTree {
    Finite(FiniteTree),
    Generated(GeneratedTree),
}

impl SeqTree {
    /// A finite tree; fails unless the set is downward closed.
    pub fn finite(seqs: impl IntoIterator<Item = Seq>) -> Result<Self, TreeError> {
        let t = SeqTree::Finite(FiniteTree::from_set(seqs.into_iter().collect()));
        t.validate()?;
        Ok(t)
    }

    /// A finite tree with every missing prefix added.
    pub fn finite_closed(seqs: impl IntoIterator<Item = Seq>) -> Self {
        let mut set = BTreeSet::new();
        for s in seqs {
            for l in 0..=s.len() {
                set.insert(s[..l].to_vec());
            }
        }
        SeqTree::Finite(FiniteTree::from_set(set))
    }

    pub fn empty() -> Self {
        SeqTree::Finite(FiniteTree::from_set(BTreeSet::new()))
    }

    pub fn generated(generator: Generator, depth: u64) -> Self {
        SeqTree::Generated(GeneratedTree { generator, depth })
    }

    pub fn as_finite(&self) -> Option<&FiniteTree> {
        match self {
            SeqTree::Finite(t) => Some(t),
            SeqTree::Generated(_) => None,
        }
    }

    pub fn contains(&self, s: &[u64]) -> bool {
        match self {
            SeqTree::Finite(t) => t.seqs.contains(s),
            SeqTree::Generated(g) => g.generator.contains(s),
        }
    }

    /// Membership of the sequence at position `n`.
    pub fn contains_index(&self, n: &Nat) -> Option<Seq> {
        match self {
            SeqTree::Finite(t) => t.by_index.get(n).cloned(),
            SeqTree::Generated(g) => {
                let s = seq_of(n);
                g.generator.contains(&s).then_some(s)
            }
        }
    }

    /// The first `len` entries of the declared branch, for generated trees
    /// that declare one.
    pub fn declared_branch(&self, len: usize) -> Option<Seq> {
        match self {
            SeqTree::Generated(g) => g.generator.branch(len),
            SeqTree::Finite(_) => None,
        }
    }

    /// Downward closure: exhaustive for finite trees; for generated trees,
    /// every sequence among the first few thousand positions plus the
    /// declared branch up to the probe depth.
    pub fn validate(&self) -> Result<(), TreeError> {
        let check = |s: &Seq| -> Result<(), TreeError> {
            if s.is_empty() {
                return Ok(());
            }
            let parent = &s[..s.len() - 1];
            if self.contains(parent) {
                Ok(())
            } else {
                Err(TreeError::Malformed {
                    missing: parent.to_vec(),
                    present: s.clone(),
                })
            }
        };
        match self {
            SeqTree::Finite(t) => t.seqs.iter().try_for_each(check),
            SeqTree::Generated(g) => {
                if let Generator::Periodic { period, .. } = &g.generator {
                    if period.is_empty() {
                        return Err(TreeError::Invalid("periodic branch needs a nonempty period".into()));
                    }
                }
                for n in 0..GENERATED_SPOT_CHECK {
                    let s = seq_of_u64(n);
                    if self.contains(&s) {
                        check(&s)?;
                    }
                }
                if let Some(b) = g.generator.branch(g.depth as usize) {
                    for l in 0..=b.len() {
                        if !self.contains(&b[..l]) {
                            return Err(TreeError::BranchNotInTree(b[..l].to_vec()));
                        }
                    }
                }
                Ok(())
            }
        }
    }

    pub fn from_json(s: &str, complete: bool) -> Result<Self, TreeError> {
        let t: SeqTree = serde_json::from_str(s).map_err(|e| TreeError::Invalid(e.to_string()))?;
        let t = match (t, complete) {
            (SeqTree::Finite(f), true) => SeqTree::finite_closed(f.seqs),
            (t, _) => t,
        };
        t.validate()?;
        Ok(t)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("trees always serialize")
    }
}

const GENERATED_SPOT_CHECK: u64 = 2000;

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum TreeDoc {
    Finite(Vec<Seq>),
    Generated(GeneratedTree),
}

impl Serialize for SeqTree {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            SeqTree::Finite(t) => {
                // enumeration order, which puts every prefix first
                let seqs: Vec<&Seq> = t.by_index.values().collect();
                seqs.serialize(s)
            }
            SeqTree::Generated(g) => g.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for SeqTree {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(match TreeDoc::deserialize(d)? {
            TreeDoc::Finite(seqs) => SeqTree::Finite(FiniteTree::from_set(seqs.into_iter().collect())),
            TreeDoc::Generated(g) => SeqTree::Generated(g),
        })
    }
}

impl fmt::Display for SeqTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_json().to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum WfStatus {
    WellFounded,
    IllFounded { prefix: Seq },
    Unknown { depth: u64 },
}

pub fn wf_check(t: &SeqTree) -> Result<WfStatus, TreeError> {
    t.validate()?;
    Ok(match t {
        SeqTree::Finite(_) => WfStatus::WellFounded,
        SeqTree::Generated(g) => match &g.generator {
            Generator::Binary { height } if *height <= g.depth => WfStatus::WellFounded,
            Generator::Binary { .. } => WfStatus::Unknown { depth: g.depth },
            other => WfStatus::IllFounded {
                // validate() has already walked this prefix
                prefix: other.branch(g.depth as usize).expect("declared branch"),
            },
        },
    })
}

/// Rank of the root: leaves have rank 0, any other node one more than its
/// highest child.
pub fn rank_finite(t: &SeqTree) -> Result<u64, TreeError> {
    let f = t.as_finite().ok_or(TreeError::NotFinite)?;
    if f.is_empty() {
        return Err(TreeError::Empty);
    }
    t.validate()?;
    // BTreeSet order lists every extension of s right after s, so a reverse
    // scan sees all children before their parent
    let mut rank: BTreeMap<&[u64], u64> = BTreeMap::new();
    for s in f.seqs.iter().rev() {
        let r = *rank.get(s.as_slice()).unwrap_or(&0);
        if let Some((_, parent)) = s.split_last() {
            let e = rank.entry(parent).or_insert(0);
            *e = (*e).max(r + 1);
        } else {
            return Ok(r);
        }
    }
    unreachable!("a validated nonempty tree contains the empty sequence")
}

/// `F(T)`: `p(k,n)` if `s_k ◁ s_n` are both in `T`, and 0 otherwise.
pub fn tree_reduce(t: &SeqTree) -> BinaryFn {
    BinaryFn::new(BinaryRepr::TreeReduction { tree: t.clone() })
}

pub fn reduction_value(t: &SeqTree, k: &Nat, n: &Nat) -> Nat {
    if k >= n {
        return Nat::zero();
    }
    match (t.contains_index(k), t.contains_index(n)) {
        (Some(a), Some(b)) if is_proper_prefix(&a, &b) => pair(k, n),
        _ => Nat::zero(),
    }
}

/// Whether `F(T)` is nonzero and 1-1 on `∇_{A,A}`, where `A` indexes the
/// first `k` prefixes `⟨⟩, ⟨b₀⟩, …` of `branch`.
pub fn branch_injectivity_check(t: &SeqTree, branch: &[u64], k: usize) -> Result<bool, TreeError> {
    let need = k.saturating_sub(1);
    if branch.len() < need {
        return Err(TreeError::BranchTooShort { need, got: branch.len() });
    }
    let prefixes: Vec<&[u64]> = (0..k).map(|l| &branch[..l]).collect();
    if let Some(p) = prefixes.iter().find(|p| !t.contains(p)) {
        return Err(TreeError::BranchNotInTree(p.to_vec()));
    }
    let fa = tree_reduce(t);
    let a: Vec<Nat> = prefixes.iter().map(|p| index_of(p)).collect();
    let mut seen = BTreeSet::new();
    for x in &a {
        for y in a.iter().filter(|y| x < *y) {
            let v = fa.eval(x, y).expect("tree reductions never fail");
            if v.is_zero() || !seen.insert(v) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Recovers a `◁`-chain from a block of `∇_{A,B}` on which `f_t` is nonzero
/// and 1-1. Every `a ∈ A` below `max B` pairs with `max B`, so
/// `s_a ◁ s_{max B}`; those prefixes of one sequence are a chain. The
/// result is re-checked from the enumeration before it is returned.
pub fn chain_recovery(f_t: &BinaryFn, a: &[Nat], b: &[Nat]) -> Result<Option<Vec<Seq>>, EvalError> {
    let a: BTreeSet<&Nat> = a.iter().collect();
    let b: BTreeSet<&Nat> = b.iter().collect();
    if a.len() < 2 || b.len() < 2 {
        return Ok(None);
    }
    let mut seen = BTreeSet::new();
    for x in &a {
        for y in b.iter().filter(|y| x < *y) {
            let v = f_t.eval(x, y)?;
            if v.is_zero() || !seen.insert(v) {
                return Ok(None);
            }
        }
    }
    if seen.is_empty() {
        return Ok(None);
    }
    let top = *b.iter().next_back().expect("|B| ≥ 2");
    let chain: Vec<Seq> = a
        .iter()
        .filter(|x| **x < top)
        .chain(std::iter::once(&top))
        .map(|n| seq_of(n))
        .collect();
    let ok = chain.windows(2).all(|w| is_proper_prefix(&w[0], &w[1]));
    Ok(ok.then_some(chain))
}
