//! The binary-clone term algebra.
//!
//! A [`Term`] is built from the two projections, named binary generators,
//! unary applications and the composition `f(g, h)`, which denotes
//! `(x, y) ↦ f(g(x,y), h(x,y))`. Terms serialize as JSON s-expressions:
//! `"p1"`, `"p2"`, `["gen", name]`, `["uapp", unary-spec, t]` and
//! `["compose", f, g, h]`.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;
use thiserror::Error;

use crate::ops::{BinaryBuiltin, BinaryFn, EvalError, SpecError, UnaryFn};
use crate::Nat;

pub const MAX_ENUM_DEPTH: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("enumeration depth {requested} exceeds the limit of {MAX_ENUM_DEPTH}")]
    DepthLimitExceeded { requested: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Proj1,
    Proj2,
    Gen(String),
    UnaryApp(UnaryFn, Box<Term>),
    Compose(Box<Term>, Box<Term>, Box<Term>),
}

impl Term {
    pub fn gen(name: impl Into<String>) -> Term {
        Term::Gen(name.into())
    }

    pub fn uapp(u: UnaryFn, t: Term) -> Term {
        Term::UnaryApp(u, Box::new(t))
    }

    pub fn compose(head: Term, left: Term, right: Term) -> Term {
        Term::Compose(Box::new(head), Box::new(left), Box::new(right))
    }

    pub fn eval(&self, env: &GenEnv, x: &Nat, y: &Nat) -> Result<Nat, EvalError> {
        match self {
            Term::Proj1 => Ok(x.clone()),
            Term::Proj2 => Ok(y.clone()),
            Term::Gen(name) => env
                .get(name)
                .ok_or_else(|| EvalError::UnboundGenerator(name.clone()))?
                .eval(x, y),
            Term::UnaryApp(u, t) => u.eval(&t.eval(env, x, y)?),
            Term::Compose(head, l, r) => {
                let lv = l.eval(env, x, y)?;
                let rv = r.eval(env, x, y)?;
                head.eval(env, &lv, &rv)
            }
        }
    }

    pub fn eval_u64(&self, env: &GenEnv, x: u64, y: u64) -> Result<Nat, EvalError> {
        self.eval(env, &Nat::from(x), &Nat::from(y))
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Proj1 | Term::Proj2 | Term::Gen(_) => 0,
            Term::UnaryApp(_, t) => 1 + t.depth(),
            Term::Compose(h, l, r) => 1 + h.depth().max(l.depth()).max(r.depth()),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Proj1 | Term::Proj2 | Term::Gen(_) => 1,
            Term::UnaryApp(_, t) => 1 + t.size(),
            Term::Compose(h, l, r) => 1 + h.size() + l.size() + r.size(),
        }
    }

    /// Names of the binary generators occurring in the term.
    pub fn generators(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_generators(&mut out);
        out
    }

    fn collect_generators(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Proj1 | Term::Proj2 => {}
            Term::Gen(name) => {
                out.insert(name.clone());
            }
            Term::UnaryApp(_, t) => t.collect_generators(out),
            Term::Compose(h, l, r) => {
                h.collect_generators(out);
                l.collect_generators(out);
                r.collect_generators(out);
            }
        }
    }

    pub fn validate(&self) -> Result<(), SpecError> {
        match self {
            Term::Proj1 | Term::Proj2 | Term::Gen(_) => Ok(()),
            Term::UnaryApp(u, t) => {
                u.validate()?;
                t.validate()
            }
            Term::Compose(h, l, r) => {
                h.validate()?;
                l.validate()?;
                r.validate()
            }
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Term::Proj1 => Value::from("p1"),
            Term::Proj2 => Value::from("p2"),
            Term::Gen(name) => Value::from(vec![Value::from("gen"), Value::from(name.as_str())]),
            Term::UnaryApp(u, t) => Value::from(vec![
                Value::from("uapp"),
                serde_json::to_value(u).expect("unary specs always serialize"),
                t.to_json(),
            ]),
            Term::Compose(h, l, r) => Value::from(vec![
                Value::from("compose"),
                h.to_json(),
                l.to_json(),
                r.to_json(),
            ]),
        }
    }

    pub fn from_json(v: &Value) -> Result<Term, String> {
        match v {
            Value::String(s) if s == "p1" => Ok(Term::Proj1),
            Value::String(s) if s == "p2" => Ok(Term::Proj2),
            Value::Array(items) => match items.as_slice() {
                [Value::String(tag), Value::String(name)] if tag == "gen" => Ok(Term::gen(name.clone())),
                [Value::String(tag), u, t] if tag == "uapp" => {
                    let u: UnaryFn = serde_json::from_value(u.clone()).map_err(|e| e.to_string())?;
                    Ok(Term::uapp(u, Term::from_json(t)?))
                }
                [Value::String(tag), h, l, r] if tag == "compose" => Ok(Term::compose(
                    Term::from_json(h)?,
                    Term::from_json(l)?,
                    Term::from_json(r)?,
                )),
                _ => Err(format!("unrecognised term node {v}")),
            },
            _ => Err(format!("unrecognised term {v}")),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_json())
    }
}

impl Serialize for Term {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Term {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        Term::from_json(&v).map_err(serde::de::Error::custom)
    }
}

/// Binds generator names to binary functions.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GenEnv {
    bindings: BTreeMap<String, BinaryFn>,
}

impl GenEnv {
    pub fn new() -> Self {
        GenEnv::default()
    }

    /// Every named builtin, bound under its own name.
    pub fn standard() -> Self {
        BinaryBuiltin::NAMED
            .iter()
            .fold(GenEnv::new(), |env, b| env.bind(b.to_string(), BinaryFn::builtin(b.clone())))
    }

    pub fn is_standard(&self) -> bool {
        *self == GenEnv::standard()
    }

    /// An environment holding just the named builtins.
    pub fn with_builtins(names: &[BinaryBuiltin]) -> Self {
        names
            .iter()
            .fold(GenEnv::new(), |env, b| env.bind(b.to_string(), BinaryFn::builtin(b.clone())))
    }

    pub fn bind(mut self, name: impl Into<String>, f: BinaryFn) -> Self {
        self.bindings.insert(name.into(), f);
        self
    }

    pub fn get(&self, name: &str) -> Option<&BinaryFn> {
        self.bindings.get(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &BinaryFn)> {
        self.bindings.iter()
    }

    pub fn names(&self) -> impl Iterator<Item = &String> {
        self.bindings.keys()
    }
}

pub fn eval_term(t: &Term, env: &GenEnv, x: &Nat, y: &Nat) -> Result<Nat, EvalError> {
    t.eval(env, x, y)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub x: u64,
    pub y: u64,
    #[serde(with = "crate::ops::serde_nat")]
    pub left: Nat,
    #[serde(with = "crate::ops::serde_nat")]
    pub right: Nat,
}

/// Compares two terms on `[0,n)²`; returns the first disagreement in
/// row-major order, or `None` when they agree on the whole window.
pub fn terms_equal_on_window(
    t1: &Term,
    t2: &Term,
    env: &GenEnv,
    n: u64,
) -> Result<Option<Mismatch>, EvalError> {
    for x in 0..n {
        for y in 0..n {
            let left = t1.eval_u64(env, x, y)?;
            let right = t2.eval_u64(env, x, y)?;
            if left != right {
                return Ok(Some(Mismatch { x, y, left, right }));
            }
        }
    }
    Ok(None)
}

/// Lazily enumerates every term up to `max_depth`, shallowest first.
///
/// Leaves are the projections and the generators of `env` (sorted by name).
/// A depth-`d` term is a unary application or a composition whose deepest
/// child has depth `d-1`, so every term is produced exactly once.
pub fn enumerate_terms(env: &GenEnv, max_depth: usize, pool: &[UnaryFn]) -> Result<TermStream, TermError> {
    if max_depth > MAX_ENUM_DEPTH {
        return Err(TermError::DepthLimitExceeded { requested: max_depth });
    }
    let mut leaves = vec![Term::Proj1, Term::Proj2];
    leaves.extend(env.names().map(|n| Term::gen(n.clone())));
    let mut seen = HashSet::new();
    let pool = pool.iter().filter(|u| seen.insert(*u)).cloned().collect();
    Ok(TermStream {
        leaves,
        pool,
        max_depth,
        done: Vec::new(),
        prev_start: 0,
        current: Vec::new(),
        depth: 0,
        state: StreamState::Leaves(0),
    })
}

pub struct TermStream {
    leaves: Vec<Term>,
    pool: Vec<UnaryFn>,
    max_depth: usize,
    /// All terms of depth below `depth`.
    done: Vec<Term>,
    /// Start of the depth `depth-1` block inside `done`.
    prev_start: usize,
    /// Terms of depth `depth` emitted so far.
    current: Vec<Term>,
    depth: usize,
    state: StreamState,
}

#[derive(Clone, Copy, Debug)]
enum StreamState {
    Leaves(usize),
    Unary { u: usize, t: usize },
    Compose { i: usize, j: usize, k: usize },
    Done,
}

impl TermStream {
    fn finish_level(&mut self) {
        self.prev_start = self.done.len();
        self.done.append(&mut self.current);
        self.depth += 1;
        self.state = if self.depth > self.max_depth {
            StreamState::Done
        } else {
            StreamState::Unary { u: 0, t: self.prev_start }
        };
    }

    fn emit(&mut self, t: Term) -> Option<Term> {
        self.current.push(t.clone());
        Some(t)
    }
}

impl Iterator for TermStream {
    type Item = Term;

    fn next(&mut self) -> Option<Term> {
        loop {
            match self.state {
                StreamState::Done => return None,
                StreamState::Leaves(i) => {
                    if i < self.leaves.len() {
                        self.state = StreamState::Leaves(i + 1);
                        let t = self.leaves[i].clone();
                        return self.emit(t);
                    }
                    self.finish_level();
                }
                StreamState::Unary { u, t } => {
                    if u >= self.pool.len() {
                        self.state = StreamState::Compose { i: 0, j: 0, k: 0 };
                        continue;
                    }
                    if t >= self.done.len() {
                        self.state = StreamState::Unary { u: u + 1, t: self.prev_start };
                        continue;
                    }
                    self.state = StreamState::Unary { u, t: t + 1 };
                    let term = Term::uapp(self.pool[u].clone(), self.done[t].clone());
                    return self.emit(term);
                }
                StreamState::Compose { i, j, k } => {
                    let n = self.done.len();
                    if i >= n {
                        self.finish_level();
                        continue;
                    }
                    let next = if k + 1 < n {
                        (i, j, k + 1)
                    } else if j + 1 < n {
                        (i, j + 1, 0)
                    } else {
                        (i + 1, 0, 0)
                    };
                    self.state = StreamState::Compose { i: next.0, j: next.1, k: next.2 };
                    if i.max(j).max(k) < self.prev_start {
                        continue;
                    }
                    let term = Term::compose(self.done[i].clone(), self.done[j].clone(), self.done[k].clone());
                    return self.emit(term);
                }
            }
        }
    }
}
