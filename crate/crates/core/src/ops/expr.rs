//! Rule expressions over the two coordinates, used by piecewise functions and
//! by formula-backed unaries.
//!
//! JSON form: `"x"`, `"y"`, a number, or `[op, lhs, rhs]` with `op` one of
//! `add sub mul div mod min max`. Subtraction is truncated at zero,
//! `a div 0 = 0` and `a mod 0 = a`, so every expression is total.

use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use super::serde_nat;
use crate::Nat;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    X,
    Y,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Div,
    Mod,
    Min,
    Max,
}

impl Op {
    fn name(self) -> &'static str {
        match self {
            Op::Add => "add",
            Op::Sub => "sub",
            Op::Mul => "mul",
            Op::Div => "div",
            Op::Mod => "mod",
            Op::Min => "min",
            Op::Max => "max",
        }
    }

    fn from_name(s: &str) -> Option<Op> {
        Some(match s {
            "add" => Op::Add,
            "sub" => Op::Sub,
            "mul" => Op::Mul,
            "div" => Op::Div,
            "mod" => Op::Mod,
            "min" => Op::Min,
            "max" => Op::Max,
            _ => return None,
        })
    }

    fn apply(self, a: Nat, b: Nat) -> Nat {
        match self {
            Op::Add => a + b,
            Op::Sub => {
                if a > b {
                    a - b
                } else {
                    Nat::zero()
                }
            }
            Op::Mul => a * b,
            Op::Div => {
                if b.is_zero() {
                    Nat::zero()
                } else {
                    a / b
                }
            }
            Op::Mod => {
                if b.is_zero() {
                    a
                } else {
                    a % b
                }
            }
            Op::Min => a.min(b),
            Op::Max => a.max(b),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Expr {
    Var(Var),
    Lit(Nat),
    Apply(Op, Box<Expr>, Box<Expr>),
}

/// How an expression behaves when one variable is held fixed and the other
/// runs off to infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Growth {
    Bounded,
    /// Tends to infinity, so every row is unbounded.
    Divergent,
    Unknown,
}

#[allow(clippy::should_implement_trait)]
impl Expr {
    pub fn x() -> Expr {
        Expr::Var(Var::X)
    }

    pub fn y() -> Expr {
        Expr::Var(Var::Y)
    }

    pub fn lit(v: u64) -> Expr {
        Expr::Lit(Nat::from(v))
    }

    pub fn apply(op: Op, a: Expr, b: Expr) -> Expr {
        Expr::Apply(op, Box::new(a), Box::new(b))
    }

    pub fn add(a: Expr, b: Expr) -> Expr {
        Expr::apply(Op::Add, a, b)
    }

    pub fn mul(a: Expr, b: Expr) -> Expr {
        Expr::apply(Op::Mul, a, b)
    }

    pub fn min(a: Expr, b: Expr) -> Expr {
        Expr::apply(Op::Min, a, b)
    }

    pub fn max(a: Expr, b: Expr) -> Expr {
        Expr::apply(Op::Max, a, b)
    }

    pub fn modulo(a: Expr, b: Expr) -> Expr {
        Expr::apply(Op::Mod, a, b)
    }

    pub fn div(a: Expr, b: Expr) -> Expr {
        Expr::apply(Op::Div, a, b)
    }

    pub fn eval(&self, x: &Nat, y: &Nat) -> Nat {
        match self {
            Expr::Var(Var::X) => x.clone(),
            Expr::Var(Var::Y) => y.clone(),
            Expr::Lit(c) => c.clone(),
            Expr::Apply(op, a, b) => op.apply(a.eval(x, y), b.eval(x, y)),
        }
    }

    pub fn mentions(&self, v: Var) -> bool {
        match self {
            Expr::Var(w) => *w == v,
            Expr::Lit(_) => false,
            Expr::Apply(_, a, b) => a.mentions(v) || b.mentions(v),
        }
    }

    /// Replace every occurrence of a variable.
    pub fn substitute(&self, v: Var, by: &Expr) -> Expr {
        match self {
            Expr::Var(w) if *w == v => by.clone(),
            Expr::Var(_) | Expr::Lit(_) => self.clone(),
            Expr::Apply(op, a, b) => Expr::apply(*op, a.substitute(v, by), b.substitute(v, by)),
        }
    }

    /// Growth as `free` tends to infinity with the other variable fixed.
    pub fn growth(&self, free: Var) -> Growth {
        use Growth::*;
        match self {
            Expr::Var(w) if *w == free => Divergent,
            Expr::Var(_) | Expr::Lit(_) => Bounded,
            Expr::Apply(op, a, b) => {
                let (ga, gb) = (a.growth(free), b.growth(free));
                match op {
                    Op::Add => match (ga, gb) {
                        (Bounded, Bounded) => Bounded,
                        (Divergent, _) | (_, Divergent) => Divergent,
                        _ => Unknown,
                    },
                    Op::Max => match (ga, gb) {
                        (Bounded, Bounded) => Bounded,
                        (Divergent, _) | (_, Divergent) => Divergent,
                        _ => Unknown,
                    },
                    Op::Min => match (ga, gb) {
                        (Bounded, _) | (_, Bounded) => Bounded,
                        (Divergent, Divergent) => Divergent,
                        _ => Unknown,
                    },
                    Op::Mul => match (ga, gb, positive_literal(a), positive_literal(b)) {
                        (Bounded, Bounded, _, _) => Bounded,
                        (Divergent, Divergent, _, _) => Divergent,
                        (Divergent, _, _, Some(true)) | (_, Divergent, Some(true), _) => Divergent,
                        (_, _, Some(false), _) | (_, _, _, Some(false)) => Bounded,
                        _ => Unknown,
                    },
                    Op::Sub => match (ga, gb) {
                        (Bounded, _) => Bounded,
                        (Divergent, Bounded) => Divergent,
                        _ => Unknown,
                    },
                    Op::Div => match (ga, positive_literal(b)) {
                        (Bounded, _) => Bounded,
                        (g, Some(true)) => g,
                        (_, Some(false)) => Bounded,
                        _ => Unknown,
                    },
                    Op::Mod => match (ga, positive_literal(b)) {
                        (Bounded, _) | (_, Some(true)) => Bounded,
                        (g, Some(false)) => g,
                        _ => Unknown,
                    },
                }
            }
        }
    }

    /// A pointwise upper bound obtained by replacing each variable with a
    /// bound for it (`None` when the variable is unbounded). Every operator is
    /// monotone in its first argument, which is all the rules below rely on.
    pub fn upper_bound(&self, bound_of: &dyn Fn(Var) -> Option<Expr>) -> Option<Expr> {
        match self {
            Expr::Var(v) => bound_of(*v),
            Expr::Lit(_) => Some(self.clone()),
            Expr::Apply(op, a, b) => {
                let ua = a.upper_bound(bound_of);
                let ub = b.upper_bound(bound_of);
                match op {
                    Op::Add | Op::Mul | Op::Max => Some(Expr::apply(*op, ua?, ub?)),
                    Op::Min => match (ua, ub) {
                        (Some(ua), Some(ub)) => Some(Expr::min(ua, ub)),
                        (Some(u), None) | (None, Some(u)) => Some(u),
                        (None, None) => None,
                    },
                    Op::Sub | Op::Div => ua,
                    Op::Mod => match (ua, literal(b)) {
                        (Some(ua), Some(c)) if !c.is_zero() => {
                            Some(Expr::min(ua, Expr::Lit(c - 1u32)))
                        }
                        (Some(ua), _) => Some(ua),
                        (None, Some(c)) if !c.is_zero() => Some(Expr::Lit(c - 1u32)),
                        _ => None,
                    },
                }
            }
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Expr::Var(Var::X) => Value::from("x"),
            Expr::Var(Var::Y) => Value::from("y"),
            Expr::Lit(c) => serde_nat::to_json(c),
            Expr::Apply(op, a, b) => Value::from(vec![Value::from(op.name()), a.to_json(), b.to_json()]),
        }
    }

    pub fn from_json(v: &Value) -> Result<Expr, String> {
        match v {
            Value::String(s) if s == "x" => Ok(Expr::x()),
            Value::String(s) if s == "y" => Ok(Expr::y()),
            Value::Number(_) | Value::String(_) => serde_nat::from_json(v)
                .map(Expr::Lit)
                .ok_or_else(|| format!("bad expression literal {v}")),
            Value::Array(items) => match items.as_slice() {
                [Value::String(op), a, b] => {
                    let op = Op::from_name(op).ok_or_else(|| format!("unknown operator {op:?}"))?;
                    Ok(Expr::apply(op, Expr::from_json(a)?, Expr::from_json(b)?))
                }
                _ => Err(format!("expression node must be [op, lhs, rhs], got {v}")),
            },
            _ => Err(format!("bad expression {v}")),
        }
    }
}

fn literal(e: &Expr) -> Option<Nat> {
    match e {
        Expr::Lit(c) => Some(c.clone()),
        _ => None,
    }
}

fn positive_literal(e: &Expr) -> Option<bool> {
    literal(e).map(|c| !c.is_zero())
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_json())
    }
}

impl Serialize for Expr {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Expr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        Expr::from_json(&v).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nat;

    #[test]
    fn total_arithmetic() {
        let e = Expr::apply(Op::Sub, Expr::x(), Expr::y());
        assert_eq!(e.eval(&nat(2), &nat(5)), nat(0));
        assert_eq!(Expr::div(Expr::x(), Expr::lit(0)).eval(&nat(9), &nat(0)), nat(0));
        assert_eq!(Expr::modulo(Expr::x(), Expr::lit(0)).eval(&nat(9), &nat(0)), nat(9));
        assert_eq!(Expr::modulo(Expr::x(), Expr::lit(7)).eval(&nat(9), &nat(0)), nat(2));
    }

    #[test]
    fn growth_rules() {
        let sum = Expr::add(Expr::x(), Expr::y());
        assert_eq!(sum.growth(Var::Y), Growth::Divergent);
        let m = Expr::add(Expr::min(Expr::x(), Expr::y()), Expr::lit(1));
        assert_eq!(m.growth(Var::Y), Growth::Bounded);
        assert_eq!(Expr::modulo(Expr::y(), Expr::lit(7)).growth(Var::Y), Growth::Bounded);
        assert_eq!(Expr::mul(Expr::y(), Expr::lit(0)).growth(Var::Y), Growth::Bounded);
        let alt = Expr::apply(Op::Sub, Expr::y(), Expr::y());
        assert_eq!(alt.growth(Var::Y), Growth::Unknown);
    }

    #[test]
    fn upper_bounds_dominate() {
        let e = Expr::add(Expr::min(Expr::x(), Expr::y()), Expr::modulo(Expr::y(), Expr::lit(5)));
        let ub = e.upper_bound(&|v| match v {
            Var::X => Some(Expr::x()),
            Var::Y => None,
        });
        let ub = ub.expect("bounded in y");
        assert!(!ub.mentions(Var::Y));
        for x in 0..30u64 {
            for y in 0..60u64 {
                assert!(e.eval(&nat(x), &nat(y)) <= ub.eval(&nat(x), &nat(0)));
            }
        }
    }

    #[test]
    fn json_shape() {
        let e = Expr::add(Expr::x(), Expr::lit(3));
        assert_eq!(e.to_json().to_string(), r#"["add","x",3]"#);
        assert_eq!(Expr::from_json(&e.to_json()).unwrap(), e);
        assert!(Expr::from_json(&serde_json::json!(["pow", "x", 2])).is_err());
    }
}
