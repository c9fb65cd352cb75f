//! JSON encoding for [`Nat`]: a number when it fits in `u64`, otherwise a
//! decimal string. Both forms are accepted on input.

use std::fmt;

use num_traits::ToPrimitive;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::Nat;

pub fn serialize<S: Serializer>(n: &Nat, s: S) -> Result<S::Ok, S::Error> {
    match n.to_u64() {
        Some(v) => s.serialize_u64(v),
        None => s.serialize_str(&n.to_str_radix(10)),
    }
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Nat, D::Error> {
    d.deserialize_any(NatVisitor)
}

struct NatVisitor;

impl<'de> Visitor<'de> for NatVisitor {
    type Value = Nat;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a natural number or a decimal string")
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<Nat, E> {
        Ok(Nat::from(v))
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<Nat, E> {
        u64::try_from(v)
            .map(Nat::from)
            .map_err(|_| E::custom("negative number is not a natural"))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<Nat, E> {
        parse_nat(v).ok_or_else(|| E::custom(format!("not a natural number: {v:?}")))
    }
}

pub fn parse_nat(s: &str) -> Option<Nat> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    Nat::parse_bytes(s.as_bytes(), 10)
}

pub fn to_json(n: &Nat) -> serde_json::Value {
    match n.to_u64() {
        Some(v) => serde_json::Value::from(v),
        None => serde_json::Value::String(n.to_str_radix(10)),
    }
}

pub fn from_json(v: &serde_json::Value) -> Option<Nat> {
    match v {
        serde_json::Value::Number(num) => num.as_u64().map(Nat::from),
        serde_json::Value::String(s) => parse_nat(s),
        _ => None,
    }
}

/// Newtype carrying the JSON encoding, for use inside containers.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct N(pub Nat);

impl Serialize for N {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        serialize(&self.0, s)
    }
}

impl<'de> Deserialize<'de> for N {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        deserialize(d).map(N)
    }
}

pub mod seq {
    use super::N;
    use crate::Nat;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Nat], s: S) -> Result<S::Ok, S::Error> {
        let wrapped: Vec<N> = v.iter().cloned().map(N).collect();
        wrapped.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Nat>, D::Error> {
        let wrapped = Vec::<N>::deserialize(d)?;
        Ok(wrapped.into_iter().map(|n| n.0).collect())
    }
}

pub mod grid {
    use super::N;
    use crate::Nat;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(rows: &[Vec<Nat>], s: S) -> Result<S::Ok, S::Error> {
        let wrapped: Vec<Vec<N>> = rows
            .iter()
            .map(|r| r.iter().cloned().map(N).collect())
            .collect();
        wrapped.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Nat>>, D::Error> {
        let wrapped = Vec::<Vec<N>>::deserialize(d)?;
        Ok(wrapped
            .into_iter()
            .map(|r| r.into_iter().map(|n| n.0).collect())
            .collect())
    }
}
