//! Serde helpers for big integers: JSON numbers when they fit in `i64`,
//! decimal strings otherwise.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serializer};

pub fn to_json(v: &BigInt) -> serde_json::Value {
    match v.to_i64() {
        Some(i) => i.into(),
        None => v.to_string().into(),
    }
}

pub fn int<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    match v.to_i64() {
        Some(i) => s.serialize_i64(i),
        None => s.serialize_str(&v.to_string()),
    }
}

pub fn opt_int<S: Serializer>(v: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(v) => int(v, s),
        None => s.serialize_none(),
    }
}

pub fn vec<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        seq.serialize_element(&to_json(x))?;
    }
    seq.end()
}

pub fn vec2<S: Serializer>(v: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for row in v {
        let r: Vec<serde_json::Value> = row.iter().map(to_json).collect();
        seq.serialize_element(&r)?;
    }
    seq.end()
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Raw {
    I(i64),
    S(String),
}

fn from_raw<E: serde::de::Error>(r: Raw) -> Result<BigInt, E> {
    match r {
        Raw::I(i) => Ok(i.into()),
        Raw::S(s) => s.parse().map_err(E::custom),
    }
}

pub fn de_int<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
    from_raw(Raw::deserialize(d)?)
}

pub fn de_vec<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
    Vec::<Raw>::deserialize(d)?.into_iter().map(from_raw).collect()
}
