//! JSON form of graded elements.
//!
//! Circle ring: `{"<degree>": {"<freq>": [cos_num, cos_den, sin_num, sin_den]}}`.
//! Interval ring: `{"<degree>": {"<power>": [num, den]}}`.
//! Integers that do not fit in 64 bits are written as strings.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Map, Value};

use super::coeff::{CoeffFn, Mode, Ring};
use super::graded::GradedElement;
use super::AlgebraError;
use crate::rational::Q;

fn int_value(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(v) => json!(v),
        None => json!(n.to_string()),
    }
}

fn parse_int(v: &Value) -> Result<BigInt, AlgebraError> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| bad(format!("non-integer {n}"))),
        Value::String(s) => s.trim().parse().map_err(|_| bad(format!("bad integer {s:?}"))),
        other => Err(bad(format!("expected integer, got {other}"))),
    }
}

fn bad(msg: String) -> AlgebraError {
    AlgebraError::Json(msg)
}

fn ratio(num: &Value, den: &Value) -> Result<Q, AlgebraError> {
    let d = parse_int(den)?;
    if d.is_zero() {
        return Err(bad("zero denominator".into()));
    }
    Ok(Q::new(parse_int(num)?, d))
}

pub fn to_json(e: &GradedElement) -> Value {
    let mut out = Map::new();
    for (k, h) in e.parts() {
        let mut by_order: BTreeMap<u32, Vec<Value>> = BTreeMap::new();
        match e.ring() {
            Ring::CircleTrig => {
                let mut freqs: Vec<u32> = h.terms().map(|(m, _)| m.order()).collect();
                freqs.dedup();
                for f in freqs {
                    let c = h.coeff(Mode::Cos(f));
                    let s = h.coeff(Mode::Sin(f));
                    by_order.insert(
                        f,
                        vec![
                            int_value(c.numer()),
                            int_value(c.denom()),
                            int_value(s.numer()),
                            int_value(s.denom()),
                        ],
                    );
                }
            }
            Ring::IntervalPoly => {
                for (m, c) in h.terms() {
                    by_order.insert(m.order(), vec![int_value(c.numer()), int_value(c.denom())]);
                }
            }
        }
        let inner: Map<String, Value> = by_order
            .into_iter()
            .map(|(f, v)| (f.to_string(), Value::Array(v)))
            .collect();
        out.insert(k.to_string(), Value::Object(inner));
    }
    Value::Object(out)
}

/// Parses an element; the ring is read off the array lengths, falling back to
/// `default_ring` for the empty element.
pub fn from_json(v: &Value, default_ring: Ring) -> Result<GradedElement, AlgebraError> {
    let obj = v
        .as_object()
        .ok_or_else(|| bad("element must be a JSON object".into()))?;
    let mut ring: Option<Ring> = None;
    let mut parts = Vec::new();
    for (deg, inner) in obj {
        let k: u32 = deg.parse().map_err(|_| bad(format!("bad degree key {deg:?}")))?;
        let inner = inner
            .as_object()
            .ok_or_else(|| bad(format!("degree {k}: expected an object")))?;
        let mut terms = Vec::new();
        for (ord, arr) in inner {
            let f: u32 = ord.parse().map_err(|_| bad(format!("bad order key {ord:?}")))?;
            let arr = arr
                .as_array()
                .ok_or_else(|| bad(format!("degree {k}, order {f}: expected an array")))?;
            let this = match arr.len() {
                4 => Ring::CircleTrig,
                2 => Ring::IntervalPoly,
                n => return Err(bad(format!("degree {k}, order {f}: {n} entries"))),
            };
            if *ring.get_or_insert(this) != this {
                return Err(bad("mixed circle and interval coefficients".into()));
            }
            match this {
                Ring::CircleTrig => {
                    terms.push((Mode::Cos(f), ratio(&arr[0], &arr[1])?));
                    let s = ratio(&arr[2], &arr[3])?;
                    if f == 0 && !s.is_zero() {
                        return Err(bad(format!("degree {k}: sin 0s coefficient must be 0")));
                    }
                    terms.push((Mode::Sin(f), s));
                }
                Ring::IntervalPoly => terms.push((Mode::Pow(f), ratio(&arr[0], &arr[1])?)),
            }
        }
        parts.push((k, terms));
    }
    let ring = ring.unwrap_or(default_ring);
    let parts = parts
        .into_iter()
        .map(|(k, t)| Ok((k, CoeffFn::from_terms(ring, t)?)))
        .collect::<Result<Vec<_>, AlgebraError>>()?;
    GradedElement::from_parts(ring, parts)
}
