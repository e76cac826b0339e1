//! JSON encoding of scalars.
//!
//! Integers and residues are decimal strings, rationals `"p/q"`,
//! polynomials ascending coefficient arrays, rational functions
//! `{"num", "den"}` and product elements `{"values", "multiplicities"}`.
//! Parsing also accepts plain JSON integers wherever an integer is expected.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde_json::{json, Value};

use super::poly;
use super::ring::{reduce_bigint, Multiplicity, RingDescriptor, Scalar};
use crate::error::{Error, Result};

impl serde::Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        plain_json(self).serialize(s)
    }
}

/// Ring-free rendering; product elements omit their multiplicities.
fn plain_json(s: &Scalar) -> Value {
    match s {
        Scalar::Int(x) => Value::String(x.to_string()),
        Scalar::Rat(x) => Value::String(x.to_string()),
        Scalar::Residue(x) => Value::String(x.to_string()),
        Scalar::Poly(c) => Value::Array(c.iter().map(plain_json).collect()),
        Scalar::Frac(n, d) => json!({
            "num": n.iter().map(plain_json).collect::<Vec<_>>(),
            "den": d.iter().map(plain_json).collect::<Vec<_>>(),
        }),
        Scalar::Product(v) => json!({
            "values": v.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        }),
    }
}

/// Serde adapters that carry big integers as decimal strings.
pub mod decimal {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }

    pub mod vec {
        use num_bigint::BigInt;
        use serde::{Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
            s.collect_seq(v.iter().map(|x| x.to_string()))
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
            Vec::<String>::deserialize(d)?
                .iter()
                .map(|s| s.parse().map_err(serde::de::Error::custom))
                .collect()
        }
    }
}

pub fn multiplicity_json(m: Multiplicity) -> Value {
    match m {
        Multiplicity::Finite(k) => json!(k),
        Multiplicity::Infinite => json!("inf"),
    }
}

pub fn scalar_to_json(ring: &RingDescriptor, s: &Scalar) -> Value {
    match (ring, s) {
        (RingDescriptor::ProductMod { blocks, .. }, Scalar::Product(v)) => json!({
            "values": v.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            "multiplicities": blocks.iter().map(|b| multiplicity_json(*b)).collect::<Vec<_>>(),
        }),
        _ => plain_json(s),
    }
}

pub fn parse_bigint(v: &Value, pointer: &str) -> Result<BigInt> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigInt::from(i))
            } else if let Some(u) = n.as_u64() {
                Ok(BigInt::from(u))
            } else {
                Err(Error::invalid(pointer, "expected an integer"))
            }
        }
        Value::String(s) => s
            .trim()
            .parse()
            .map_err(|_| Error::invalid(pointer, format!("expected an integer, got {s:?}"))),
        _ => Err(Error::invalid(pointer, "expected an integer")),
    }
}

fn parse_rational(v: &Value, pointer: &str) -> Result<BigRational> {
    if let Value::String(s) = v {
        if let Some((p, q)) = s.split_once('/') {
            let p: BigInt = p
                .trim()
                .parse()
                .map_err(|_| Error::invalid(pointer, format!("bad numerator in {s:?}")))?;
            let q: BigInt = q
                .trim()
                .parse()
                .map_err(|_| Error::invalid(pointer, format!("bad denominator in {s:?}")))?;
            if q.is_zero() {
                return Err(Error::invalid(pointer, "zero denominator"));
            }
            return Ok(BigRational::new(p, q));
        }
    }
    parse_bigint(v, pointer).map(BigRational::from_integer)
}

fn parse_coeffs(base: &RingDescriptor, v: &Value, pointer: &str) -> Result<Vec<Scalar>> {
    match v {
        Value::Array(items) => {
            let c = items
                .iter()
                .enumerate()
                .map(|(i, x)| scalar_from_json(base, x, &format!("{pointer}/{i}")))
                .collect::<Result<Vec<_>>>()?;
            Ok(poly::trim(base, c))
        }
        other => Ok(poly::trim(base, vec![scalar_from_json(base, other, pointer)?])),
    }
}

/// Parse a scalar of `ring`, reporting errors at JSON pointer `pointer`.
pub fn scalar_from_json(ring: &RingDescriptor, v: &Value, pointer: &str) -> Result<Scalar> {
    match ring {
        RingDescriptor::Integers => parse_bigint(v, pointer).map(Scalar::Int),
        RingDescriptor::Rationals => parse_rational(v, pointer).map(Scalar::Rat),
        RingDescriptor::PrimeField(m) | RingDescriptor::ModRing(m) => {
            Ok(Scalar::Residue(reduce_bigint(&parse_bigint(v, pointer)?, *m)))
        }
        RingDescriptor::Poly(base) => parse_coeffs(base, v, pointer).map(Scalar::Poly),
        RingDescriptor::RationalFunctions(base) => {
            let (num, den) = match v {
                Value::Object(obj) => {
                    let num = obj
                        .get("num")
                        .ok_or_else(|| Error::invalid(pointer, "missing \"num\""))?;
                    let den = obj
                        .get("den")
                        .ok_or_else(|| Error::invalid(pointer, "missing \"den\""))?;
                    (
                        parse_coeffs(base, num, &format!("{pointer}/num"))?,
                        parse_coeffs(base, den, &format!("{pointer}/den"))?,
                    )
                }
                other => (parse_coeffs(base, other, pointer)?, vec![base.one()]),
            };
            if den.is_empty() {
                return Err(Error::invalid(pointer, "zero denominator"));
            }
            let (n, d) = poly::frac_canonical(base, num, den);
            Ok(Scalar::Frac(n, d))
        }
        RingDescriptor::ProductMod { n, blocks } => match v {
            Value::Object(obj) => {
                let values = obj
                    .get("values")
                    .and_then(Value::as_array)
                    .ok_or_else(|| Error::invalid(pointer, "missing \"values\" array"))?;
                if values.len() != blocks.len() {
                    return Err(Error::invalid(
                        format!("{pointer}/values"),
                        format!("expected {} block values", blocks.len()),
                    ));
                }
                if let Some(mults) = obj.get("multiplicities") {
                    let expected: Vec<Value> =
                        blocks.iter().map(|b| multiplicity_json(*b)).collect();
                    if mults.as_array() != Some(&expected) {
                        return Err(Error::invalid(
                            format!("{pointer}/multiplicities"),
                            "multiplicities disagree with the ring",
                        ));
                    }
                }
                let vals = values
                    .iter()
                    .enumerate()
                    .map(|(i, x)| {
                        parse_bigint(x, &format!("{pointer}/values/{i}"))
                            .map(|b| reduce_bigint(&b, *n))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Scalar::Product(vals))
            }
            other => Ok(ring.from_bigint(&parse_bigint(other, pointer)?)),
        },
    }
}
