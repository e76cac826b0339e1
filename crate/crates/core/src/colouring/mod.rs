//! Colourings of modules and the refutation certificates built from them.

mod digits;
mod refute;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;
use serde_json::Value;

use crate::algebra::json::scalar_from_json;
use crate::algebra::{poly, RingDescriptor, Scalar};
use crate::arith;
use crate::error::{Error, Result};

pub use digits::{c_p, c_p_rational, devissage_combine, m_colouring_fpx, m_colouring_zxy, zxy_coefficients, MOrder};
pub(crate) use refute::integer_matrix;
pub use refute::{refute, separating_vectors, ChainStep, RefutationCertificate, ReplayReport, SeparatingVectors};

/// A finite colouring of a module, as a serialisable evaluation rule.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Colouring {
    /// Least nonzero base-`p` digit on `Z` or `Q`.
    Cp { p: u64 },
    /// Closed-form colouring of `Z[x, y]` at `(p, x, y)`.
    MZxy { p: u64, order: MOrder },
    /// Lowest nonzero coefficient on `F_p[x]`.
    MFpx { p: u64 },
    /// The class of `m` in `M / aM`, numbered from 0.
    Residue {
        ring: RingDescriptor,
        modulus: Scalar,
    },
    /// One colour for everything.
    Constant { colour: u64 },
    /// `sub` on the submodule `aM`, and `offset + quotient` on the rest,
    /// where `quotient` sees the class in `M / aM`.
    Devissage {
        ring: RingDescriptor,
        generator: Scalar,
        offset: u64,
        sub: Box<Colouring>,
        quotient: Box<Colouring>,
    },
}

impl Colouring {
    /// Parse the JSON form produced by serialisation.
    pub fn from_json(v: &Value, pointer: &str) -> Result<Colouring> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::invalid(pointer, "expected a colouring object"))?;
        let field = |name: &str| {
            obj.get(name)
                .ok_or_else(|| Error::invalid(format!("{pointer}/{name}"), "missing field"))
        };
        let uint = |name: &str| -> Result<u64> {
            field(name)?
                .as_u64()
                .ok_or_else(|| Error::invalid(format!("{pointer}/{name}"), "expected a nonnegative integer"))
        };
        let ring = || -> Result<RingDescriptor> {
            field("ring")?
                .as_str()
                .ok_or_else(|| Error::invalid(format!("{pointer}/ring"), "expected a ring descriptor"))?
                .parse()
                .map_err(|e: Error| Error::invalid(format!("{pointer}/ring"), e.to_string()))
        };
        let kind = field("kind")?
            .as_str()
            .ok_or_else(|| Error::invalid(format!("{pointer}/kind"), "expected a string"))?;
        Ok(match kind {
            "cp" => Colouring::Cp { p: uint("p")? },
            "m_fpx" => Colouring::MFpx { p: uint("p")? },
            "m_zxy" => Colouring::MZxy {
                p: uint("p")?,
                order: serde_json::from_value(field("order")?.clone())
                    .map_err(|_| Error::invalid(format!("{pointer}/order"), "expected \"xyp\" or \"pxy\""))?,
            },
            "constant" => Colouring::Constant { colour: uint("colour")? },
            "residue" => {
                let ring = ring()?;
                let modulus = scalar_from_json(&ring, field("modulus")?, &format!("{pointer}/modulus"))?;
                residue_colouring(&ring, &modulus)?
            }
            "devissage" => {
                let ring = ring()?;
                let generator = scalar_from_json(&ring, field("generator")?, &format!("{pointer}/generator"))?;
                let sub = Colouring::from_json(field("sub")?, &format!("{pointer}/sub"))?;
                let quotient = Colouring::from_json(field("quotient")?, &format!("{pointer}/quotient"))?;
                devissage(&ring, &generator, uint("offset")?, sub, quotient)?
            }
            other => return Err(Error::invalid(format!("{pointer}/kind"), format!("unknown colouring kind {other:?}"))),
        })
    }

    /// Number of colours used.
    pub fn colours(&self) -> Result<u64> {
        Ok(match self {
            Colouring::Cp { p } | Colouring::MZxy { p, .. } | Colouring::MFpx { p } => *p,
            Colouring::Residue { ring, modulus } => quotient_size(ring, modulus)?,
            Colouring::Constant { .. } => 1,
            Colouring::Devissage { offset, quotient, .. } => offset + quotient.colours()?,
        })
    }

    /// The colour of `x`.
    pub fn colour(&self, x: &Scalar) -> Result<u64> {
        match self {
            Colouring::Cp { p } => match x {
                Scalar::Int(n) => c_p(n, *p),
                Scalar::Rat(q) => c_p_rational(q, *p),
                _ => Err(Error::invalid("", format!("c_{p} colours integers and rationals, not {x}"))),
            },
            Colouring::MZxy { p, order } => m_colouring_zxy(x, *p, *order),
            Colouring::MFpx { p } => m_colouring_fpx(x, *p),
            Colouring::Residue { ring, modulus } => residue_index(ring, modulus, x),
            Colouring::Constant { colour } => Ok(*colour),
            Colouring::Devissage {
                ring,
                generator,
                offset,
                sub,
                quotient,
            } => {
                let class = residue_class(ring, generator, x)?;
                if is_zero_class(&class) {
                    sub.colour(x)
                } else {
                    Ok(offset + quotient.colour(&class)?)
                }
            }
        }
    }
}

fn is_zero_class(s: &Scalar) -> bool {
    match s {
        Scalar::Int(v) => v.is_zero(),
        Scalar::Residue(r) => *r == 0,
        Scalar::Poly(c) => c.is_empty(),
        _ => false,
    }
}

/// `|M / aM|` for the supported modules.
fn quotient_size(ring: &RingDescriptor, a: &Scalar) -> Result<u64> {
    use RingDescriptor::*;
    match (ring, a) {
        (Integers, Scalar::Int(v)) => {
            if v.is_zero() {
                return Err(Error::InfiniteQuotient);
            }
            v.abs()
                .to_u64()
                .ok_or_else(|| Error::BudgetExceeded(format!("{v} colours")))
        }
        (ModRing(n), Scalar::Residue(r)) | (PrimeField(n), Scalar::Residue(r)) => Ok(arith::gcd(*r, *n)),
        (Poly(base), Scalar::Poly(c)) if matches!(**base, PrimeField(_)) && ring.poly_depth() == 1 => {
            let PrimeField(p) = **base else { unreachable!() };
            if c.is_empty() {
                return Err(Error::InfiniteQuotient);
            }
            let deg = (c.len() - 1) as u32;
            p.checked_pow(deg)
                .filter(|&s| s <= 1 << 32)
                .ok_or_else(|| Error::BudgetExceeded(format!("{p}^{deg} colours")))
        }
        _ => Err(Error::UnsupportedRing(format!("residue colouring over {ring}"))),
    }
}

/// The canonical representative of `x + aM`: `x mod |a|` over `Z`,
/// `x mod gcd(a, n)` over `Z/n` (as an element of `Z/gcd(a, n)`), and the
/// remainder on division by `a` over `F_p[x]`.
pub fn residue_class(ring: &RingDescriptor, a: &Scalar, x: &Scalar) -> Result<Scalar> {
    use RingDescriptor::*;
    if !ring.contains(x) {
        return Err(Error::invalid("", format!("{x} is not an element of {ring}")));
    }
    let size = quotient_size(ring, a)?;
    match (ring, x) {
        (Integers, Scalar::Int(v)) => Ok(Scalar::Int(v.mod_floor(&BigInt::from(size)))),
        (ModRing(_) | PrimeField(_), Scalar::Residue(r)) => Ok(Scalar::Residue(r % size)),
        (Poly(base), Scalar::Poly(f)) => {
            let Scalar::Poly(g) = a else { unreachable!() };
            Ok(Scalar::Poly(poly::divrem(base, f, g).1))
        }
        _ => Err(Error::UnsupportedRing(format!("residue colouring over {ring}"))),
    }
}

fn residue_index(ring: &RingDescriptor, a: &Scalar, x: &Scalar) -> Result<u64> {
    Ok(match residue_class(ring, a, x)? {
        Scalar::Int(v) => v.to_u64().expect("below the modulus"),
        Scalar::Residue(r) => r,
        Scalar::Poly(c) => {
            let RingDescriptor::Poly(base) = ring else { unreachable!() };
            let RingDescriptor::PrimeField(p) = **base else { unreachable!() };
            c.iter().rev().fold(0, |acc, d| match d {
                Scalar::Residue(r) => acc * p + r,
                _ => unreachable!(),
            })
        }
        _ => unreachable!(),
    })
}

/// The colouring of `M` by classes of `M / aM`. Under it, `sum a_i x_i = b`
/// with `a = sum a_i` has no monochromatic solution whenever `b` is not in
/// `aM`, since a monochromatic solution reduces to `a r = b` in `M / aM`.
pub fn residue_colouring(ring: &RingDescriptor, a: &Scalar) -> Result<Colouring> {
    if !ring.contains(a) {
        return Err(Error::invalid("/a", format!("{a} is not an element of {ring}")));
    }
    quotient_size(ring, a)?;
    Ok(Colouring::Residue {
        ring: ring.clone(),
        modulus: a.clone(),
    })
}

/// The serialisable dévissage colouring for the submodule `aM`: elements of
/// `aM` get `sub`, the rest get `r` plus the `quotient` colour of their class.
pub fn devissage(ring: &RingDescriptor, a: &Scalar, r: u64, sub: Colouring, quotient: Colouring) -> Result<Colouring> {
    quotient_size(ring, a)?;
    Ok(Colouring::Devissage {
        ring: ring.clone(),
        generator: a.clone(),
        offset: r,
        sub: Box::new(sub),
        quotient: Box::new(quotient),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use RingDescriptor::*;

    fn z(v: i64) -> Scalar {
        Scalar::Int(v.into())
    }

    #[test]
    fn residue_colourings() {
        let chi = residue_colouring(&Integers, &z(4)).unwrap();
        assert_eq!(chi.colours().unwrap(), 4);
        assert_eq!(chi.colour(&z(-1)).unwrap(), 3);
        assert!(matches!(residue_colouring(&Integers, &z(0)), Err(Error::InfiniteQuotient)));
        let fx = RingDescriptor::poly(PrimeField(2));
        let x = fx.from_i64(0);
        let x = fx.add(&x, &Scalar::Poly(vec![Scalar::Residue(0), Scalar::Residue(1)]));
        let chi = residue_colouring(&fx, &x).unwrap();
        assert_eq!(chi.colours().unwrap(), 2);
        let one_plus_x = fx.add(&x, &fx.one());
        assert_eq!(chi.colour(&one_plus_x).unwrap(), 1);
        assert_eq!(chi.colour(&x).unwrap(), 0);
        let chi = residue_colouring(&ModRing(12), &Scalar::Residue(8)).unwrap();
        assert_eq!(chi.colours().unwrap(), 4);
    }

    #[test]
    fn devissage_over_even_integers() {
        let chi = devissage(&Integers, &z(2), 3, Colouring::Cp { p: 3 }, Colouring::Constant { colour: 1 }).unwrap();
        assert_eq!(chi.colour(&z(6)).unwrap(), 2);
        assert_eq!(chi.colour(&z(7)).unwrap(), 4);
        assert_eq!(chi.colours().unwrap(), 4);
    }

    #[test]
    fn json_round_trip() {
        let chi = devissage(&Integers, &z(2), 3, Colouring::Cp { p: 3 }, Colouring::Constant { colour: 1 }).unwrap();
        let text = serde_json::to_string(&chi).unwrap();
        assert!(text.contains("\"kind\":\"devissage\""));
        let back = Colouring::from_json(&serde_json::from_str(&text).unwrap(), "").unwrap();
        assert_eq!(back, chi);
        let chi = residue_colouring(&RingDescriptor::poly(PrimeField(3)), &Scalar::Poly(vec![Scalar::Residue(1), Scalar::Residue(2)])).unwrap();
        let back = Colouring::from_json(&serde_json::to_value(&chi).unwrap(), "").unwrap();
        assert_eq!(back, chi);
        let err = Colouring::from_json(&serde_json::json!({"kind": "cp"}), "/colouring").unwrap_err();
        assert_eq!(err, Error::invalid("/colouring/p", "missing field"));
    }
}
