use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly;
use crate::arith;
use crate::error::{Error, Result};

/// How many coordinates of a product ring carry the same component value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Multiplicity {
    Finite(u64),
    Infinite,
}

impl Multiplicity {
    pub fn is_infinite(self) -> bool {
        matches!(self, Multiplicity::Infinite)
    }
}

impl fmt::Display for Multiplicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Multiplicity::Finite(k) => write!(f, "{k}"),
            Multiplicity::Infinite => write!(f, "inf"),
        }
    }
}

/// The coefficient rings supported by the library.
///
/// A `ProductMod` ring is `prod_{i in I} Z/nZ`, where the index set is split
/// into blocks and every element is constant on each block. Each block
/// records how many indices it covers.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RingDescriptor {
    Integers,
    Rationals,
    PrimeField(u64),
    ModRing(u64),
    Poly(Box<RingDescriptor>),
    /// Univariate rational functions over `Rationals` or `PrimeField`.
    RationalFunctions(Box<RingDescriptor>),
    ProductMod { n: u64, blocks: Vec<Multiplicity> },
}

/// An element of some [`RingDescriptor`], always in canonical form so that
/// structural equality is ring equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Int(BigInt),
    Rat(BigRational),
    Residue(u64),
    /// Ascending coefficients, no trailing zeros.
    Poly(Vec<Scalar>),
    /// Reduced numerator and monic denominator.
    Frac(Vec<Scalar>, Vec<Scalar>),
    Product(Vec<u64>),
}

use RingDescriptor::*;

impl RingDescriptor {
    pub fn poly(base: RingDescriptor) -> Self {
        Poly(Box::new(base))
    }

    pub fn product(n: u64, blocks: Vec<Multiplicity>) -> Self {
        ProductMod { n, blocks }
    }

    /// `prod_{i in N} Z/nZ` with a single infinite block.
    pub fn infinite_product(n: u64) -> Self {
        ProductMod {
            n,
            blocks: vec![Multiplicity::Infinite],
        }
    }

    /// Check the structural constraints on the descriptor.
    pub fn validate(&self) -> Result<()> {
        match self {
            Integers | Rationals => Ok(()),
            PrimeField(p) => {
                if arith::is_prime(*p) {
                    Ok(())
                } else {
                    Err(Error::NotPrime(*p))
                }
            }
            ModRing(n) => {
                if *n < 2 {
                    Err(Error::invalid("/ring", format!("modulus {n} must be at least 2")))
                } else if *n > u32::MAX as u64 {
                    Err(Error::UnsupportedRing(format!("modulus {n} out of range")))
                } else {
                    Ok(())
                }
            }
            Poly(base) => {
                if self.poly_depth() > 2 {
                    return Err(Error::UnsupportedRing("polynomial depth above 2".into()));
                }
                match base.base_ring() {
                    RationalFunctions(_) | ProductMod { .. } => Err(Error::UnsupportedRing(
                        format!("polynomials over {base}"),
                    )),
                    _ => base.validate(),
                }
            }
            RationalFunctions(base) => match **base {
                Rationals | PrimeField(_) => base.validate(),
                _ => Err(Error::UnsupportedRing(format!("rational functions over {base}"))),
            },
            ProductMod { n, blocks } => {
                ModRing(*n).validate()?;
                if blocks.is_empty() || blocks.contains(&Multiplicity::Finite(0)) {
                    return Err(Error::UnsupportedRing("empty product block".into()));
                }
                Ok(())
            }
        }
    }

    /// Number of polynomial variables stacked on the base ring.
    pub fn poly_depth(&self) -> usize {
        match self {
            Poly(b) => 1 + b.poly_depth(),
            _ => 0,
        }
    }

    /// The ring below all polynomial layers.
    pub fn base_ring(&self) -> &RingDescriptor {
        match self {
            Poly(b) => b.base_ring(),
            other => other,
        }
    }

    pub fn is_field(&self) -> bool {
        match self {
            Rationals | PrimeField(_) | RationalFunctions(_) => true,
            ModRing(n) => arith::is_prime(*n),
            _ => false,
        }
    }

    pub fn is_domain(&self) -> bool {
        match self {
            Integers => true,
            Poly(b) => b.is_domain(),
            ProductMod { .. } => false,
            other => other.is_field(),
        }
    }

    pub fn is_finite(&self) -> bool {
        match self {
            PrimeField(_) | ModRing(_) => true,
            ProductMod { blocks, .. } => blocks.iter().all(|b| !b.is_infinite()),
            _ => false,
        }
    }

    /// For `PrimeField(p)`, `ModRing(n)` and `ProductMod`, the modulus.
    pub fn modulus(&self) -> Option<u64> {
        match self {
            PrimeField(m) | ModRing(m) | ProductMod { n: m, .. } => Some(*m),
            _ => None,
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            Integers => Scalar::Int(BigInt::zero()),
            Rationals => Scalar::Rat(BigRational::zero()),
            PrimeField(_) | ModRing(_) => Scalar::Residue(0),
            Poly(_) => Scalar::Poly(Vec::new()),
            RationalFunctions(b) => Scalar::Frac(Vec::new(), vec![b.one()]),
            ProductMod { blocks, .. } => Scalar::Product(vec![0; blocks.len()]),
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        self.from_bigint(&BigInt::from(v))
    }

    /// Image of an integer under the canonical map `Z -> R`.
    pub fn from_bigint(&self, v: &BigInt) -> Scalar {
        match self {
            Integers => Scalar::Int(v.clone()),
            Rationals => Scalar::Rat(BigRational::from_integer(v.clone())),
            PrimeField(m) | ModRing(m) => Scalar::Residue(reduce_bigint(v, *m)),
            Poly(b) => Scalar::Poly(poly::trim(b, vec![b.from_bigint(v)])),
            RationalFunctions(b) => {
                Scalar::Frac(poly::trim(b, vec![b.from_bigint(v)]), vec![b.one()])
            }
            ProductMod { n, blocks } => Scalar::Product(vec![reduce_bigint(v, *n); blocks.len()]),
        }
    }

    /// Whether `s` is a well-formed canonical element of this ring.
    pub fn contains(&self, s: &Scalar) -> bool {
        match (self, s) {
            (Integers, Scalar::Int(_)) | (Rationals, Scalar::Rat(_)) => true,
            (PrimeField(m) | ModRing(m), Scalar::Residue(r)) => r < m,
            (Poly(b), Scalar::Poly(c)) => {
                c.iter().all(|x| b.contains(x)) && c.last().is_none_or(|x| !b.is_zero(x))
            }
            (RationalFunctions(b), Scalar::Frac(num, den)) => {
                let ok = num.iter().chain(den).all(|x| b.contains(x))
                    && num.last().is_none_or(|x| !b.is_zero(x))
                    && den.last().is_some_and(|x| b.is_one(x));
                ok && {
                    let canon = poly::frac_canonical(b, num.clone(), den.clone());
                    canon == (num.clone(), den.clone())
                }
            }
            (ProductMod { n, blocks }, Scalar::Product(v)) => {
                v.len() == blocks.len() && v.iter().all(|x| x < n)
            }
            _ => false,
        }
    }

    pub fn is_zero(&self, s: &Scalar) -> bool {
        match s {
            Scalar::Int(x) => x.is_zero(),
            Scalar::Rat(x) => x.is_zero(),
            Scalar::Residue(x) => *x == 0,
            Scalar::Poly(c) => c.is_empty(),
            Scalar::Frac(num, _) => num.is_empty(),
            Scalar::Product(v) => v.iter().all(|x| *x == 0),
        }
    }

    pub fn is_one(&self, s: &Scalar) -> bool {
        *s == self.one()
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (Integers, Scalar::Int(x), Scalar::Int(y)) => Scalar::Int(x + y),
            (Rationals, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x + y),
            (PrimeField(m) | ModRing(m), Scalar::Residue(x), Scalar::Residue(y)) => {
                Scalar::Residue(arith::add_mod(*x, *y, *m))
            }
            (Poly(r), Scalar::Poly(x), Scalar::Poly(y)) => Scalar::Poly(poly::add(r, x, y)),
            (RationalFunctions(r), Scalar::Frac(n1, d1), Scalar::Frac(n2, d2)) => {
                let num = poly::add(r, &poly::mul(r, n1, d2), &poly::mul(r, n2, d1));
                let (n, d) = poly::frac_canonical(r, num, poly::mul(r, d1, d2));
                Scalar::Frac(n, d)
            }
            (ProductMod { n, .. }, Scalar::Product(x), Scalar::Product(y)) => Scalar::Product(
                x.iter().zip(y).map(|(a, b)| arith::add_mod(*a, *b, *n)).collect(),
            ),
            _ => mismatch(self, a, b),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (Integers, Scalar::Int(x)) => Scalar::Int(-x),
            (Rationals, Scalar::Rat(x)) => Scalar::Rat(-x),
            (PrimeField(m) | ModRing(m), Scalar::Residue(x)) => {
                Scalar::Residue(arith::sub_mod(0, *x, *m))
            }
            (Poly(r), Scalar::Poly(x)) => Scalar::Poly(poly::neg(r, x)),
            (RationalFunctions(r), Scalar::Frac(n, d)) => Scalar::Frac(poly::neg(r, n), d.clone()),
            (ProductMod { n, .. }, Scalar::Product(x)) => {
                Scalar::Product(x.iter().map(|a| arith::sub_mod(0, *a, *n)).collect())
            }
            _ => mismatch(self, a, a),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (Integers, Scalar::Int(x), Scalar::Int(y)) => Scalar::Int(x * y),
            (Rationals, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x * y),
            (PrimeField(m) | ModRing(m), Scalar::Residue(x), Scalar::Residue(y)) => {
                Scalar::Residue(arith::mul_mod(*x, *y, *m))
            }
            (Poly(r), Scalar::Poly(x), Scalar::Poly(y)) => Scalar::Poly(poly::mul(r, x, y)),
            (RationalFunctions(r), Scalar::Frac(n1, d1), Scalar::Frac(n2, d2)) => {
                let (n, d) = poly::frac_canonical(r, poly::mul(r, n1, n2), poly::mul(r, d1, d2));
                Scalar::Frac(n, d)
            }
            (ProductMod { n, .. }, Scalar::Product(x), Scalar::Product(y)) => Scalar::Product(
                x.iter().zip(y).map(|(a, b)| arith::mul_mod(*a, *b, *n)).collect(),
            ),
            _ => mismatch(self, a, b),
        }
    }

    pub fn pow(&self, a: &Scalar, mut e: u32) -> Scalar {
        let mut acc = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse of a unit. Over polynomial rings only constant
    /// units of the base are recognised.
    pub fn inv(&self, a: &Scalar) -> Option<Scalar> {
        match (self, a) {
            (Integers, Scalar::Int(x)) => {
                (x.abs() == BigInt::one()).then(|| Scalar::Int(x.clone()))
            }
            (Rationals, Scalar::Rat(x)) => (!x.is_zero()).then(|| Scalar::Rat(x.recip())),
            (PrimeField(m) | ModRing(m), Scalar::Residue(x)) => {
                arith::inv_mod(*x, *m).map(Scalar::Residue)
            }
            (Poly(r), Scalar::Poly(c)) => match c.as_slice() {
                [c0] => r.inv(c0).map(|i| Scalar::Poly(vec![i])),
                _ => None,
            },
            (RationalFunctions(r), Scalar::Frac(n, d)) => {
                if n.is_empty() {
                    return None;
                }
                let (n, d) = poly::frac_canonical(r, d.clone(), n.clone());
                Some(Scalar::Frac(n, d))
            }
            (ProductMod { n, .. }, Scalar::Product(x)) => x
                .iter()
                .map(|v| arith::inv_mod(*v, *n))
                .collect::<Option<Vec<_>>>()
                .map(Scalar::Product),
            _ => None,
        }
    }

    /// `a / b` in a field. Panics if `b` is zero or the ring is not a field.
    pub fn div(&self, a: &Scalar, b: &Scalar) -> Scalar {
        let inv = self.inv(b).expect("division by a non-unit");
        self.mul(a, &inv)
    }

    pub fn sum<'a>(&self, items: impl IntoIterator<Item = &'a Scalar>) -> Scalar {
        items
            .into_iter()
            .fold(self.zero(), |acc, x| self.add(&acc, x))
    }

    /// Number of elements, if finite and small enough to count.
    pub fn cardinality(&self) -> Option<u128> {
        match self {
            PrimeField(m) | ModRing(m) => Some(*m as u128),
            ProductMod { n, blocks } => {
                let mut total: u128 = 1;
                for b in blocks {
                    match b {
                        Multiplicity::Finite(k) => {
                            total = total.checked_mul((*n as u128).checked_pow(*k as u32)?)?
                        }
                        Multiplicity::Infinite => return None,
                    }
                }
                Some(total)
            }
            _ => None,
        }
    }
}

fn mismatch(ring: &RingDescriptor, a: &Scalar, b: &Scalar) -> ! {
    panic!("scalars {a:?} and {b:?} do not belong to {ring}")
}

/// `v mod m` as a canonical residue.
pub fn reduce_bigint(v: &BigInt, m: u64) -> u64 {
    v.mod_floor(&BigInt::from(m)).to_u64().expect("residue fits")
}

impl fmt::Display for RingDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Integers => write!(f, "Z"),
            Rationals => write!(f, "Q"),
            PrimeField(p) => write!(f, "gf:{p}"),
            ModRing(n) => write!(f, "mod:{n}"),
            Poly(b) => match &**b {
                Poly(bb) => write!(f, "{bb}[x,y]"),
                other => write!(f, "{other}[x]"),
            },
            RationalFunctions(b) => write!(f, "{b}(x)"),
            ProductMod { n, blocks } => {
                if blocks == &[Multiplicity::Infinite] {
                    write!(f, "prod:{n}")
                } else {
                    let parts: Vec<String> = blocks.iter().map(|b| b.to_string()).collect();
                    write!(f, "prod:{n}:{}", parts.join(","))
                }
            }
        }
    }
}

impl FromStr for RingDescriptor {
    type Err = Error;

    /// Parses `Z`, `Q`, `gf:p`, `mod:n`, `prod:n`, `prod:n:inf,3`, with
    /// optional suffixes `[x]`, `[x,y]` (polynomials) or `(x)` (rational
    /// functions).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::invalid("", format!("cannot parse ring descriptor {s:?}"));
        let ring = if let Some(base) = s.strip_suffix("[x,y]") {
            Self::poly(Self::poly(base.parse()?))
        } else if let Some(base) = s.strip_suffix("[x]") {
            Self::poly(base.parse()?)
        } else if let Some(base) = s.strip_suffix("(x)") {
            RationalFunctions(Box::new(base.parse()?))
        } else if s == "Z" || s == "ZZ" {
            Integers
        } else if s == "Q" || s == "QQ" {
            Rationals
        } else if let Some(p) = s.strip_prefix("gf:") {
            PrimeField(p.parse().map_err(|_| bad())?)
        } else if let Some(n) = s.strip_prefix("mod:") {
            ModRing(n.parse().map_err(|_| bad())?)
        } else if let Some(rest) = s.strip_prefix("prod:") {
            let mut parts = rest.splitn(2, ':');
            let n = parts.next().unwrap().parse().map_err(|_| bad())?;
            let blocks = match parts.next() {
                None => vec![Multiplicity::Infinite],
                Some(list) => list
                    .split(',')
                    .map(|b| match b.trim() {
                        "inf" => Ok(Multiplicity::Infinite),
                        k => k.parse().map(Multiplicity::Finite).map_err(|_| bad()),
                    })
                    .collect::<Result<Vec<_>>>()?,
            };
            ProductMod { n, blocks }
        } else {
            return Err(bad());
        };
        ring.validate()?;
        Ok(ring)
    }
}

impl serde::Serialize for RingDescriptor {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for RingDescriptor {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Int(x) => write!(f, "{x}"),
            Scalar::Rat(x) => write!(f, "{x}"),
            Scalar::Residue(x) => write!(f, "{x}"),
            Scalar::Poly(c) => write!(f, "{}", poly::render(c)),
            Scalar::Frac(n, d) => write!(f, "({})/({})", poly::render(n), poly::render(d)),
            Scalar::Product(v) => write!(f, "{v:?}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn descriptors_round_trip_through_strings() {
        for s in [
            "Z", "Q", "gf:7", "mod:4", "mod:4[x]", "Z[x,y]", "gf:2[x]", "Q(x)", "gf:3(x)",
            "prod:12", "prod:4:inf,3",
        ] {
            let r: RingDescriptor = s.parse().unwrap();
            assert_eq!(r.to_string(), s);
        }
        assert!("gf:6".parse::<RingDescriptor>().is_err());
        assert!("Z[x,y][x]".parse::<RingDescriptor>().is_err());
        assert!("prod:4:0".parse::<RingDescriptor>().is_err());
    }

    #[test]
    fn residues_wrap() {
        let r = ModRing(4);
        assert_eq!(r.from_i64(-1), Scalar::Residue(3));
        assert_eq!(r.mul(&Scalar::Residue(2), &Scalar::Residue(2)), r.zero());
        assert_eq!(r.inv(&Scalar::Residue(2)), None);
        assert_eq!(r.inv(&Scalar::Residue(3)), Some(Scalar::Residue(3)));
    }

    #[test]
    fn polynomial_products_trim_zero_divisors() {
        let r = RingDescriptor::poly(ModRing(4));
        let two_x = Scalar::Poly(vec![Scalar::Residue(0), Scalar::Residue(2)]);
        let two = r.from_i64(2);
        assert!(r.is_zero(&r.mul(&two_x, &two)));
        assert!(r.contains(&two_x));
        assert!(!r.contains(&Scalar::Poly(vec![Scalar::Residue(1), Scalar::Residue(0)])));
    }

    #[test]
    fn classification() {
        assert!(ModRing(7).is_field());
        assert!(!ModRing(4).is_domain());
        assert!(RingDescriptor::poly(PrimeField(3)).is_domain());
        assert!(!RingDescriptor::poly(ModRing(9)).is_domain());
        assert!(RingDescriptor::product(4, vec![Multiplicity::Finite(3)]).is_finite());
        assert!(!RingDescriptor::infinite_product(4).is_finite());
    }
}
