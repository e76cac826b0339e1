use super::ring::{RingDescriptor, Scalar};
use crate::arith;
use crate::error::{Error, Result};

/// gcd of `n` with every coefficient of a (possibly nested) polynomial
/// over `Z/nZ`.
pub(crate) fn content_gcd(s: &Scalar, n: u64) -> u64 {
    match s {
        Scalar::Residue(r) => arith::gcd(*r, n),
        Scalar::Poly(c) => c.iter().fold(n, |g, x| arith::gcd(g, content_gcd(x, n))),
        _ => n,
    }
}

/// Whether `ann_R(b) = {r : r b = 0}` is an infinite set.
///
/// Over a polynomial ring with coefficients in `Z/nZ`, `b` has a nonzero
/// annihilator iff some nonzero constant kills it (every coefficient shares
/// a factor with `n`), and a nonzero annihilator `a` gives the infinite
/// family `a, a x, a x^2, ...`.
pub fn annihilator_infinite(b: &Scalar, ring: &RingDescriptor) -> Result<bool> {
    use RingDescriptor::*;
    if !ring.contains(b) {
        return Err(Error::invalid("", format!("{b} is not an element of {ring}")));
    }
    if ring.is_domain() {
        return Ok(ring.is_zero(b) && !ring.is_finite());
    }
    match ring {
        ModRing(_) => Ok(false),
        Poly(_) => match ring.base_ring() {
            ModRing(n) => Ok(content_gcd(b, *n) > 1),
            other => Err(Error::UnsupportedRing(format!("polynomials over {other}"))),
        },
        ProductMod { n, blocks } => {
            let Scalar::Product(values) = b else { unreachable!() };
            Ok(values
                .iter()
                .zip(blocks)
                .any(|(v, m)| m.is_infinite() && arith::gcd(*v, *n) > 1))
        }
        other => Err(Error::UnsupportedRing(other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Multiplicity;
    use RingDescriptor::*;

    #[test]
    fn documented_cases() {
        for p in [2u64, 3, 5] {
            let r = RingDescriptor::poly(ModRing(p * p));
            assert!(annihilator_infinite(&r.from_i64(p as i64), &r).unwrap());
            assert!(!annihilator_infinite(&r.from_i64(1), &r).unwrap());
        }
        assert!(!annihilator_infinite(&Integers.from_i64(1), &Integers).unwrap());
        assert!(annihilator_infinite(&Integers.zero(), &Integers).unwrap());
        assert!(!annihilator_infinite(&Scalar::Residue(2), &ModRing(4)).unwrap());
        assert!(!annihilator_infinite(&Scalar::Residue(0), &PrimeField(5)).unwrap());
    }

    #[test]
    fn products_need_an_infinite_zero_divisor_block() {
        let r = RingDescriptor::product(6, vec![Multiplicity::Finite(4), Multiplicity::Infinite]);
        assert!(!annihilator_infinite(&Scalar::Product(vec![2, 1]), &r).unwrap());
        assert!(annihilator_infinite(&Scalar::Product(vec![1, 3]), &r).unwrap());
    }

    #[test]
    fn brute_force_over_z_mod_n_polynomials() {
        // ann(b) != 0 in (Z/n)[x] iff some constant kills b: check against
        // annihilators of degree <= 1 found by enumeration.
        for n in [4u64, 6, 9] {
            let r = RingDescriptor::poly(ModRing(n));
            for b0 in 0..n {
                for b1 in 0..n {
                    let b = Scalar::Poly(super::super::poly::trim(
                        &ModRing(n),
                        vec![Scalar::Residue(b0), Scalar::Residue(b1)],
                    ));
                    let brute = (0..n).any(|a0| {
                        (0..n).any(|a1| {
                            (a0, a1) != (0, 0) && {
                                let a = Scalar::Poly(super::super::poly::trim(
                                    &ModRing(n),
                                    vec![Scalar::Residue(a0), Scalar::Residue(a1)],
                                ));
                                r.is_zero(&r.mul(&a, &b))
                            }
                        })
                    });
                    assert_eq!(annihilator_infinite(&b, &r).unwrap(), brute, "n={n} b={b}");
                }
            }
        }
    }
}
