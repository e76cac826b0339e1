use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::Scalar;
use crate::arith;
use crate::error::{Error, Result};

fn require_prime(p: u64) -> Result<()> {
    if arith::is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

/// Split off the largest power of `p`: returns `(k, u)` with `n = p^k u`.
fn strip(n: &BigInt, p: u64) -> (u32, BigInt) {
    let bp = BigInt::from(p);
    let mut u = n.clone();
    let mut k = 0;
    while !u.is_zero() && (&u % &bp).is_zero() {
        u /= &bp;
        k += 1;
    }
    (k, u)
}

fn p_valuation(n: &BigInt, p: u64) -> u32 {
    strip(n, p).0
}

fn unit_digit(u: &BigInt, p: u64) -> u64 {
    u.mod_floor(&BigInt::from(p)).to_u64().expect("residue below p")
}

/// The least significant nonzero base-`p` digit of `n`, i.e. `j` with
/// `n = p^k (p m + j)` and `0 < j < p`; zero maps to 0.
pub fn c_p(n: &BigInt, p: u64) -> Result<u64> {
    require_prime(p)?;
    if n.is_zero() {
        return Ok(0);
    }
    Ok(unit_digit(&strip(n, p).1, p))
}

/// `c_p` on the rationals: `p^k u / v` with `p` coprime to `uv` maps to
/// `u v^(-1) mod p`. Agrees with [`c_p`] on integers.
pub fn c_p_rational(q: &BigRational, p: u64) -> Result<u64> {
    require_prime(p)?;
    if q.is_zero() {
        return Ok(0);
    }
    let u = unit_digit(&strip(q.numer(), p).1, p);
    let v = unit_digit(&strip(q.denom(), p).1, p);
    Ok(arith::mul_mod(u, arith::inv_mod(v, p).expect("unit"), p))
}

/// Generator order for the closed-form colourings of `Z[x, y]` at the
/// maximal ideal `(p, x, y)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MOrder {
    /// Generators `x, y, p`: lex-least nonzero coefficient position.
    Xyp,
    /// Generators `p, x, y`: lex-least position among coefficients of
    /// minimal `p`-adic valuation.
    Pxy,
}

/// Coefficients `f_ij` of `f = sum f_ij x^i y^j` from the nested
/// representation: outer index `i` (power of `x`), inner index `j`.
pub fn zxy_coefficients(f: &Scalar) -> Result<Vec<((usize, usize), BigInt)>> {
    let bad = || Error::invalid("", format!("{f} is not an element of Z[x,y]"));
    let mut out = Vec::new();
    match f {
        Scalar::Int(c) => {
            if !c.is_zero() {
                out.push(((0, 0), c.clone()));
            }
        }
        Scalar::Poly(outer) => {
            for (i, inner) in outer.iter().enumerate() {
                match inner {
                    Scalar::Poly(cs) => {
                        for (j, c) in cs.iter().enumerate() {
                            match c {
                                Scalar::Int(c) if !c.is_zero() => out.push(((i, j), c.clone())),
                                Scalar::Int(_) => {}
                                _ => return Err(bad()),
                            }
                        }
                    }
                    _ => return Err(bad()),
                }
            }
        }
        _ => return Err(bad()),
    }
    Ok(out)
}

/// The closed-form colouring of `Z[x, y]` attached to `(p, x, y)`.
pub fn m_colouring_zxy(f: &Scalar, p: u64, order: MOrder) -> Result<u64> {
    require_prime(p)?;
    let coeffs = zxy_coefficients(f)?;
    let chosen = match order {
        MOrder::Xyp => coeffs.iter().min_by_key(|(pos, _)| *pos),
        MOrder::Pxy => coeffs.iter().min_by_key(|(pos, c)| (p_valuation(c, p), *pos)),
    };
    match chosen {
        None => Ok(0),
        Some((_, c)) => c_p(c, p),
    }
}

/// The colouring of `F_p[x]` attached to `(x)`: the lowest nonzero
/// coefficient; zero maps to 0.
pub fn m_colouring_fpx(f: &Scalar, p: u64) -> Result<u64> {
    require_prime(p)?;
    match f {
        Scalar::Residue(r) => Ok(r % p),
        Scalar::Poly(c) => Ok(c
            .iter()
            .find_map(|x| match x {
                Scalar::Residue(r) if r % p != 0 => Some(r % p),
                _ => None,
            })
            .unwrap_or(0)),
        _ => Err(Error::invalid("", format!("{f} is not an element of F_{p}[x]"))),
    }
}

/// Combine a colouring of a submodule `N` (with `r` colours) and one of the
/// quotient `M / N` into a colouring of `M`: members of `N` keep their
/// colour, everything else is offset by `r`.
pub fn devissage_combine<'a, T, Q>(
    chi_n: impl Fn(&T) -> u64 + 'a,
    r: u64,
    chi_q: impl Fn(&Q) -> u64 + 'a,
    member: impl Fn(&T) -> bool + 'a,
    quotient: impl Fn(&T) -> Q + 'a,
) -> impl Fn(&T) -> u64 + 'a {
    move |m| {
        if member(m) {
            chi_n(m)
        } else {
            r + chi_q(&quotient(m))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn zxy(rows: &[&[i64]]) -> Scalar {
        Scalar::Poly(
            rows.iter()
                .map(|r| Scalar::Poly(r.iter().map(|&c| Scalar::Int(z(c))).collect()))
                .collect(),
        )
    }

    #[test]
    fn digits() {
        assert_eq!(c_p(&z(5), 3).unwrap(), 2);
        assert_eq!(c_p(&z(50), 5).unwrap(), 2);
        assert_eq!(c_p(&z(0), 7).unwrap(), 0);
        assert_eq!(c_p(&z(-1), 3).unwrap(), 2);
        assert!(matches!(c_p(&z(5), 4), Err(Error::NotPrime(4))));
        let q = BigRational::new(z(10), z(3));
        // 10/3 = 5 * 2/3 and 2 * 3^(-1) = 2 * 2 = 4 mod 5.
        assert_eq!(c_p_rational(&q, 5).unwrap(), 4);
        assert_eq!(c_p_rational(&BigRational::from(z(50)), 5).unwrap(), 2);
    }

    #[test]
    fn polynomial_colourings() {
        // f = 4 + 2y + x.
        let f = zxy(&[&[4, 2], &[1]]);
        assert_eq!(m_colouring_zxy(&f, 2, MOrder::Xyp).unwrap(), 1);
        assert_eq!(m_colouring_zxy(&f, 2, MOrder::Pxy).unwrap(), 1);
        let g = zxy(&[&[6, 2], &[4]]);
        // Xyp picks 6 -> c_2(6) = 1; Pxy: valuations 1, 1, 2 -> 6 at (0, 0).
        assert_eq!(m_colouring_zxy(&g, 2, MOrder::Xyp).unwrap(), 1);
        let h = zxy(&[&[9, 6], &[5]]);
        // Pxy over p = 3: the unit coefficient 5 at (1, 0) -> c_3(5) = 2.
        assert_eq!(m_colouring_zxy(&h, 3, MOrder::Pxy).unwrap(), 2);
        assert_eq!(m_colouring_zxy(&h, 3, MOrder::Xyp).unwrap(), 1);
        assert_eq!(m_colouring_zxy(&Scalar::Poly(vec![]), 2, MOrder::Xyp).unwrap(), 0);
        let f = Scalar::Poly(vec![Scalar::Residue(0), Scalar::Residue(0), Scalar::Residue(3)]);
        assert_eq!(m_colouring_fpx(&f, 5).unwrap(), 3);
    }

    #[test]
    fn devissage_branches() {
        let chi = devissage_combine(
            |m: &BigInt| c_p(m, 3).unwrap(),
            3,
            |_: &u64| 1,
            |m: &BigInt| m.is_even(),
            |m: &BigInt| m.mod_floor(&z(2)).to_u64().unwrap(),
        );
        assert_eq!(chi(&z(6)), c_p(&z(6), 3).unwrap());
        assert_eq!(chi(&z(7)), 4);
    }
}
