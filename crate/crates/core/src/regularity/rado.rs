use num_bigint::BigInt;
use serde::Serialize;

use super::witness::PartitionWitness;
use crate::algebra::{Matrix, RingDescriptor, Scalar};
use crate::arith;
use crate::error::{Error, Result};

/// The 3x3 matrix `[[1, 1, -1], [0, b, 0], [0, 0, b]]` over the ring of `b`.
pub fn build_b3(ring: &RingDescriptor, b: &Scalar) -> Result<Matrix> {
    if !ring.contains(b) {
        return Err(Error::invalid("/b", format!("{b} is not an element of {ring}")));
    }
    let (z, one) = (ring.zero(), ring.one());
    Matrix::new(
        ring.clone(),
        vec![
            vec![one.clone(), one, ring.from_i64(-1)],
            vec![z.clone(), b.clone(), z.clone()],
            vec![z.clone(), z, b.clone()],
        ],
    )
}

/// The integer 2x3 matrix `[[1, p - 1, 2], [0, 0, p]]` for a prime `p >= 5`.
pub fn build_b2(p: u64) -> Result<Matrix> {
    if !arith::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p < 5 {
        return Err(Error::PrimeTooSmall(p));
    }
    let p = p as i64;
    Matrix::from_i64(RingDescriptor::Integers, &[vec![1, p - 1, 2], vec![0, 0, p]])
}

/// Evidence for partition regularity over the finite Z-module `Z/nZ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModuleEvidence {
    /// A prime `p | n` with all columns summing to zero mod `p`.
    pub prime: u64,
    /// The constant solution `x_1 = ... = x_l = n / p`.
    pub constant: u64,
    pub witness: PartitionWitness,
}

/// Partition regularity of an integer matrix over the finite Z-module
/// `Z/nZ`. A colouring with every element distinct forces a constant
/// solution, so this holds iff the column sum vanishes mod some `p | n`.
pub fn pr_module_mod_n(a: &Matrix, n: u64) -> Result<Option<ModuleEvidence>> {
    RingDescriptor::ModRing(n).validate()?;
    let rows = a
        .integer_rows()
        .ok_or_else(|| Error::UnsupportedRing(format!("expected an integer matrix, got {}", a.ring())))?;
    let sums: Vec<BigInt> = rows.iter().map(|r| r.iter().sum()).collect();
    for p in arith::prime_divisors(n) {
        let bp = BigInt::from(p);
        if sums.iter().all(|s| (s % &bp) == BigInt::from(0)) {
            return Ok(Some(ModuleEvidence {
                prime: p,
                constant: n / p,
                witness: PartitionWitness {
                    m: 0,
                    blocks: vec![(0..a.ncols()).collect()],
                    multipliers: None,
                    combinations: vec![],
                },
            }));
        }
    }
    Ok(None)
}

/// Whether partition regularity coincides with the generalised columns
/// condition for every matrix over `ring`.
///
/// An associated prime `P` is harmless when `R/P` is a finite field or
/// `R_P` is a field. Domains have only `P = 0`. For `Z/nZ` every associated
/// prime has a finite residue field. For `(Z/n)[x]` and for infinite
/// products of `Z/nZ`, the primes over `p | n` have infinite quotients and
/// the localisation is a field exactly when `p^2` does not divide `n`.
pub fn rado_ring_check(ring: &RingDescriptor) -> Result<bool> {
    use RingDescriptor::*;
    ring.validate()?;
    if ring.is_domain() {
        return Ok(true);
    }
    match ring {
        ModRing(_) => Ok(true),
        Poly(_) => match ring.base_ring() {
            ModRing(n) => Ok(arith::is_squarefree(*n)),
            other => Err(Error::UnsupportedRing(format!("polynomials over {other}"))),
        },
        ProductMod { n, blocks } => {
            if blocks.iter().any(|m| m.is_infinite()) {
                Ok(arith::is_squarefree(*n))
            } else {
                Ok(true)
            }
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
    fn literal_matrices() {
        let r = ModRing(4);
        let b3 = build_b3(&r, &Scalar::Residue(2)).unwrap();
        assert_eq!(b3, Matrix::from_i64(r, &[vec![1, 1, 3], vec![0, 2, 0], vec![0, 0, 2]]).unwrap());
        let b3 = build_b3(&Integers, &Integers.zero()).unwrap();
        assert!(b3.rows()[1..].iter().flatten().all(|x| Integers.is_zero(x)));
        assert_eq!(
            build_b2(5).unwrap(),
            Matrix::from_i64(Integers, &[vec![1, 4, 2], vec![0, 0, 5]]).unwrap()
        );
        assert!(matches!(build_b2(2), Err(Error::PrimeTooSmall(2))));
        assert!(matches!(build_b2(3), Err(Error::PrimeTooSmall(3))));
        assert!(matches!(build_b2(9), Err(Error::NotPrime(9))));
    }

    #[test]
    fn finite_modules() {
        let a = Matrix::from_i64(Integers, &[vec![1, 1, -2]]).unwrap();
        assert_eq!(pr_module_mod_n(&a, 6).unwrap().unwrap().prime, 2);
        let a = Matrix::from_i64(Integers, &[vec![1, 1, -1]]).unwrap();
        assert_eq!(pr_module_mod_n(&a, 5).unwrap(), None);
        let a = Matrix::from_i64(Integers, &[vec![1, -1]]).unwrap();
        for n in 2..30 {
            assert!(pr_module_mod_n(&a, n).unwrap().is_some());
        }
    }

    #[test]
    fn rado_table() {
        assert!(rado_ring_check(&RingDescriptor::poly(PrimeField(7))).unwrap());
        assert!(!rado_ring_check(&RingDescriptor::poly(ModRing(4))).unwrap());
        assert!(rado_ring_check(&RingDescriptor::infinite_product(6)).unwrap());
        assert!(!rado_ring_check(&RingDescriptor::infinite_product(12)).unwrap());
        assert!(rado_ring_check(&RingDescriptor::product(12, vec![Multiplicity::Finite(3)])).unwrap());
        assert!(rado_ring_check(&ModRing(8)).unwrap());
        assert!(rado_ring_check(&Integers).unwrap());
    }
}
