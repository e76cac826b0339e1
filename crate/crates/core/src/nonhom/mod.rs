//! Nonhomogeneous systems `A m = b`: constant solutions, the decision
//! procedure, and the obstruction modules `H_R(I, M)` for finite algebras.

mod algebra;
mod fp;
mod hmodule;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::Serialize;
use serde_json::Value;

use crate::algebra::json::scalar_to_json;
use crate::algebra::{poly, Matrix, RingDescriptor, Scalar};
use crate::arith;
use crate::colouring::{residue_colouring, Colouring};
use crate::error::{Error, Result};
use crate::regularity::Status;

pub use algebra::{FiniteAlgebra, ModuleData};
pub use hmodule::{
    annihilator_base_change, annihilator_quotient, brute_force_dims, compute_h, h_functoriality_check, h_spaces,
    verify_nonprincipal, BaseChangeReport, FunctorialityReport, HModuleReport, HSpaces, HomValue, HomValues,
    DEFAULT_H_BUDGET,
};

/// Why `H_R(I, M)` vanishes, which makes "no constant solution" a proof of
/// non-regularity for systems.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VanishingCriterion {
    /// A single equation needs no vanishing result.
    SingleEquation,
    PrincipalIdeal,
    DedekindDomain,
    TorsionFreeOverDomain,
    ReducedRingOverItself,
    /// `H` was computed and is zero.
    ComputedZero,
}

/// Outcome of [`pr_nonhom`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NonhomVerdict {
    pub status: Status,
    /// A constant solution `m`, when the system is regular.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constant: Option<Value>,
    /// A colouring of `M` without monochromatic solutions, when one is known.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub colouring: Option<Colouring>,
    /// The row whose residue colouring refutes the system.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub refuting_row: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub criterion: Option<VanishingCriterion>,
}

/// Row sums `a_i = sum_j a_ij`.
fn row_sums(a: &Matrix) -> Vec<Scalar> {
    let ring = a.ring();
    a.rows().iter().map(|r| ring.sum(r)).collect()
}

fn check_pair(a: &Matrix, b: &[Scalar], module: &RingDescriptor) -> Result<()> {
    use RingDescriptor::*;
    let ring = a.ring();
    let supported = match (ring, module) {
        (Integers, ModRing(_)) => true,
        (Poly(base), m) if m == ring => matches!(**base, PrimeField(_)) && ring.poly_depth() == 1,
        (Integers | Rationals | ModRing(_) | PrimeField(_), m) => m == ring,
        _ => false,
    };
    if !supported {
        return Err(Error::UnsupportedRing(format!("the pair ({ring}, {module})")));
    }
    module.validate()?;
    if b.len() != a.nrows() {
        return Err(Error::DimensionMismatch(format!("{} right-hand sides for {} rows", b.len(), a.nrows())));
    }
    if let Some(i) = b.iter().position(|x| !module.contains(x)) {
        return Err(Error::invalid(format!("/b/{i}"), format!("{} is not an element of {module}", b[i])));
    }
    Ok(())
}

fn residue(x: &Scalar, n: u64) -> u64 {
    match x {
        Scalar::Int(v) => crate::algebra::reduce_bigint(v, n),
        Scalar::Residue(r) => r % n,
        _ => unreachable!("integer or residue"),
    }
}

/// A single `m` in `M` with `a_i m = b_i` for every row, where `a_i` is the
/// `i`-th row sum.
///
/// Supported pairs `(R, M)`: `(Z, Z)`, `(Z, Z/n)`, `(Q, Q)`, `(Z/n, Z/n)`,
/// `(F_p, F_p)` and `(F_p[x], F_p[x])`.
pub fn constant_solution(a: &Matrix, b: &[Scalar], module: &RingDescriptor) -> Result<Option<Scalar>> {
    use RingDescriptor::*;
    check_pair(a, b, module)?;
    let sums = row_sums(a);
    match module {
        Integers => {
            let mut m: Option<BigInt> = None;
            for (s, t) in sums.iter().zip(b) {
                let (Scalar::Int(s), Scalar::Int(t)) = (s, t) else { unreachable!() };
                if s.is_zero() {
                    if !t.is_zero() {
                        return Ok(None);
                    }
                    continue;
                }
                let (q, r) = t.div_rem(s);
                if !r.is_zero() || m.as_ref().is_some_and(|m| *m != q) {
                    return Ok(None);
                }
                m = Some(q);
            }
            Ok(Some(Scalar::Int(m.unwrap_or_default())))
        }
        Rationals | PrimeField(_) => {
            let mut m: Option<Scalar> = None;
            for (s, t) in sums.iter().zip(b) {
                if module.is_zero(s) {
                    if !module.is_zero(t) {
                        return Ok(None);
                    }
                    continue;
                }
                let q = module.div(t, s);
                if m.as_ref().is_some_and(|m| *m != q) {
                    return Ok(None);
                }
                m = Some(q);
            }
            Ok(Some(m.unwrap_or_else(|| module.zero())))
        }
        ModRing(n) => {
            // a m = b (mod n)  <=>  m = (b/g)(a/g)^(-1) (mod n/g), g = gcd(a, n).
            let mut congruences = Vec::new();
            for (s, t) in sums.iter().zip(b) {
                let (s, t) = (residue(s, *n), residue(t, *n));
                let g = arith::gcd(s, *n);
                if t % g != 0 {
                    return Ok(None);
                }
                let modulus = n / g;
                if modulus > 1 {
                    let inv = arith::inv_mod((s / g) % modulus, modulus).expect("coprime after dividing by the gcd");
                    congruences.push((arith::mul_mod((t / g) % modulus, inv, modulus), modulus));
                }
            }
            Ok(arith::crt(&congruences).map(|(x, _)| Scalar::Residue(x % n)))
        }
        Poly(base) => {
            let mut m: Option<Vec<Scalar>> = None;
            for (s, t) in sums.iter().zip(b) {
                let (Scalar::Poly(s), Scalar::Poly(t)) = (s, t) else { unreachable!() };
                if s.is_empty() {
                    if !t.is_empty() {
                        return Ok(None);
                    }
                    continue;
                }
                let (q, r) = poly::divrem(base, t, s);
                if !r.is_empty() || m.as_ref().is_some_and(|m| *m != q) {
                    return Ok(None);
                }
                m = Some(q);
            }
            Ok(Some(Scalar::Poly(m.unwrap_or_default())))
        }
        _ => unreachable!("checked pair"),
    }
}

/// Residue colouring of `M` by `M / a M` for a row sum `a`, when that
/// quotient is finite.
fn row_colouring(module: &RingDescriptor, a: &Scalar) -> Option<Colouring> {
    use RingDescriptor::*;
    let a = match (module, a) {
        (ModRing(n), Scalar::Int(v)) => Scalar::Residue(crate::algebra::reduce_bigint(v, *n)),
        (Rationals, _) => return None,
        (PrimeField(_), _) => module.zero(),
        _ => a.clone(),
    };
    residue_colouring(module, &a).ok()
}

fn in_multiples(a: &Matrix, b: &[Scalar], module: &RingDescriptor, row: usize) -> Result<bool> {
    let single = Matrix::new(a.ring().clone(), vec![a.rows()[row].clone()])?;
    Ok(constant_solution(&single, &b[row..=row], module)?.is_some())
}

/// Decide partition regularity of `A m = b` (`b != 0`) over `M`.
///
/// Regular iff a constant solution exists, provided `k = 1` or `H_R(I, M)`
/// is known to vanish for `I = (a_1, ..., a_k)`; otherwise
/// [`Error::HNotKnownZero`].
pub fn pr_nonhom(a: &Matrix, b: &[Scalar], module: &RingDescriptor) -> Result<NonhomVerdict> {
    use RingDescriptor::*;
    check_pair(a, b, module)?;
    if b.iter().all(|x| module.is_zero(x)) {
        return Err(Error::invalid("/b", "the right-hand side must be nonzero"));
    }
    if let Some(m) = constant_solution(a, b, module)? {
        return Ok(NonhomVerdict {
            status: Status::PrWithWitness,
            constant: Some(scalar_to_json(module, &m)),
            colouring: None,
            refuting_row: None,
            criterion: None,
        });
    }
    let criterion = if a.nrows() == 1 {
        VanishingCriterion::SingleEquation
    } else {
        match (a.ring(), module) {
            (Integers, Integers) => VanishingCriterion::DedekindDomain,
            (Integers, ModRing(_)) => VanishingCriterion::DedekindDomain,
            (Rationals, _) | (PrimeField(_), _) => VanishingCriterion::PrincipalIdeal,
            (ModRing(_), _) => VanishingCriterion::PrincipalIdeal,
            (Poly(_), _) => VanishingCriterion::DedekindDomain,
            _ => return Err(Error::HNotKnownZero),
        }
    };
    let sums = row_sums(a);
    let mut refuting = None;
    for (i, s) in sums.iter().enumerate() {
        if !in_multiples(a, b, module, i)? {
            if let Some(c) = row_colouring(module, s) {
                refuting = Some((i, c));
                break;
            }
        }
    }
    let (refuting_row, colouring) = refuting.unzip();
    Ok(NonhomVerdict {
        status: Status::NotPrWithRefutation,
        constant: None,
        colouring,
        refuting_row,
        criterion: Some(criterion),
    })
}

/// Outcome of [`pr_nonhom_algebra`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlgebraNonhomVerdict {
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constant: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub criterion: Option<VanishingCriterion>,
    pub dim_h: Option<usize>,
}

/// A constant solution of `A m = b` over a finite algebra acting on its
/// module. `a[i][j]` is an element of `R`, `b[i]` an element of `M`.
pub fn constant_solution_algebra(alg: &FiniteAlgebra, a: &[Vec<Vec<u64>>], b: &[Vec<u64>]) -> Result<Option<Vec<u64>>> {
    let (p, d, dm) = (alg.p(), alg.dim(), alg.module_dim());
    if a.len() != b.len() || b.iter().any(|v| v.len() != dm) || a.iter().flatten().any(|x| x.len() != d) {
        return Err(Error::DimensionMismatch("matrix entries must lie in R and b in M".into()));
    }
    let mut cols = vec![Vec::new(); dm];
    let mut target = Vec::new();
    for (row, rhs) in a.iter().zip(b) {
        let mut s = vec![0; d];
        for x in row {
            for (acc, &y) in s.iter_mut().zip(x) {
                *acc = arith::add_mod(*acc, y % p, p);
            }
        }
        let act = alg.action(&s);
        for (j, col) in cols.iter_mut().enumerate() {
            col.extend(act.iter().map(|r| r[j]));
        }
        target.extend(rhs.iter().map(|x| x % p));
    }
    Ok(fp::solve(p, &cols, &target))
}

/// [`pr_nonhom`] over a finite algebra: systems are decided only when the
/// computed `H_R(I, M)` vanishes.
pub fn pr_nonhom_algebra(
    alg: &FiniteAlgebra,
    a: &[Vec<Vec<u64>>],
    b: &[Vec<u64>],
    budget: u64,
) -> Result<AlgebraNonhomVerdict> {
    if b.iter().flatten().all(|&x| x % alg.p() == 0) {
        return Err(Error::invalid("/b", "the right-hand side must be nonzero"));
    }
    if let Some(m) = constant_solution_algebra(alg, a, b)? {
        return Ok(AlgebraNonhomVerdict {
            status: Status::PrWithWitness,
            constant: Some(m),
            criterion: None,
            dim_h: None,
        });
    }
    if a.len() == 1 {
        return Ok(AlgebraNonhomVerdict {
            status: Status::NotPrWithRefutation,
            constant: None,
            criterion: Some(VanishingCriterion::SingleEquation),
            dim_h: None,
        });
    }
    let sums: Vec<Vec<u64>> = a
        .iter()
        .map(|row| {
            row.iter().fold(vec![0; alg.dim()], |mut acc, x| {
                fp::axpy(alg.p(), &mut acc, 1, x);
                acc
            })
        })
        .collect();
    let report = compute_h(&alg.with_ideal(&sums)?, budget)?;
    if report.dim_h != 0 {
        return Err(Error::HNotKnownZero);
    }
    Ok(AlgebraNonhomVerdict {
        status: Status::NotPrWithRefutation,
        constant: None,
        criterion: Some(VanishingCriterion::ComputedZero),
        dim_h: Some(0),
    })
}

/// Validate a nonhomogeneous refutation: no `chi`-monochromatic solution of
/// `a_1 x_1 + ... + a_l x_l = b` (integers, `l <= 3`) with every `|x_j| <= n`.
pub fn affine_window_clear(row: &[i64], b: i64, chi: &Colouring, n: i64) -> Result<bool> {
    let l = row.len();
    if !(1..=3).contains(&l) {
        return Err(Error::invalid("/matrix", "window validation supports one to three variables"));
    }
    let colour = |v: i64| chi.colour(&Scalar::Int(BigInt::from(v)));
    let last = row[l - 1];
    let prefixes: Vec<Vec<i64>> = match l {
        1 => vec![vec![]],
        2 => (-n..=n).map(|x| vec![x]).collect(),
        _ => (-n..=n).flat_map(|x| (-n..=n).map(move |y| vec![x, y])).collect(),
    };
    for prefix in prefixes {
        let partial: i128 = prefix.iter().zip(row).map(|(x, a)| *x as i128 * *a as i128).sum();
        let rest = b as i128 - partial;
        let candidates: Vec<i64> = if last == 0 {
            if rest != 0 {
                continue;
            }
            (-n..=n).collect()
        } else if rest % last as i128 == 0 && (rest / last as i128).abs() <= n as i128 {
            vec![(rest / last as i128) as i64]
        } else {
            continue;
        };
        for x in candidates {
            let c = colour(x)?;
            let mut mono = true;
            for &y in &prefix {
                if colour(y)? != c {
                    mono = false;
                    break;
                }
            }
            if mono {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
