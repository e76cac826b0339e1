//! The generalised columns condition.
//!
//! Over an infinite domain it coincides with the columns condition, and over
//! a finite ring only `m = 0` is possible. For `(Z/n)[x]` (and `[x, y]`)
//! the ring splits by the Chinese remainder theorem into factors
//! `A = (Z/q^e)[..]`, and the condition holds over the product iff it holds
//! over some factor with `d_1, ..., d_m` outside `qA`. There the elements
//! outside `qA` are non-zero-divisors, so:
//!
//! * `d_0 * sum_{I_0} = 0` for some `d_0 != 0` iff the sum lies in `qA^k`
//!   (take `d_0 = q^(e-1)`);
//! * `d_t * sum_{I_t}` lies in the module spanned by the earlier columns
//!   for some `d_t` outside `qA` iff the sum lies in their span over the
//!   localisation `A_(q)`.
//!
//! A product `prod Z/n` with infinite blocks is handled the same way on
//! each infinite block, with the multipliers supported on that block.

use super::columns::{columns_condition, find_chain, ChainOracle, MAX_COLUMNS};
use super::witness::{mask_indices, PartitionWitness};
use crate::algebra::chain::ChainRing;
use crate::algebra::{poly, Matrix, RingDescriptor, Scalar};
use crate::arith;
use crate::error::{Error, Result};

/// Decide the generalised columns condition and return a witness with
/// explicit multipliers `d_0, ..., d_m`.
pub fn gcc(a: &Matrix) -> Result<Option<PartitionWitness>> {
    use RingDescriptor::*;
    let ring = a.ring();
    if a.ncols() > MAX_COLUMNS {
        return Err(Error::BudgetExceeded(format!(
            "{} columns exceed the limit of {MAX_COLUMNS}",
            a.ncols()
        )));
    }
    if ring.is_domain() {
        if ring.is_finite() {
            return Ok(all_columns_killed(a, ring.one(), |s| ring.is_zero(s)));
        }
        return Ok(columns_condition(a)?.map(|mut w| {
            if w.multipliers.is_none() {
                w.multipliers = Some(vec![ring.one(); w.m + 1]);
            }
            w
        }));
    }
    match ring {
        ModRing(n) => {
            let total = a.column_sum(full_mask(a.ncols()));
            let g = total.iter().fold(*n, |g, s| arith::gcd(g, residue(s)));
            if g == 1 {
                return Ok(None);
            }
            let d0 = Scalar::Residue(n / g);
            Ok(all_columns_killed(a, d0.clone(), |s| ring.is_zero(&ring.mul(&d0, s))))
        }
        Poly(_) => match ring.base_ring() {
            ModRing(n) => {
                let depth = ring.poly_depth();
                for (q, e) in arith::factorize(*n) {
                    let component = |s: &Scalar| reduce_mod(s, q.pow(e));
                    if let Some(w) = prime_power_search(a, q, e, depth, &component, |x| lift(x, *n, q.pow(e)))? {
                        return Ok(Some(w));
                    }
                }
                Ok(None)
            }
            other => Err(Error::UnsupportedRing(format!("polynomials over {other}"))),
        },
        ProductMod { n, blocks } => {
            for (b, mult) in blocks.iter().enumerate() {
                let embed = |x: &Scalar| {
                    let mut values = vec![0; blocks.len()];
                    values[b] = residue(x);
                    Scalar::Product(values)
                };
                if mult.is_infinite() {
                    for (q, e) in arith::factorize(*n) {
                        let qe = q.pow(e);
                        let component = |s: &Scalar| Scalar::Residue(block_value(s, b) % qe);
                        let found = prime_power_search(a, q, e, 0, &component, |x| embed(&lift(x, *n, qe)))?;
                        if found.is_some() {
                            return Ok(found);
                        }
                    }
                } else {
                    let total = a.column_sum(full_mask(a.ncols()));
                    let g = total.iter().fold(*n, |g, s| arith::gcd(g, block_value(s, b)));
                    if g > 1 {
                        let d0 = embed(&Scalar::Residue(n / g));
                        return Ok(all_columns_killed(a, d0, |_| true));
                    }
                }
            }
            Ok(None)
        }
        other => Err(Error::UnsupportedRing(other.to_string())),
    }
}

fn full_mask(l: usize) -> u64 {
    (1u64 << l) - 1
}

fn residue(s: &Scalar) -> u64 {
    match s {
        Scalar::Residue(r) => *r,
        _ => unreachable!("expected a residue"),
    }
}

fn block_value(s: &Scalar, b: usize) -> u64 {
    match s {
        Scalar::Product(v) => v[b],
        _ => unreachable!("expected a product element"),
    }
}

/// The `m = 0` witness `I_0 = everything`, if `d0` kills the sum of all columns.
fn all_columns_killed(a: &Matrix, d0: Scalar, killed: impl Fn(&Scalar) -> bool) -> Option<PartitionWitness> {
    let total = a.column_sum(full_mask(a.ncols()));
    if !total.iter().all(killed) {
        return None;
    }
    Some(PartitionWitness {
        m: 0,
        blocks: vec![(0..a.ncols()).collect()],
        multipliers: Some(vec![d0]),
        combinations: vec![],
    })
}

/// Reduce the coefficients of a residue or polynomial modulo `m`.
pub(crate) fn reduce_mod(s: &Scalar, m: u64) -> Scalar {
    match s {
        Scalar::Residue(r) => Scalar::Residue(r % m),
        Scalar::Poly(c) => {
            let base = match c.first() {
                Some(Scalar::Poly(_)) => RingDescriptor::poly(RingDescriptor::ModRing(m)),
                _ => RingDescriptor::ModRing(m),
            };
            Scalar::Poly(poly::trim(&base, c.iter().map(|x| reduce_mod(x, m)).collect()))
        }
        other => other.clone(),
    }
}

/// Embed an element of the `q^e` factor of `Z/n` (or of its polynomial ring)
/// via the idempotent that is 1 on that factor and 0 elsewhere.
fn lift(s: &Scalar, n: u64, qe: u64) -> Scalar {
    let idem = arith::crt_idempotent(n, qe);
    fn walk(s: &Scalar, idem: u64, n: u64) -> Scalar {
        match s {
            Scalar::Residue(r) => Scalar::Residue(arith::mul_mod(*r, idem, n)),
            Scalar::Poly(c) => Scalar::Poly(c.iter().map(|x| walk(x, idem, n)).collect()),
            other => other.clone(),
        }
    }
    walk(s, idem, n)
}

struct LocalOracle {
    ch: ChainRing,
    cols: Vec<Vec<Scalar>>,
}

impl LocalOracle {
    fn sum(&self, mask: u64) -> Vec<Scalar> {
        let r = self.ch.ring();
        let k = self.cols[0].len();
        (0..k)
            .map(|i| r.sum(mask_indices(mask).iter().map(|&j| &self.cols[j][i])))
            .collect()
    }

    fn earlier(&self, used: u64) -> Vec<Vec<Scalar>> {
        mask_indices(used).iter().map(|&j| self.cols[j].clone()).collect()
    }
}

impl ChainOracle for LocalOracle {
    fn opens(&self, mask: u64) -> bool {
        self.sum(mask).iter().all(|s| self.ch.valuation(s) >= 1)
    }

    fn tester(&self, used: u64) -> Box<dyn Fn(u64) -> bool + '_> {
        let earlier = self.earlier(used);
        Box::new(move |j| self.ch.solve(&earlier, &self.sum(j)).is_some())
    }
}

fn prime_power_search(
    a: &Matrix,
    q: u64,
    e: u32,
    depth: usize,
    component: &dyn Fn(&Scalar) -> Scalar,
    lift: impl Fn(&Scalar) -> Scalar,
) -> Result<Option<PartitionWitness>> {
    let ch = ChainRing::new(q, e, depth);
    let cols: Vec<Vec<Scalar>> = a
        .columns()
        .iter()
        .map(|c| c.iter().map(component).collect())
        .collect();
    let oracle = LocalOracle { ch, cols };
    let Some(blocks) = find_chain(a.ncols(), &oracle) else {
        return Ok(None);
    };
    let r = oracle.ch.ring();
    let l = a.ncols();
    let mut multipliers = vec![lift(&r.from_i64(q.pow(e - 1) as i64))];
    let mut combinations = Vec::new();
    let mut earlier = blocks[0];
    for &b in &blocks[1..] {
        let idx = mask_indices(earlier);
        let (delta, y) = oracle
            .ch
            .solve(&oracle.earlier(earlier), &oracle.sum(b))
            .expect("block was accepted by the membership test");
        let mut coeffs = vec![a.ring().zero(); l];
        for (&j, c) in idx.iter().zip(&y) {
            coeffs[j] = lift(c);
        }
        multipliers.push(lift(&delta));
        combinations.push(coeffs);
        earlier |= b;
    }
    Ok(Some(PartitionWitness {
        m: blocks.len() - 1,
        blocks: blocks.iter().map(|&b| mask_indices(b)).collect(),
        multipliers: Some(multipliers),
        combinations,
    }))
}

/// Whether `d0 * D^n * R` is infinite for every `n >= 0`.
pub fn powers_stay_infinite(ring: &RingDescriptor, d0: &Scalar, d: &Scalar) -> bool {
    use RingDescriptor::*;
    if ring.is_domain() {
        return !ring.is_finite() && !ring.is_zero(d0) && !ring.is_zero(d);
    }
    let survives = |n: u64, x0: &dyn Fn(u64) -> Scalar, x: &dyn Fn(u64) -> Scalar| {
        arith::factorize(n).into_iter().any(|(q, e)| {
            let qe = q.pow(e);
            let ch = ChainRing::new(q, e, 0);
            ch.valuation(&x0(qe)) < e && ch.valuation(&x(qe)) == 0
        })
    };
    match ring {
        Poly(_) => match ring.base_ring() {
            ModRing(n) => survives(*n, &|qe| reduce_mod(d0, qe), &|qe| reduce_mod(d, qe)),
            _ => false,
        },
        ProductMod { n, blocks } => blocks.iter().enumerate().any(|(b, m)| {
            m.is_infinite()
                && survives(
                    *n,
                    &|qe| Scalar::Residue(block_value(d0, b) % qe),
                    &|qe| Scalar::Residue(block_value(d, b) % qe),
                )
        }),
        _ => false,
    }
}
