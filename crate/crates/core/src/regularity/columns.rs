use std::collections::{HashMap, HashSet};

use super::witness::{indices_mask, mask_indices, PartitionWitness};
use crate::algebra::echelon::{solve_fraction_free, FreeEchelon};
use crate::algebra::{fraction_field_embed, solve, Matrix, RingDescriptor, Scalar, Subspace};
use crate::error::{Error, Result};

/// Largest column count accepted by the search.
pub const MAX_COLUMNS: usize = 20;
/// Largest column count accepted by the exhaustive oracle.
pub const MAX_BRUTEFORCE_COLUMNS: usize = 8;

/// The two predicates that define a columns-type condition.
pub(crate) trait ChainOracle {
    /// Whether the columns in `mask` may form the first block.
    fn opens(&self, mask: u64) -> bool;
    /// A test for blocks that may follow once the columns in `used` are placed.
    fn tester(&self, used: u64) -> Box<dyn Fn(u64) -> bool + '_>;
}

/// Masks with `k` bits set among the low `l` bits, in increasing order.
pub(crate) fn masks_of_size(l: usize, k: usize) -> impl Iterator<Item = u64> {
    let limit = 1u64 << l;
    let mut cur = if k == 0 { 0 } else { (1u64 << k) - 1 };
    let mut done = k > l;
    std::iter::from_fn(move || {
        if done || cur >= limit {
            return None;
        }
        let out = cur;
        if cur == 0 {
            done = true;
        } else {
            let c = cur & cur.wrapping_neg();
            let r = cur + c;
            cur = (((r ^ cur) >> 2) / c) | r;
        }
        Some(out)
    })
}

/// Nonempty submasks of `set`, in increasing order.
pub(crate) fn submasks_ascending(set: u64) -> impl Iterator<Item = u64> {
    let mut sub = 0u64;
    std::iter::from_fn(move || {
        sub = sub.wrapping_sub(set) & set;
        (sub != 0).then_some(sub)
    })
}

/// Find the canonical chain: first block ordered by (size, mask), later
/// blocks by mask.
///
/// Placing a valid block never hurts: if the chain can be completed from a
/// set of used columns, it can be completed from any larger set that arose
/// from valid blocks. So the first valid block at each level decides the
/// outcome, and failures are memoised on the used set.
pub(crate) fn find_chain(l: usize, oracle: &dyn ChainOracle) -> Option<Vec<u64>> {
    let full = (1u64 << l) - 1;
    let mut failed = HashSet::new();
    for size in 1..=l {
        for first in masks_of_size(l, size) {
            if !oracle.opens(first) {
                continue;
            }
            if let Some(mut rest) = complete(full, first, oracle, &mut failed) {
                rest.insert(0, first);
                return Some(rest);
            }
        }
    }
    None
}

fn complete(full: u64, used: u64, oracle: &dyn ChainOracle, failed: &mut HashSet<u64>) -> Option<Vec<u64>> {
    let mut used = used;
    let mut blocks = Vec::new();
    let start = used;
    while used != full {
        if failed.contains(&used) {
            failed.insert(start);
            return None;
        }
        let test = oracle.tester(used);
        match submasks_ascending(full & !used).find(|&j| test(j)) {
            Some(j) => {
                blocks.push(j);
                used |= j;
            }
            None => {
                failed.insert(used);
                failed.insert(start);
                return None;
            }
        }
    }
    Some(blocks)
}

struct DomainOracle<'a> {
    ring: &'a RingDescriptor,
    cols: Vec<Vec<Scalar>>,
}

impl DomainOracle<'_> {
    fn sum_is_zero(&self, vecs: &[Vec<Scalar>], mask: u64) -> bool {
        let k = vecs.first().map_or(0, Vec::len);
        (0..k).all(|i| {
            let s = self
                .ring
                .sum(mask_indices(mask).iter().map(|&j| &vecs[j][i]));
            self.ring.is_zero(&s)
        })
    }
}

impl ChainOracle for DomainOracle<'_> {
    fn opens(&self, mask: u64) -> bool {
        self.sum_is_zero(&self.cols, mask)
    }

    fn tester(&self, used: u64) -> Box<dyn Fn(u64) -> bool + '_> {
        let k = self.cols[0].len();
        let mut ech = FreeEchelon::new(self.ring.clone(), k);
        for j in mask_indices(used) {
            ech.insert(&self.cols[j]);
        }
        let residuals: Vec<Vec<Scalar>> = self.cols.iter().map(|c| ech.reduce(c)).collect();
        Box::new(move |j| self.sum_is_zero(&residuals, j))
    }
}

fn check_size(a: &Matrix, max: usize) -> Result<()> {
    if a.ncols() > max {
        return Err(Error::BudgetExceeded(format!(
            "{} columns exceed the limit of {max}",
            a.ncols()
        )));
    }
    Ok(())
}

/// Decide the columns condition over an integral domain and return the
/// canonical witness. Span questions are answered over the fraction field
/// by division-free elimination, so combinations come back as
/// `d_t * sum = sum_j r_j c_j` with `d_t, r_j` in the domain (and `d_t = 1`
/// over a field).
pub fn columns_condition(a: &Matrix) -> Result<Option<PartitionWitness>> {
    let ring = a.ring();
    if !ring.is_domain() {
        return Err(Error::NotADomain(ring.to_string()));
    }
    check_size(a, MAX_COLUMNS)?;
    let oracle = DomainOracle {
        ring,
        cols: a.columns(),
    };
    let Some(blocks) = find_chain(a.ncols(), &oracle) else {
        return Ok(None);
    };
    Ok(Some(domain_witness(a, &blocks)))
}

pub(crate) fn domain_witness(a: &Matrix, blocks: &[u64]) -> PartitionWitness {
    let ring = a.ring();
    let cols = a.columns();
    let l = a.ncols();
    let mut multipliers = vec![ring.one()];
    let mut combinations = Vec::new();
    let mut earlier = blocks[0];
    for &b in &blocks[1..] {
        let idx = mask_indices(earlier);
        let earlier_cols: Vec<Vec<Scalar>> = idx.iter().map(|&j| cols[j].clone()).collect();
        let (delta, y) = solve_fraction_free(ring, &earlier_cols, &a.column_sum(b))
            .expect("block was accepted by the span test");
        let mut coeffs = vec![ring.zero(); l];
        for (&j, c) in idx.iter().zip(y) {
            coeffs[j] = c;
        }
        multipliers.push(delta);
        combinations.push(coeffs);
        earlier |= b;
    }
    PartitionWitness {
        m: blocks.len() - 1,
        blocks: blocks.iter().map(|&b| mask_indices(b)).collect(),
        multipliers: (!ring.is_field()).then_some(multipliers),
        combinations,
    }
}

/// The matrix with every entry mapped into the fraction field.
pub fn embed_in_fraction_field(a: &Matrix) -> Result<Matrix> {
    let (field, _) = fraction_field_embed(a.ring(), &a.ring().zero())?;
    a.map_into(field, |x| fraction_field_embed(a.ring(), x).expect("domain element").1)
}

/// Exhaustive search over ordered set partitions, testing spans with
/// reduced echelon forms over the fraction field. Independent of
/// [`columns_condition`]; intended as a cross-check for small matrices.
/// Any returned witness is stated over the fraction field.
pub fn columns_condition_bruteforce(a: &Matrix) -> Result<Option<PartitionWitness>> {
    if !a.ring().is_domain() {
        return Err(Error::NotADomain(a.ring().to_string()));
    }
    check_size(a, MAX_BRUTEFORCE_COLUMNS)?;
    let k_mat = embed_in_fraction_field(a)?;
    let field = k_mat.ring().clone();
    let l = k_mat.ncols();
    let full = (1u64 << l) - 1;
    let cols = k_mat.columns();
    let mut cache: HashMap<(u64, u64), bool> = HashMap::new();
    let mut in_span = |used: u64, block: u64| -> bool {
        *cache.entry((used, block)).or_insert_with(|| {
            let basis: Vec<Vec<Scalar>> = mask_indices(used).iter().map(|&j| cols[j].clone()).collect();
            Subspace::span(field.clone(), k_mat.nrows(), &basis)
                .and_then(|s| s.contains(&k_mat.column_sum(block)))
                .expect("dimensions agree")
        })
    };

    fn extend(
        full: u64,
        used: u64,
        chain: &mut Vec<u64>,
        in_span: &mut dyn FnMut(u64, u64) -> bool,
    ) -> bool {
        if used == full {
            return true;
        }
        let rest = full & !used;
        for block in submasks_ascending(rest) {
            if in_span(used, block) {
                chain.push(block);
                if extend(full, used | block, chain, in_span) {
                    return true;
                }
                chain.pop();
            }
        }
        false
    }

    for size in 1..=l {
        for first in masks_of_size(l, size) {
            if !in_span(0, first) {
                continue;
            }
            let mut chain = vec![first];
            if extend(full, first, &mut chain, &mut in_span) {
                let mut combinations = Vec::new();
                let mut earlier = first;
                for &b in &chain[1..] {
                    let idx = mask_indices(earlier);
                    let basis: Vec<Vec<Scalar>> = idx.iter().map(|&j| cols[j].clone()).collect();
                    let y = solve(&field, &basis, &k_mat.column_sum(b))?.expect("in span");
                    let mut coeffs = vec![field.zero(); l];
                    for (&j, c) in idx.iter().zip(y) {
                        coeffs[j] = c;
                    }
                    combinations.push(coeffs);
                    earlier |= b;
                }
                return Ok(Some(PartitionWitness {
                    m: chain.len() - 1,
                    blocks: chain.iter().map(|&b| mask_indices(b)).collect(),
                    multipliers: None,
                    combinations,
                }));
            }
        }
    }
    Ok(None)
}

/// Block masks of a witness, for comparisons.
pub fn witness_masks(w: &PartitionWitness) -> Vec<u64> {
    w.blocks.iter().map(|b| indices_mask(b)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use RingDescriptor::*;

    fn m(ring: RingDescriptor, rows: &[Vec<i64>]) -> Matrix {
        Matrix::from_i64(ring, rows).unwrap()
    }

    #[test]
    fn gosper_enumeration() {
        let v: Vec<u64> = masks_of_size(4, 2).collect();
        assert_eq!(v, vec![0b0011, 0b0101, 0b0110, 0b1001, 0b1010, 0b1100]);
        assert_eq!(masks_of_size(3, 3).collect::<Vec<_>>(), vec![0b111]);
        let subs: Vec<u64> = submasks_ascending(0b1010).collect();
        assert_eq!(subs, vec![0b0010, 0b1000, 0b1010]);
    }

    #[test]
    fn schur_equation() {
        let a = m(Integers, &[vec![1, 1, -1]]);
        let w = columns_condition(&a).unwrap().unwrap();
        assert_eq!(w.blocks, vec![vec![0, 2], vec![1]]);
        assert_eq!(w.combinations[0], vec![Integers.one(), Integers.zero(), Integers.zero()]);
        w.check(&a).unwrap();
    }

    #[test]
    fn no_witness_for_1_1_minus_3() {
        assert_eq!(columns_condition(&m(Integers, &[vec![1, 1, -3]])).unwrap(), None);
        assert_eq!(columns_condition_bruteforce(&m(Integers, &[vec![1, 1, -3]])).unwrap(), None);
    }

    #[test]
    fn finite_field_example() {
        for p in [2u64, 3, 5, 7] {
            let a = m(PrimeField(p), &[vec![1, 1, -1], vec![0, 0, 0], vec![0, 0, 0]]);
            let w = columns_condition(&a).unwrap().unwrap();
            // Over F_2 the columns are all 1 and {1, 2} comes first.
            let first = if p == 2 { vec![0, 1] } else { vec![0, 2] };
            assert_eq!(w.blocks[0], first, "p = {p}");
            assert!(columns_condition_bruteforce(&a).unwrap().is_some());
            w.check(&a).unwrap();
        }
    }

    #[test]
    fn bruteforce_examples() {
        let w = columns_condition_bruteforce(&m(Integers, &[vec![1, -1]])).unwrap().unwrap();
        assert_eq!((w.m, w.blocks.clone()), (0, vec![vec![0, 1]]));
        assert!(columns_condition_bruteforce(&m(Integers, &[vec![1, 1, -1]])).unwrap().is_some());
        assert_eq!(columns_condition_bruteforce(&m(Rationals, &[vec![2, 3]])).unwrap(), None);
    }

    #[test]
    fn rejects_non_domains_and_oversize() {
        assert!(matches!(
            columns_condition(&m(ModRing(4), &[vec![1, 1]])),
            Err(Error::NotADomain(_))
        ));
        assert!(matches!(
            columns_condition(&m(Integers, &[vec![1; 21]])),
            Err(Error::BudgetExceeded(_))
        ));
    }

    #[test]
    fn integral_multipliers() {
        let a = m(Integers, &[vec![2, -2, 3]]);
        let w = columns_condition(&a).unwrap().unwrap();
        w.check(&a).unwrap();
        let z = |v: i64| Integers.from_i64(v);
        assert_eq!(w.multipliers, Some(vec![z(1), z(2)]));
        assert_eq!(w.combinations, vec![vec![z(3), z(0), z(0)]]);
        let a = m(Integers, &[vec![2, -2, 3, 0], vec![0, 0, 1, -2]]);
        assert_eq!(columns_condition(&a).unwrap(), None);
    }
}
