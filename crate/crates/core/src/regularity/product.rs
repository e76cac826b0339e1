use serde::Serialize;

use super::columns::columns_condition;
use super::witness::PartitionWitness;
use crate::algebra::{Matrix, Multiplicity, RingDescriptor, Scalar};
use crate::arith;
use crate::error::{Error, Result};

/// Which half of the product criterion fired.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProductRule {
    /// The component reduced mod `p` has all columns summing to zero.
    ColumnsSumToZero,
    /// An infinite-multiplicity component satisfies the columns condition mod `p`.
    ColumnsCondition,
}

/// Evidence that a matrix over `prod Z/nZ` is partition regular.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProductEvidence {
    pub prime: u64,
    pub block: usize,
    pub rule: ProductRule,
    /// Witness over `F_p` for the reduced component.
    pub witness: PartitionWitness,
}

/// Build a matrix over `prod Z/nZ` from its component matrices, one per
/// block, with the given multiplicities.
pub fn product_matrix(n: u64, components: &[(Vec<Vec<i64>>, Multiplicity)]) -> Result<Matrix> {
    let Some((first, _)) = components.first() else {
        return Err(Error::invalid("/components", "at least one component is required"));
    };
    let (k, l) = (first.len(), first.first().map_or(0, Vec::len));
    for (b, (rows, _)) in components.iter().enumerate() {
        if rows.len() != k || rows.iter().any(|r| r.len() != l) {
            return Err(Error::DimensionMismatch(format!("component {b} is not {k}x{l}")));
        }
    }
    let ring = RingDescriptor::product(n, components.iter().map(|c| c.1).collect());
    let rows = (0..k)
        .map(|i| {
            (0..l)
                .map(|j| {
                    Scalar::Product(
                        components
                            .iter()
                            .map(|(rows, _)| rows[i][j].rem_euclid(n as i64) as u64)
                            .collect(),
                    )
                })
                .collect()
        })
        .collect();
    Matrix::new(ring, rows)
}

/// The component of a product matrix on block `b`, over `Z/nZ`.
pub fn component(a: &Matrix, b: usize) -> Result<Matrix> {
    let RingDescriptor::ProductMod { n, blocks } = a.ring() else {
        return Err(Error::UnsupportedRing(format!("{} is not a product ring", a.ring())));
    };
    if b >= blocks.len() {
        return Err(Error::invalid("/block", format!("block {b} out of range")));
    }
    a.map_into(RingDescriptor::ModRing(*n), |s| match s {
        Scalar::Product(v) => Scalar::Residue(v[b]),
        _ => unreachable!("product entries"),
    })
}

fn reduce_component(a: &Matrix, b: usize, p: u64) -> Matrix {
    a.map_into(RingDescriptor::PrimeField(p), |s| match s {
        Scalar::Product(v) => Scalar::Residue(v[b] % p),
        _ => unreachable!("product entries"),
    })
    .expect("reduction of a validated matrix")
}

/// Partition regularity over `prod_{i in I} Z/nZ`: holds iff for some prime
/// `p | n` either some component mod `p` has its columns summing to zero,
/// or some component occurring infinitely often satisfies the columns
/// condition mod `p`. Returns the first hit in (prime, block) order.
pub fn pr_product(a: &Matrix) -> Result<Option<ProductEvidence>> {
    let RingDescriptor::ProductMod { n, blocks } = a.ring() else {
        return Err(Error::UnsupportedRing(format!("{} is not a product ring", a.ring())));
    };
    for p in arith::prime_divisors(*n) {
        for (b, mult) in blocks.iter().enumerate() {
            let reduced = reduce_component(a, b, p);
            if mult.is_infinite() {
                if let Some(w) = columns_condition(&reduced)? {
                    return Ok(Some(ProductEvidence {
                        prime: p,
                        block: b,
                        rule: ProductRule::ColumnsCondition,
                        witness: w,
                    }));
                }
                continue;
            }
            let field = reduced.ring();
            let total = reduced.column_sum((1u64 << a.ncols()) - 1);
            if total.iter().all(|s| field.is_zero(s)) {
                return Ok(Some(ProductEvidence {
                    prime: p,
                    block: b,
                    rule: ProductRule::ColumnsSumToZero,
                    witness: PartitionWitness {
                        m: 0,
                        blocks: vec![(0..a.ncols()).collect()],
                        multipliers: None,
                        combinations: vec![],
                    },
                }));
            }
        }
    }
    Ok(None)
}

impl ProductEvidence {
    /// Re-check the evidence against `a`.
    pub fn check(&self, a: &Matrix) -> std::result::Result<(), String> {
        let RingDescriptor::ProductMod { n, blocks } = a.ring() else {
            return Err("not a product ring".into());
        };
        if n % self.prime != 0 || !arith::is_prime(self.prime) {
            return Err(format!("{} is not a prime divisor of {n}", self.prime));
        }
        let Some(mult) = blocks.get(self.block) else {
            return Err("block out of range".into());
        };
        let reduced = reduce_component(a, self.block, self.prime);
        match self.rule {
            ProductRule::ColumnsSumToZero => {
                let total = reduced.column_sum((1u64 << a.ncols()) - 1);
                if !total.iter().all(|s| reduced.ring().is_zero(s)) {
                    return Err("columns do not sum to zero".into());
                }
                Ok(())
            }
            ProductRule::ColumnsCondition => {
                if !mult.is_infinite() {
                    return Err("columns-condition rule needs an infinite block".into());
                }
                self.witness.check(&reduced)
            }
        }
    }
}
