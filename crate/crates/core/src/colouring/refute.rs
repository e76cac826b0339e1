//! Refutation of partition regularity over the integers.
//!
//! Suppose `x` is a nontrivial solution that is monochromatic under `c_p`
//! with colour `j != 0`. Group the coordinates by `p`-adic valuation, lowest
//! first. If `U` is the set of columns already placed and `v_U` is an
//! integer vector orthogonal to every `c_i` with `i in U`, then pairing the
//! system with `v_U` and reducing modulo `p` shows that the next group `J`
//! satisfies `p | (sum_J c, v_U)`. The certificate records `v_U` for every
//! set `U` that can arise and a prime `p` such that every block allowed by
//! this congruence is a genuine columns-condition step. Since the columns
//! condition fails, the chain can never cover every column, so no such `x`
//! exists.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::Colouring;
use crate::algebra::json::decimal;
use crate::algebra::{nullspace, Matrix, RingDescriptor, Scalar, Subspace};
use crate::arith;
use crate::error::{Error, Result};
use crate::regularity::{columns_condition, mask_indices};

/// Work limit for the chain analysis, counted in subset evaluations.
const WORK_BUDGET: u64 = 50_000_000;

/// An orthogonality vector for one set of placed columns.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainStep {
    /// The placed columns `U` (0-based, increasing).
    pub used: Vec<usize>,
    /// Vandermonde parameter the vector was built from.
    pub w: u64,
    /// `v_U`, orthogonal to `c_i` for `i in U`; zero when they span everything.
    #[serde(with = "decimal::vec")]
    pub vector: Vec<BigInt>,
}

/// The vectors `v = v_{}` and `v_U` with the values they keep away from 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparatingVectors {
    /// One entry per reachable set, starting with the empty set.
    pub steps: Vec<ChainStep>,
    /// Absolute values of every nonzero pairing `(sum_J c, v_U)` with
    /// `sum_J c` outside the span of `U`, sorted and deduplicated.
    #[serde(with = "decimal::vec")]
    pub values: Vec<BigInt>,
    /// Whether some reachable chain covers every column.
    pub complete_chain: bool,
}

impl SeparatingVectors {
    /// The global vector `v`.
    pub fn v(&self) -> &[BigInt] {
        &self.steps[0].vector
    }
}

/// Certificate that `A x = 0` has no nontrivial `c_p`-monochromatic solution
/// in the integers (equivalently, the rationals).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RefutationCertificate {
    pub matrix_hash: String,
    pub matrix: Matrix,
    pub p: u64,
    pub colouring: CpTag,
    pub vectors: SeparatingVectors,
    /// For each reachable set, the blocks allowed modulo `p`.
    pub transcript: Vec<String>,
    pub columns_condition: String,
}

/// `{"kind": "cp", "p": ...}`, kept as its own type so certificates
/// deserialise without ring context.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CpTag {
    pub kind: String,
    pub p: u64,
}

impl RefutationCertificate {
    pub fn colouring(&self) -> Colouring {
        Colouring::Cp { p: self.p }
    }
}

/// Outcome of replaying a certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReplayReport {
    pub hash_matches: bool,
    /// `p` is prime and divides none of the recorded values.
    pub prime_avoids_values: bool,
    /// Every block allowed modulo `p` is a columns-condition step and no
    /// chain covers all columns.
    pub chain_closed: bool,
    /// The columns condition fails.
    pub columns_condition_fails: bool,
    pub sets_visited: usize,
    pub failures: Vec<String>,
}

impl ReplayReport {
    pub fn sound(&self) -> bool {
        self.hash_matches && self.prime_avoids_values && self.chain_closed && self.columns_condition_fails
    }
}

/// Integer rows of `a`, clearing denominators row by row over `Q`.
pub(crate) fn integer_matrix(a: &Matrix) -> Result<Vec<Vec<BigInt>>> {
    match a.ring() {
        RingDescriptor::Integers => Ok(a.integer_rows().expect("integer entries")),
        RingDescriptor::Rationals => Ok(a
            .rows()
            .iter()
            .map(|row| {
                let den = row.iter().fold(BigInt::one(), |l, x| match x {
                    Scalar::Rat(q) => l.lcm(q.denom()),
                    _ => unreachable!(),
                });
                row.iter()
                    .map(|x| match x {
                        Scalar::Rat(q) => q.numer() * (&den / q.denom()),
                        _ => unreachable!(),
                    })
                    .collect()
            })
            .collect()),
        other => Err(Error::UnsupportedRing(format!(
            "refutation needs an integer or rational matrix, got {other}"
        ))),
    }
}

fn columns_of(rows: &[Vec<BigInt>], l: usize) -> Vec<Vec<BigInt>> {
    (0..l).map(|j| rows.iter().map(|r| r[j].clone()).collect()).collect()
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Integer basis of the vectors orthogonal to `cols`.
fn orthogonal_basis(cols: &[Vec<BigInt>], k: usize) -> Vec<Vec<BigInt>> {
    if cols.is_empty() {
        return (0..k)
            .map(|i| (0..k).map(|j| BigInt::from((i == j) as u8)).collect())
            .collect();
    }
    let rows: Vec<Vec<Scalar>> = cols
        .iter()
        .map(|c| c.iter().map(|x| RingDescriptor::Rationals.from_bigint(x)).collect())
        .collect();
    let m = Matrix::new(RingDescriptor::Rationals, rows).expect("rectangular");
    nullspace(&m)
        .expect("rationals form a field")
        .into_iter()
        .map(|v| {
            let den = v.iter().fold(BigInt::one(), |l, x| match x {
                Scalar::Rat(q) => l.lcm(q.denom()),
                _ => unreachable!(),
            });
            primitive(
                v.iter()
                    .map(|x| match x {
                        Scalar::Rat(q) => q.numer() * (&den / q.denom()),
                        _ => unreachable!(),
                    })
                    .collect(),
            )
        })
        .collect()
}

fn primitive(v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() || g.is_one() {
        v
    } else {
        v.into_iter().map(|x| x / &g).collect()
    }
}

/// Pairings `(sum_J c, u)` for every `J` inside `free`, indexed by compact
/// submask of the bits of `free`.
fn subset_pairings(cols: &[Vec<BigInt>], free: &[usize], u: &[BigInt]) -> Vec<BigInt> {
    let per: Vec<BigInt> = free.iter().map(|&j| dot(&cols[j], u)).collect();
    let mut out = vec![BigInt::zero(); 1 << free.len()];
    for cm in 1..out.len() {
        let low = cm.trailing_zeros() as usize;
        out[cm] = &out[cm & (cm - 1)] + &per[low];
    }
    out
}

fn expand(cm: usize, free: &[usize]) -> u64 {
    free.iter()
        .enumerate()
        .filter(|(b, _)| cm >> b & 1 == 1)
        .fold(0, |m, (_, &j)| m | 1 << j)
}

/// Build `v` and the vectors `v_U` for every set of columns reachable by
/// columns-condition steps, using Vandermonde combinations
/// `sum_s w^s n_s` of an orthogonal basis `n_s` for `w = 1, 2, ...`.
pub fn separating_vectors(a: &Matrix) -> Result<SeparatingVectors> {
    let rows = integer_matrix(a)?;
    let (k, l) = (a.nrows(), a.ncols());
    if l > 20 || k > 10 {
        return Err(Error::BudgetExceeded(format!("{k}x{l} exceeds the 10x20 limit")));
    }
    let cols = columns_of(&rows, l);
    let full = (1u64 << l) - 1;
    let mut work = 0u64;
    let mut steps = Vec::new();
    let mut values = BTreeSet::new();
    let mut complete_chain = false;
    let mut seen = BTreeSet::from([0u64]);
    let mut queue = VecDeque::from([0u64]);

    while let Some(used) = queue.pop_front() {
        let free: Vec<usize> = (0..l).filter(|j| used >> j & 1 == 0).collect();
        let placed: Vec<Vec<BigInt>> = mask_indices(used).iter().map(|&j| cols[j].clone()).collect();
        let basis = orthogonal_basis(&placed, k);
        work += (basis.len() as u64 + 1) << free.len();
        if work > WORK_BUDGET {
            return Err(Error::BudgetExceeded("chain analysis".into()));
        }
        let pairings: Vec<Vec<BigInt>> = basis.iter().map(|n| subset_pairings(&cols, &free, n)).collect();
        let size = 1usize << free.len();
        let in_span: Vec<bool> = (0..size).map(|cm| pairings.iter().all(|p| p[cm].is_zero())).collect();

        let (w, vector, pair_v) = if basis.is_empty() {
            (0, vec![BigInt::zero(); k], vec![BigInt::zero(); size])
        } else {
            let mut w = 1u64;
            loop {
                let bw = BigInt::from(w);
                let combined: Vec<BigInt> = (0..size)
                    .map(|cm| {
                        let mut acc = BigInt::zero();
                        for p in pairings.iter().rev() {
                            acc = (acc + &p[cm]) * &bw;
                        }
                        acc
                    })
                    .collect();
                if (1..size).all(|cm| in_span[cm] || !combined[cm].is_zero()) {
                    let mut v = vec![BigInt::zero(); k];
                    let mut pw = BigInt::one();
                    for n in &basis {
                        pw *= &bw;
                        for (vi, ni) in v.iter_mut().zip(n) {
                            *vi += &pw * ni;
                        }
                    }
                    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
                    let v: Vec<BigInt> = v.into_iter().map(|x| x / &g).collect();
                    let combined = combined.into_iter().map(|x| x / &g).collect();
                    break (w, v, combined);
                }
                w += 1;
                work += size as u64;
                if work > WORK_BUDGET {
                    return Err(Error::BudgetExceeded("Vandermonde sweep".into()));
                }
            }
        };

        for cm in 1..size {
            if in_span[cm] {
                let next = used | expand(cm, &free);
                if next == full {
                    complete_chain = true;
                } else if seen.insert(next) {
                    queue.push_back(next);
                }
            } else {
                values.insert(pair_v[cm].abs());
            }
        }
        steps.push(ChainStep {
            used: mask_indices(used),
            w,
            vector,
        });
    }
    Ok(SeparatingVectors {
        steps,
        values: values.into_iter().collect(),
        complete_chain,
    })
}

fn describe(mask: u64) -> String {
    let ix: Vec<String> = mask_indices(mask).iter().map(|i| i.to_string()).collect();
    format!("{{{}}}", ix.join(","))
}

/// Build a certificate that `A x = 0` is not partition regular over `Z`,
/// or `None` when the columns condition holds.
pub fn refute(a: &Matrix) -> Result<Option<RefutationCertificate>> {
    integer_matrix(a)?;
    if columns_condition(a)?.is_some() {
        return Ok(None);
    }
    let vectors = separating_vectors(a)?;
    debug_assert!(!vectors.complete_chain);
    let p = arith::primes()
        .find(|&p| {
            let bp = BigInt::from(p);
            vectors.values.iter().all(|v| !(v % &bp).is_zero())
        })
        .expect("finitely many values");
    let mut cert = RefutationCertificate {
        matrix_hash: a.hash(),
        matrix: a.clone(),
        p,
        colouring: CpTag {
            kind: "cp".into(),
            p,
        },
        vectors,
        transcript: vec![],
        columns_condition: "none".into(),
    };
    cert.transcript = chain_walk(&cert).1;
    Ok(Some(cert))
}

/// Walk the sets reachable through blocks allowed modulo `p`, checking each
/// allowed block against an exact span computation.
fn chain_walk(cert: &RefutationCertificate) -> (Vec<String>, Vec<String>, usize) {
    let a = &cert.matrix;
    let (k, l) = (a.nrows(), a.ncols());
    let mut failures = Vec::new();
    let mut transcript = Vec::new();
    let Ok(rows) = integer_matrix(a) else {
        return (vec!["matrix is not integral".into()], transcript, 0);
    };
    let cols = columns_of(&rows, l);
    let full = (1u64 << l) - 1;
    let bp = BigInt::from(cert.p);
    let vectors: BTreeMap<u64, &ChainStep> = cert
        .vectors
        .steps
        .iter()
        .map(|s| (s.used.iter().fold(0u64, |m, &i| m | 1 << i), s))
        .collect();
    let rat = |c: &Vec<BigInt>| -> Vec<Scalar> { c.iter().map(|x| RingDescriptor::Rationals.from_bigint(x)).collect() };
    let mut seen = BTreeSet::from([0u64]);
    let mut queue = VecDeque::from([0u64]);
    while let Some(used) = queue.pop_front() {
        let Some(step) = vectors.get(&used) else {
            failures.push(format!("no vector recorded for {}", describe(used)));
            continue;
        };
        if step.vector.len() != k {
            failures.push(format!("vector for {} has the wrong length", describe(used)));
            continue;
        }
        for i in mask_indices(used) {
            if !dot(&cols[i], &step.vector).is_zero() {
                failures.push(format!("vector for {} is not orthogonal to column {i}", describe(used)));
            }
        }
        let span = Subspace::span(
            RingDescriptor::Rationals,
            k,
            &mask_indices(used).iter().map(|&i| rat(&cols[i])).collect::<Vec<_>>(),
        )
        .expect("field");
        let free: Vec<usize> = (0..l).filter(|j| used >> j & 1 == 0).collect();
        let pairings = subset_pairings(&cols, &free, &step.vector);
        let mut allowed = Vec::new();
        for cm in 1..(1usize << free.len()) {
            if !(&pairings[cm] % &bp).is_zero() {
                continue;
            }
            let block = expand(cm, &free);
            allowed.push(describe(block));
            let sum: Vec<BigInt> = (0..k)
                .map(|i| mask_indices(block).iter().map(|&j| &cols[j][i]).sum())
                .collect();
            if !span.contains(&rat(&sum)).expect("dimensions agree") {
                failures.push(format!(
                    "block {} is allowed mod {} after {} but is not a columns-condition step",
                    describe(block),
                    cert.p,
                    describe(used)
                ));
                continue;
            }
            let next = used | block;
            if next == full {
                failures.push(format!("chain {} -> {} covers every column", describe(used), describe(block)));
            } else if seen.insert(next) {
                queue.push_back(next);
            }
        }
        transcript.push(format!("after {}: allowed blocks [{}]", describe(used), allowed.join(" ")));
    }
    let visited = seen.len();
    (failures, transcript, visited)
}

impl RefutationCertificate {
    /// Mechanically re-check the certificate.
    pub fn replay(&self) -> ReplayReport {
        let hash_matches = self.matrix.hash() == self.matrix_hash;
        let bp = BigInt::from(self.p);
        let prime_avoids_values = arith::is_prime(self.p)
            && self.colouring.p == self.p
            && self.vectors.values.iter().all(|v| !v.is_zero() && !(v % &bp).is_zero());
        let mut failures = Vec::new();
        if !hash_matches {
            failures.push("matrix hash does not match".into());
        }
        if !prime_avoids_values {
            let hit = self
                .vectors
                .values
                .iter()
                .find(|v| (*v % &bp).is_zero())
                .map(|v| v.to_string())
                .unwrap_or_default();
            failures.push(format!("p = {} divides the recorded value {hit}", self.p));
        }
        let (chain_failures, _, visited) = chain_walk(self);
        let chain_closed = chain_failures.is_empty();
        failures.extend(chain_failures);
        let columns_condition_fails = matches!(columns_condition(&self.matrix), Ok(None));
        if !columns_condition_fails {
            failures.push("the columns condition holds".into());
        }
        ReplayReport {
            hash_matches,
            prime_avoids_values,
            chain_closed,
            columns_condition_fails,
            sets_visited: visited,
            failures,
        }
    }

    /// Largest absolute recorded value, for reporting.
    pub fn max_value(&self) -> Option<u64> {
        self.vectors.values.last().and_then(|v| v.to_u64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(rows: &[Vec<i64>]) -> Matrix {
        Matrix::from_i64(RingDescriptor::Integers, rows).unwrap()
    }

    fn z(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn one_one_minus_three() {
        let cert = refute(&int(&[vec![1, 1, -3]])).unwrap().unwrap();
        assert_eq!(cert.p, 5);
        assert_eq!(cert.vectors.v(), z(&[1]).as_slice());
        assert_eq!(cert.vectors.values, z(&[1, 2, 3]));
        let report = cert.replay();
        assert!(report.sound(), "{report:?}");
    }

    #[test]
    fn tampered_prime_fails_the_first_check() {
        let mut cert = refute(&int(&[vec![1, 1, -3]])).unwrap().unwrap();
        cert.p = 2;
        cert.colouring.p = 2;
        let report = cert.replay();
        assert!(!report.prime_avoids_values);
        assert!(!report.sound());
    }

    #[test]
    fn columns_condition_means_no_certificate() {
        assert_eq!(refute(&int(&[vec![1, 1, -1]])).unwrap(), None);
        assert_eq!(refute(&int(&[vec![2, -1, -1], vec![0, 1, -1]])).unwrap(), None);
    }

    #[test]
    fn degenerate_second_row() {
        let sv = separating_vectors(&int(&[vec![1, -1], vec![0, 0]])).unwrap();
        // Nonzero sums are c_1 = (1, 0) and c_2 = (-1, 0); v = (1, 1) pairs to 1 and -1.
        assert_eq!(sv.v(), z(&[1, 1]).as_slice());
        assert!(sv.complete_chain);
    }

    #[test]
    fn chains_with_several_steps() {
        // I_0 = {0, 1} is forced, then {2} lies outside the span.
        let a = int(&[vec![1, -1, 0, 1], vec![0, 0, 1, 2]]);
        let cert = refute(&a).unwrap().unwrap();
        assert!(cert.vectors.steps.len() >= 2);
        assert!(cert.replay().sound());
    }

    #[test]
    fn rational_input_is_scaled() {
        let q = Matrix::new(
            RingDescriptor::Rationals,
            vec![["1/2", "1/2", "-3/2"]
                .iter()
                .map(|s| Scalar::Rat(s.parse().unwrap()))
                .collect()],
        )
        .unwrap();
        assert_eq!(refute(&q).unwrap().unwrap().p, 5);
    }
}
