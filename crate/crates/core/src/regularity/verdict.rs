use serde::Serialize;
use serde_json::{json, Value};

use super::columns::{columns_condition, columns_condition_bruteforce, MAX_BRUTEFORCE_COLUMNS};
use super::gcc::{gcc, reduce_mod};
use super::product::{pr_product, ProductEvidence, ProductRule};
use super::witness::PartitionWitness;
use crate::algebra::{Matrix, RingDescriptor, Scalar};
use crate::arith;
use crate::colouring::{refute, residue_colouring, Colouring, RefutationCertificate};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    #[serde(rename = "PR-with-witness")]
    PrWithWitness,
    #[serde(rename = "NotPR-with-refutation")]
    NotPrWithRefutation,
    #[serde(rename = "Unknown-unsupported")]
    UnknownUnsupported,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::PrWithWitness => "PR-with-witness",
            Status::NotPrWithRefutation => "NotPR-with-refutation",
            Status::UnknownUnsupported => "Unknown-unsupported",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evidence {
    /// Columns condition over an infinite domain.
    ColumnsCondition { witness: PartitionWitness },
    /// Generalised columns condition with explicit multipliers.
    GeneralisedColumnsCondition { witness: PartitionWitness },
    /// `(Z/n)[..]`: the matrix mod `p` satisfies the columns condition over
    /// `F_p[..]`, so it is partition regular over the quotient by `p`.
    PrimeQuotient { prime: u64, witness: PartitionWitness },
    /// The product criterion holds.
    Product(ProductEvidence),
    /// `c_p` refutation over the integers or rationals.
    Refutation { certificate: Box<RefutationCertificate> },
    /// Finite ring: no nonzero element kills the sum of all columns, so the
    /// colouring with every element distinct has no monochromatic solution.
    DistinctColouring { colouring: Colouring },
    /// Infinite domain where the columns condition fails.
    NoColumnsCondition,
    /// `(Z/n)[..]`: neither the generalised condition nor the columns
    /// condition modulo any `p | n` holds.
    NoPrimeQuotient { primes: Vec<u64> },
    /// Product ring: the criterion fails for every `p | n`.
    ProductCriterionFails { primes: Vec<u64> },
    Unsupported { reason: String },
}

/// A decision about `A x = 0` together with re-checkable evidence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub status: Status,
    pub ring: RingDescriptor,
    pub matrix_hash: String,
    pub evidence: Evidence,
}

fn verdict(a: &Matrix, status: Status, evidence: Evidence) -> Verdict {
    Verdict {
        status,
        ring: a.ring().clone(),
        matrix_hash: a.hash(),
        evidence,
    }
}

fn reduce_matrix(a: &Matrix, p: u64) -> Result<Matrix> {
    let depth = a.ring().poly_depth();
    let mut field = RingDescriptor::PrimeField(p);
    for _ in 0..depth {
        field = RingDescriptor::poly(field);
    }
    a.map_into(field, |s| reduce_mod(s, p))
}

/// Decide partition regularity of `A x = 0` over the ring of `A`.
///
/// Unsupported rings and exhausted budgets produce an `Unknown-unsupported`
/// verdict; malformed input is an error.
pub fn decide(a: &Matrix) -> Result<Verdict> {
    match decide_inner(a) {
        Err(e) if e.is_unsupported() => Ok(verdict(
            a,
            Status::UnknownUnsupported,
            Evidence::Unsupported { reason: e.to_string() },
        )),
        other => other,
    }
}

fn decide_inner(a: &Matrix) -> Result<Verdict> {
    use RingDescriptor::*;
    let ring = a.ring();
    if ring.is_finite() && !matches!(ring, ProductMod { .. }) {
        return Ok(match gcc(a)? {
            Some(w) => verdict(a, Status::PrWithWitness, Evidence::GeneralisedColumnsCondition { witness: w }),
            None => verdict(
                a,
                Status::NotPrWithRefutation,
                Evidence::DistinctColouring {
                    colouring: distinct_colouring(ring)?,
                },
            ),
        });
    }
    if ring.is_domain() {
        if let Some(w) = columns_condition(a)? {
            return Ok(verdict(a, Status::PrWithWitness, Evidence::ColumnsCondition { witness: w }));
        }
        return Ok(match ring {
            Integers | Rationals => {
                let certificate = refute(a)?.expect("the columns condition fails");
                verdict(
                    a,
                    Status::NotPrWithRefutation,
                    Evidence::Refutation {
                        certificate: Box::new(certificate),
                    },
                )
            }
            _ => verdict(a, Status::NotPrWithRefutation, Evidence::NoColumnsCondition),
        });
    }
    if let Some(w) = gcc(a)? {
        return Ok(verdict(a, Status::PrWithWitness, Evidence::GeneralisedColumnsCondition { witness: w }));
    }
    match ring {
        Poly(_) => {
            let ModRing(n) = ring.base_ring() else {
                return Err(Error::UnsupportedRing(ring.to_string()));
            };
            let primes = arith::prime_divisors(*n);
            for &p in &primes {
                if let Some(w) = columns_condition(&reduce_matrix(a, p)?)? {
                    return Ok(verdict(
                        a,
                        Status::PrWithWitness,
                        Evidence::PrimeQuotient { prime: p, witness: w },
                    ));
                }
            }
            Ok(verdict(a, Status::NotPrWithRefutation, Evidence::NoPrimeQuotient { primes }))
        }
        ProductMod { n, .. } => Ok(match pr_product(a)? {
            Some(ev) => verdict(a, Status::PrWithWitness, Evidence::Product(ev)),
            None => verdict(
                a,
                Status::NotPrWithRefutation,
                Evidence::ProductCriterionFails {
                    primes: arith::prime_divisors(*n),
                },
            ),
        }),
        other => Err(Error::UnsupportedRing(other.to_string())),
    }
}

/// The colouring giving every element of a finite ring its own colour.
fn distinct_colouring(ring: &RingDescriptor) -> Result<Colouring> {
    match ring {
        RingDescriptor::ModRing(_) | RingDescriptor::PrimeField(_) => residue_colouring(ring, &ring.zero()),
        other => Err(Error::UnsupportedRing(format!("distinct colouring of {other}"))),
    }
}

impl Verdict {
    /// JSON with the matrix embedded, so the document can be re-checked alone.
    pub fn to_json(&self, a: &Matrix) -> Value {
        let mut v = serde_json::to_value(self).expect("serialisable");
        v["matrix"] = a.to_json();
        v
    }

    /// Re-check the verdict against `a`, independently of how it was found.
    pub fn check(&self, a: &Matrix) -> std::result::Result<(), String> {
        if self.matrix_hash != a.hash() || &self.ring != a.ring() {
            return Err("verdict belongs to a different matrix".into());
        }
        let must_fail = |found: Result<bool>, what: &str| match found {
            Ok(false) => Ok(()),
            Ok(true) => Err(format!("{what} holds after all")),
            Err(e) => Err(e.to_string()),
        };
        match (&self.status, &self.evidence) {
            (Status::PrWithWitness, Evidence::ColumnsCondition { witness })
            | (Status::PrWithWitness, Evidence::GeneralisedColumnsCondition { witness }) => witness.check(a),
            (Status::PrWithWitness, Evidence::PrimeQuotient { prime, witness }) => {
                if !matches!(a.ring().base_ring(), RingDescriptor::ModRing(n) if n % prime == 0)
                    || !arith::is_prime(*prime)
                {
                    return Err(format!("{prime} is not a prime divisor of the modulus"));
                }
                witness.check(&reduce_matrix(a, *prime).map_err(|e| e.to_string())?)
            }
            (Status::PrWithWitness, Evidence::Product(ev)) => ev.check(a),
            (Status::NotPrWithRefutation, Evidence::Refutation { certificate }) => {
                if certificate.matrix_hash != a.hash() {
                    return Err("certificate belongs to a different matrix".into());
                }
                let report = certificate.replay();
                if report.sound() {
                    Ok(())
                } else {
                    Err(report.failures.join("; "))
                }
            }
            (Status::NotPrWithRefutation, Evidence::DistinctColouring { .. }) => {
                if !a.ring().is_finite() {
                    return Err("distinct colouring needs a finite ring".into());
                }
                must_fail(gcc(a).map(|w| w.is_some()), "the generalised columns condition")
            }
            (Status::NotPrWithRefutation, Evidence::NoColumnsCondition) => {
                let found = if a.ncols() <= MAX_BRUTEFORCE_COLUMNS {
                    columns_condition_bruteforce(a)
                } else {
                    columns_condition(a)
                };
                must_fail(found.map(|w| w.is_some()), "the columns condition")
            }
            (Status::NotPrWithRefutation, Evidence::NoPrimeQuotient { primes }) => {
                must_fail(gcc(a).map(|w| w.is_some()), "the generalised columns condition")?;
                for &p in primes {
                    let reduced = reduce_matrix(a, p).map_err(|e| e.to_string())?;
                    must_fail(columns_condition(&reduced).map(|w| w.is_some()), &format!("the columns condition mod {p}"))?;
                }
                match a.ring().base_ring() {
                    RingDescriptor::ModRing(n) if arith::prime_divisors(*n) == *primes => Ok(()),
                    _ => Err("prime list does not match the modulus".into()),
                }
            }
            (Status::NotPrWithRefutation, Evidence::ProductCriterionFails { .. }) => {
                must_fail(pr_product(a).map(|e| e.is_some()), "the product criterion")
            }
            (Status::UnknownUnsupported, Evidence::Unsupported { .. }) => Ok(()),
            _ => Err("status and evidence do not match".into()),
        }
    }

    /// Parse a verdict document produced by [`Verdict::to_json`], returning
    /// the embedded matrix alongside.
    pub fn from_json(v: &Value) -> Result<(Matrix, Verdict)> {
        let a = Matrix::from_json(
            v.get("matrix").ok_or_else(|| Error::invalid("/matrix", "missing matrix"))?,
            "/matrix",
        )?;
        let status = match v.get("status").and_then(Value::as_str) {
            Some("PR-with-witness") => Status::PrWithWitness,
            Some("NotPR-with-refutation") => Status::NotPrWithRefutation,
            Some("Unknown-unsupported") => Status::UnknownUnsupported,
            _ => return Err(Error::invalid("/status", "unknown status")),
        };
        let ev = v.get("evidence").ok_or_else(|| Error::invalid("/evidence", "missing evidence"))?;
        let kind = ev
            .get("kind")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::invalid("/evidence/kind", "missing kind"))?;
        let witness = |m: &Matrix| {
            PartitionWitness::from_json(
                m,
                ev.get("witness").unwrap_or(&Value::Null),
                "/evidence/witness",
            )
        };
        let uint = |name: &str| {
            ev.get(name)
                .and_then(Value::as_u64)
                .ok_or_else(|| Error::invalid(format!("/evidence/{name}"), "expected an integer"))
        };
        let primes = || -> Result<Vec<u64>> {
            ev.get("primes")
                .and_then(Value::as_array)
                .and_then(|a| a.iter().map(Value::as_u64).collect())
                .ok_or_else(|| Error::invalid("/evidence/primes", "expected integers"))
        };
        let evidence = match kind {
            "columns_condition" => Evidence::ColumnsCondition { witness: witness(&a)? },
            "generalised_columns_condition" => Evidence::GeneralisedColumnsCondition { witness: witness(&a)? },
            "prime_quotient" => {
                let prime = uint("prime")?;
                if !arith::is_prime(prime) {
                    return Err(Error::invalid("/evidence/prime", "not a prime"));
                }
                Evidence::PrimeQuotient {
                    prime,
                    witness: witness(&reduce_matrix(&a, prime)?)?,
                }
            }
            "product" => {
                let (prime, block) = (uint("prime")?, uint("block")? as usize);
                let rule = match ev.get("rule").and_then(Value::as_str) {
                    Some("columns_sum_to_zero") => ProductRule::ColumnsSumToZero,
                    Some("columns_condition") => ProductRule::ColumnsCondition,
                    _ => return Err(Error::invalid("/evidence/rule", "unknown rule")),
                };
                let blocks = match a.ring() {
                    RingDescriptor::ProductMod { blocks, .. } => blocks.len(),
                    _ => return Err(Error::invalid("/matrix/ring", "expected a product ring")),
                };
                if !arith::is_prime(prime) || block >= blocks {
                    return Err(Error::invalid("/evidence", "prime or block out of range"));
                }
                let reduced = a.map_into(RingDescriptor::PrimeField(prime), |s| match s {
                    Scalar::Product(v) => Scalar::Residue(v[block] % prime),
                    _ => unreachable!(),
                })?;
                Evidence::Product(ProductEvidence {
                    prime,
                    block,
                    rule,
                    witness: witness(&reduced)?,
                })
            }
            "refutation" => Evidence::Refutation {
                certificate: Box::new(
                    serde_json::from_value(ev.get("certificate").cloned().unwrap_or(Value::Null))
                        .map_err(|e| Error::invalid("/evidence/certificate", e.to_string()))?,
                ),
            },
            "distinct_colouring" => Evidence::DistinctColouring {
                colouring: Colouring::from_json(
                    ev.get("colouring").unwrap_or(&Value::Null),
                    "/evidence/colouring",
                )?,
            },
            "no_columns_condition" => Evidence::NoColumnsCondition,
            "no_prime_quotient" => Evidence::NoPrimeQuotient { primes: primes()? },
            "product_criterion_fails" => Evidence::ProductCriterionFails { primes: primes()? },
            "unsupported" => Evidence::Unsupported {
                reason: ev.get("reason").and_then(Value::as_str).unwrap_or("").to_string(),
            },
            other => return Err(Error::invalid("/evidence/kind", format!("unknown evidence kind {other:?}"))),
        };
        let ring: RingDescriptor = v
            .get("ring")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::invalid("/ring", "missing ring"))?
            .parse()?;
        let matrix_hash = v
            .get("matrix_hash")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::invalid("/matrix_hash", "missing hash"))?
            .to_string();
        Ok((
            a,
            Verdict {
                status,
                ring,
                matrix_hash,
                evidence,
            },
        ))
    }
}

/// Small summary used in reports: `{"status", "kind"}`.
pub fn verdict_summary(v: &Verdict) -> Value {
    let kind = serde_json::to_value(&v.evidence).ok().and_then(|e| e.get("kind").cloned());
    json!({"status": v.status.as_str(), "kind": kind})
}
