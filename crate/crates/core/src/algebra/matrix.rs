use num_bigint::BigInt;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use super::json::{scalar_from_json, scalar_to_json};
use super::ring::{RingDescriptor, Scalar};
use crate::error::{Error, Result};

/// A `k x l` coefficient matrix over a ring; columns are the vectors
/// `c_1, ..., c_l` of the system `A x = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    ring: RingDescriptor,
    rows: Vec<Vec<Scalar>>,
    ncols: usize,
}

impl Matrix {
    pub fn new(ring: RingDescriptor, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        ring.validate()?;
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.is_empty() || ncols == 0 {
            return Err(Error::invalid("/rows", "matrix must have at least one row and column"));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != ncols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {ncols}",
                    row.len()
                )));
            }
            for (j, x) in row.iter().enumerate() {
                if !ring.contains(x) {
                    return Err(Error::invalid(
                        format!("/rows/{i}/{j}"),
                        format!("{x} is not a canonical element of {ring}"),
                    ));
                }
            }
        }
        Ok(Matrix { ring, rows, ncols })
    }

    /// Integer matrix mapped into `ring` by the canonical homomorphism.
    pub fn from_i64(ring: RingDescriptor, rows: &[Vec<i64>]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&x| ring.from_i64(x)).collect())
            .collect();
        Matrix::new(ring, rows)
    }

    pub fn ring(&self) -> &RingDescriptor {
        &self.ring
    }

    pub fn rows(&self) -> &[Vec<Scalar>] {
        &self.rows
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn entry(&self, i: usize, j: usize) -> &Scalar {
        &self.rows[i][j]
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        self.rows.iter().map(|r| r[j].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Scalar>> {
        (0..self.ncols).map(|j| self.column(j)).collect()
    }

    /// Sum of the columns whose indices are set in `mask`.
    pub fn column_sum(&self, mask: u64) -> Vec<Scalar> {
        self.rows
            .iter()
            .map(|row| {
                self.ring.sum(
                    row.iter()
                        .enumerate()
                        .filter(|(j, _)| mask >> j & 1 == 1)
                        .map(|(_, x)| x),
                )
            })
            .collect()
    }

    /// Apply `f` entrywise, landing in `target`.
    pub fn map_into(
        &self,
        target: RingDescriptor,
        f: impl Fn(&Scalar) -> Scalar,
    ) -> Result<Matrix> {
        let rows = self
            .rows
            .iter()
            .map(|r| r.iter().map(&f).collect())
            .collect();
        Matrix::new(target, rows)
    }

    /// Entries as integers, when the ring is `Z`.
    pub fn integer_rows(&self) -> Option<Vec<Vec<BigInt>>> {
        self.rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|x| match x {
                        Scalar::Int(v) => Some(v.clone()),
                        _ => None,
                    })
                    .collect()
            })
            .collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "ring": self.ring.to_string(),
            "rows": self
                .rows
                .iter()
                .map(|r| r.iter().map(|x| scalar_to_json(&self.ring, x)).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        })
    }

    /// Parse `{"ring": ..., "rows": [[...]]}`.
    pub fn from_json(v: &Value, pointer: &str) -> Result<Matrix> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::invalid(pointer, "expected an object with ring and rows"))?;
        let ring: RingDescriptor = obj
            .get("ring")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::invalid(format!("{pointer}/ring"), "expected a ring string"))?
            .parse()
            .map_err(|e| match e {
                Error::InvalidInput { message, .. } => {
                    Error::invalid(format!("{pointer}/ring"), message)
                }
                other => other,
            })?;
        let rows = obj
            .get("rows")
            .ok_or_else(|| Error::invalid(format!("{pointer}/rows"), "missing rows"))?;
        Matrix::parse_rows(ring, rows, &format!("{pointer}/rows"))
    }

    /// Parse a bare array of rows over a known ring.
    pub fn parse_rows(ring: RingDescriptor, v: &Value, pointer: &str) -> Result<Matrix> {
        let rows = v
            .as_array()
            .ok_or_else(|| Error::invalid(pointer, "expected an array of rows"))?;
        let parsed = rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let entries = r
                    .as_array()
                    .ok_or_else(|| Error::invalid(format!("{pointer}/{i}"), "expected a row array"))?;
                entries
                    .iter()
                    .enumerate()
                    .map(|(j, x)| scalar_from_json(&ring, x, &format!("{pointer}/{i}/{j}")))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Matrix::new(ring, parsed)
    }

    /// SHA-256 of the canonical JSON encoding, hex encoded.
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.to_json().to_string().as_bytes());
        hex::encode(digest)
    }
}

impl serde::Serialize for Matrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> serde::Deserialize<'de> for Matrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        Matrix::from_json(&v, "").map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip_and_hash_stability() {
        let m = Matrix::from_i64("mod:4".parse().unwrap(), &[vec![1, 1, -1]]).unwrap();
        assert_eq!(m.to_json(), json!({"ring": "mod:4", "rows": [["1", "1", "3"]]}));
        let back = Matrix::from_json(&m.to_json(), "").unwrap();
        assert_eq!(back, m);
        assert_eq!(back.hash(), m.hash());
        assert_eq!(m.hash().len(), 64);
    }

    #[test]
    fn ragged_rows_are_rejected() {
        let v = json!({"ring": "Z", "rows": [[1, 2], [3]]});
        assert!(matches!(
            Matrix::from_json(&v, ""),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn column_sums() {
        let m = Matrix::from_i64(RingDescriptor::Integers, &[vec![1, 1, -1], vec![0, 2, 5]]).unwrap();
        assert_eq!(
            m.column_sum(0b101),
            vec![Scalar::Int(0.into()), Scalar::Int(5.into())]
        );
    }
}
