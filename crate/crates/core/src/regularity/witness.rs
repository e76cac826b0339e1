use serde::Serialize;
use serde_json::Value;

use super::gcc::powers_stay_infinite;
use crate::algebra::json::scalar_from_json;
use crate::algebra::{Matrix, Scalar};
use crate::error::{Error, Result};

/// An ordered partition `I_0, ..., I_m` of the column indices (0-based)
/// together with the data proving the (generalised) columns condition.
///
/// `combinations[t - 1]` has one coefficient per column and expresses
/// `d_t * sum_{i in I_t} c_i` through the columns of `I_0 .. I_{t-1}`.
/// `multipliers` holds `d_0 .. d_m`; it is absent for the plain columns
/// condition over a field, where every `d_t` is 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartitionWitness {
    pub m: usize,
    pub blocks: Vec<Vec<usize>>,
    pub multipliers: Option<Vec<Scalar>>,
    pub combinations: Vec<Vec<Scalar>>,
}

pub(crate) fn mask_indices(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| mask >> i & 1 == 1).collect()
}

pub(crate) fn indices_mask(ix: &[usize]) -> u64 {
    ix.iter().fold(0, |m, &i| m | 1 << i)
}

impl PartitionWitness {
    /// Check every defining identity of the witness against `a`.
    pub fn check(&self, a: &Matrix) -> std::result::Result<(), String> {
        let ring = a.ring();
        let l = a.ncols();
        if self.blocks.len() != self.m + 1 {
            return Err(format!("expected {} blocks, found {}", self.m + 1, self.blocks.len()));
        }
        if self.combinations.len() != self.m {
            return Err("one combination per block after the first is required".into());
        }
        let mut seen = 0u64;
        for block in &self.blocks {
            if block.is_empty() {
                return Err("empty block".into());
            }
            for &i in block {
                if i >= l || seen >> i & 1 == 1 {
                    return Err(format!("column {i} is out of range or repeated"));
                }
                seen |= 1 << i;
            }
        }
        if seen.count_ones() as usize != l {
            return Err("blocks do not cover every column".into());
        }
        let d: Vec<Scalar> = match &self.multipliers {
            Some(ds) if ds.len() == self.m + 1 => ds.clone(),
            Some(_) => return Err("wrong number of multipliers".into()),
            None => vec![ring.one(); self.m + 1],
        };
        for (t, dt) in d.iter().enumerate() {
            if !ring.contains(dt) || ring.is_zero(dt) {
                return Err(format!("multiplier d_{t} must be a nonzero ring element"));
            }
        }
        let scaled_sum = |t: usize| -> Vec<Scalar> {
            a.column_sum(indices_mask(&self.blocks[t]))
                .iter()
                .map(|x| ring.mul(&d[t], x))
                .collect()
        };
        if scaled_sum(0).iter().any(|x| !ring.is_zero(x)) {
            return Err("d_0 times the sum over I_0 is not zero".into());
        }
        let mut earlier = indices_mask(&self.blocks[0]);
        for t in 1..=self.m {
            let coeffs = &self.combinations[t - 1];
            if coeffs.len() != l {
                return Err(format!("combination {t} needs {l} coefficients"));
            }
            for (j, c) in coeffs.iter().enumerate() {
                if !ring.contains(c) {
                    return Err(format!("coefficient {j} of combination {t} is not in {ring}"));
                }
                if earlier >> j & 1 == 0 && !ring.is_zero(c) {
                    return Err(format!("combination {t} uses column {j} outside earlier blocks"));
                }
            }
            let lhs = scaled_sum(t);
            for (i, row) in a.rows().iter().enumerate() {
                let rhs = ring.sum(&row.iter().zip(coeffs).map(|(x, c)| ring.mul(x, c)).collect::<Vec<_>>());
                if rhs != lhs[i] {
                    return Err(format!("combination {t} fails in row {i}"));
                }
            }
            earlier |= indices_mask(&self.blocks[t]);
        }
        if self.multipliers.is_some() && self.m > 0 {
            let prod = d[1..].iter().fold(ring.one(), |acc, x| ring.mul(&acc, x));
            if !powers_stay_infinite(ring, &d[0], &prod) {
                return Err("d_0 (d_1 ... d_m)^n R is finite for some n".into());
            }
        }
        Ok(())
    }

    /// Parse the JSON form `{"m", "blocks", "multipliers", "combinations"}`.
    pub fn from_json(a: &Matrix, v: &Value, pointer: &str) -> Result<Self> {
        let ring = a.ring();
        let obj = v
            .as_object()
            .ok_or_else(|| Error::invalid(pointer, "expected a witness object"))?;
        let m = obj
            .get("m")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::invalid(format!("{pointer}/m"), "expected an integer"))?
            as usize;
        let blocks = obj
            .get("blocks")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::invalid(format!("{pointer}/blocks"), "expected an array"))?
            .iter()
            .enumerate()
            .map(|(t, b)| {
                b.as_array()
                    .and_then(|ix| ix.iter().map(|x| x.as_u64().map(|u| u as usize)).collect::<Option<Vec<_>>>())
                    .ok_or_else(|| Error::invalid(format!("{pointer}/blocks/{t}"), "expected column indices"))
            })
            .collect::<Result<Vec<_>>>()?;
        let scalars = |v: &Value, ptr: String| -> Result<Vec<Scalar>> {
            v.as_array()
                .ok_or_else(|| Error::invalid(&ptr, "expected an array"))?
                .iter()
                .enumerate()
                .map(|(i, x)| scalar_from_json(ring, x, &format!("{ptr}/{i}")))
                .collect()
        };
        let multipliers = match obj.get("multipliers") {
            None | Some(Value::Null) => None,
            Some(ms) => Some(scalars(ms, format!("{pointer}/multipliers"))?),
        };
        let combinations = obj
            .get("combinations")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::invalid(format!("{pointer}/combinations"), "expected an array"))?
            .iter()
            .enumerate()
            .map(|(t, c)| scalars(c, format!("{pointer}/combinations/{t}")))
            .collect::<Result<Vec<_>>>()?;
        Ok(PartitionWitness {
            m,
            blocks,
            multipliers,
            combinations,
        })
    }
}
