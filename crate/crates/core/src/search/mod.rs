//! Windowed searches for monochromatic solutions, finite witness sets, and
//! empirical validation of refutation certificates.

mod finite;

use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::algebra::json::scalar_to_json;
use crate::algebra::{Matrix, RingDescriptor, Scalar};
use crate::colouring::{integer_matrix, Colouring, RefutationCertificate, ReplayReport};
use crate::error::{Error, Result};

pub use finite::{default_schedule, finite_witness, FiniteWitness, WitnessOutcome, MAX_WITNESS_SIZE};

/// Default number of candidate tuples a search may visit.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// A finite, deterministically ordered piece of a ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SearchWindow {
    /// `1, 2, ..., n`.
    Positive { n: u64 },
    /// `0, 1, -1, 2, -2, ..., n, -n`.
    Symmetric { n: u64 },
    /// `0, 1, ..., n - 1` in `Z/n` or `F_n`.
    Residues { n: u64 },
    /// Polynomials over `F_p` of degree at most `d`; index `i` has the
    /// base-`p` digits of `i` as coefficients.
    FpPolys { p: u64, d: u32 },
}

impl SearchWindow {
    pub fn size(&self) -> Result<u64> {
        match *self {
            SearchWindow::Positive { n } => Ok(n),
            SearchWindow::Symmetric { n } => n
                .checked_mul(2)
                .and_then(|m| m.checked_add(1))
                .ok_or_else(|| Error::BudgetExceeded("window size".into())),
            SearchWindow::Residues { n } => Ok(n),
            SearchWindow::FpPolys { p, d } => p
                .checked_pow(d + 1)
                .ok_or_else(|| Error::BudgetExceeded(format!("{p}^{} polynomials", d + 1))),
        }
    }

    fn is_integral(&self) -> bool {
        matches!(self, SearchWindow::Positive { .. } | SearchWindow::Symmetric { .. })
    }

    /// The `i`-th integer of an integer window.
    fn int_at(&self, i: u64) -> i64 {
        match *self {
            SearchWindow::Positive { .. } => i as i64 + 1,
            SearchWindow::Symmetric { .. } => {
                let k = i.div_ceil(2) as i64;
                if i % 2 == 1 {
                    k
                } else {
                    -k
                }
            }
            _ => unreachable!("integer windows only"),
        }
    }

    /// Position of an integer in an integer window.
    fn int_index(&self, v: i128) -> Option<u64> {
        match *self {
            SearchWindow::Positive { n } => (v >= 1 && v <= n as i128).then(|| (v - 1) as u64),
            SearchWindow::Symmetric { n } => {
                if v.unsigned_abs() > n as u128 {
                    None
                } else if v > 0 {
                    Some(2 * v as u64 - 1)
                } else {
                    Some(2 * (-v) as u64)
                }
            }
            _ => None,
        }
    }

    /// All elements as scalars of `ring`, in window order.
    pub fn elements(&self, ring: &RingDescriptor) -> Result<Vec<Scalar>> {
        let size = self.size()?;
        if size > DEFAULT_BUDGET {
            return Err(Error::BudgetExceeded(format!("window of {size} elements")));
        }
        let mismatch = || Error::invalid("/window", format!("window {self:?} does not lie in {ring}"));
        match (self, ring) {
            (SearchWindow::Positive { .. } | SearchWindow::Symmetric { .. }, RingDescriptor::Integers) => {
                Ok((0..size).map(|i| Scalar::Int(BigInt::from(self.int_at(i)))).collect())
            }
            (SearchWindow::Positive { .. } | SearchWindow::Symmetric { .. }, RingDescriptor::Rationals) => Ok((0..size)
                .map(|i| Scalar::Rat(BigRational::from_integer(BigInt::from(self.int_at(i)))))
                .collect()),
            (SearchWindow::Residues { n }, RingDescriptor::ModRing(m) | RingDescriptor::PrimeField(m)) if n == m => {
                Ok((0..size).map(Scalar::Residue).collect())
            }
            (SearchWindow::FpPolys { p, .. }, RingDescriptor::Poly(base))
                if **base == RingDescriptor::PrimeField(*p) =>
            {
                Ok((0..size)
                    .map(|mut i| {
                        let mut c = Vec::new();
                        while i > 0 {
                            c.push(Scalar::Residue(i % p));
                            i /= p;
                        }
                        Scalar::Poly(c)
                    })
                    .collect())
            }
            _ => Err(mismatch()),
        }
    }
}

/// Whether `m` is a nonzero solution of `A m = 0` with all entries the same colour.
pub fn is_mono_solution(a: &Matrix, chi: &Colouring, m: &[Scalar]) -> Result<bool> {
    let ring = a.ring();
    if m.len() != a.ncols() {
        return Err(Error::DimensionMismatch(format!("{} entries for {} columns", m.len(), a.ncols())));
    }
    if m.iter().all(|x| ring.is_zero(x)) {
        return Ok(false);
    }
    for row in a.rows() {
        let products: Vec<Scalar> = row.iter().zip(m).map(|(c, x)| ring.mul(c, x)).collect();
        if !ring.is_zero(&ring.sum(&products)) {
            return Ok(false);
        }
    }
    let first = chi.colour(&m[0])?;
    for x in &m[1..] {
        if chi.colour(x)? != first {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The first nonzero `chi`-monochromatic solution of `A m = 0` with entries
/// in `w`, in lexicographic order of window positions.
///
/// Integer matrices on integer windows solve for the last variable, so they
/// cost about `|w| * |largest colour class|^(l - 2)` steps; other inputs
/// enumerate all `|w|^l` tuples.
pub fn find_mono_solution(a: &Matrix, chi: &Colouring, w: &SearchWindow, budget: u64) -> Result<Option<Vec<Scalar>>> {
    let elements = w.elements(a.ring())?;
    let colours = elements.iter().map(|x| chi.colour(x)).collect::<Result<Vec<u64>>>()?;
    let found = match small_integer_rows(a)? {
        Some(rows) if w.is_integral() => integer_search(&rows, a.ncols(), w, &colours, budget)?,
        _ => generic_search(a, &elements, &colours, budget)?,
    };
    let Some(idx) = found else { return Ok(None) };
    let m: Vec<Scalar> = idx.iter().map(|&i| elements[i as usize].clone()).collect();
    if !is_mono_solution(a, chi, &m)? {
        return Err(Error::InconsistentData("search returned a vector that is not a monochromatic solution".into()));
    }
    Ok(Some(m))
}

fn small_integer_rows(a: &Matrix) -> Result<Option<Vec<Vec<i64>>>> {
    if !matches!(a.ring(), RingDescriptor::Integers | RingDescriptor::Rationals) {
        return Ok(None);
    }
    let rows = integer_matrix(a)?;
    Ok(rows
        .iter()
        .map(|r| r.iter().map(|x| x.to_i64().filter(|v| v.unsigned_abs() < 1 << 40)).collect())
        .collect())
}

fn colour_buckets(colours: &[u64]) -> std::collections::HashMap<u64, Vec<u64>> {
    let mut buckets: std::collections::HashMap<u64, Vec<u64>> = Default::default();
    for (i, &c) in colours.iter().enumerate() {
        buckets.entry(c).or_default().push(i as u64);
    }
    buckets
}

fn integer_search(rows: &[Vec<i64>], l: usize, w: &SearchWindow, colours: &[u64], budget: u64) -> Result<Option<Vec<u64>>> {
    let size = colours.len() as u64;
    if l == 0 {
        return Ok(None);
    }
    let buckets = colour_buckets(colours);
    let largest = buckets.values().map(Vec::len).max().unwrap_or(0) as u64;
    let cost = (0..l.saturating_sub(2)).try_fold(size, |acc, _| acc.checked_mul(largest));
    if cost.is_none_or(|c| c > budget) {
        return Err(Error::BudgetExceeded(format!(
            "about {size} x {largest}^{} candidate tuples",
            l.saturating_sub(2)
        )));
    }
    let last = l - 1;
    let pivot = rows.iter().position(|r| r[last] != 0);
    let found = (0..size).into_par_iter().find_map_first(|i0| {
        let bucket = &buckets[&colours[i0 as usize]];
        let mut idx = vec![i0; l];
        let mut residual: Vec<i128> = vec![0; rows.len()];
        complete(rows, w, colours, bucket, pivot, &mut idx, &mut residual, 0).then_some(idx)
    });
    Ok(found)
}

/// Depth-first extension of `idx[..=depth]`; the last entry is solved for.
#[allow(clippy::too_many_arguments)]
fn complete(
    rows: &[Vec<i64>],
    w: &SearchWindow,
    colours: &[u64],
    bucket: &[u64],
    pivot: Option<usize>,
    idx: &mut [u64],
    residual: &mut [i128],
    depth: usize,
) -> bool {
    let l = idx.len();
    let v = w.int_at(idx[depth]) as i128;
    for (r, row) in residual.iter_mut().zip(rows) {
        *r += row[depth] as i128 * v;
    }
    let done = if depth + 1 == l {
        residual.iter().all(|&r| r == 0) && idx.iter().any(|&i| w.int_at(i) != 0)
    } else if depth + 2 == l {
        solve_last(rows, w, colours, bucket, pivot, idx, residual)
    } else {
        let mut ok = false;
        for &j in bucket {
            idx[depth + 1] = j;
            if complete(rows, w, colours, bucket, pivot, idx, residual, depth + 1) {
                ok = true;
                break;
            }
        }
        ok
    };
    if !done {
        for (r, row) in residual.iter_mut().zip(rows) {
            *r -= row[depth] as i128 * v;
        }
    }
    done
}

fn solve_last(
    rows: &[Vec<i64>],
    w: &SearchWindow,
    colours: &[u64],
    bucket: &[u64],
    pivot: Option<usize>,
    idx: &mut [u64],
    residual: &[i128],
) -> bool {
    let last = idx.len() - 1;
    let prefix_nonzero = idx[..last].iter().any(|&i| w.int_at(i) != 0);
    match pivot {
        None => {
            if residual.iter().any(|&r| r != 0) {
                return false;
            }
            match bucket.iter().find(|&&j| prefix_nonzero || w.int_at(j) != 0) {
                Some(&j) => {
                    idx[last] = j;
                    true
                }
                None => false,
            }
        }
        Some(k) => {
            let a = rows[k][last] as i128;
            if residual[k] % a != 0 {
                return false;
            }
            let x = -residual[k] / a;
            if (x == 0 && !prefix_nonzero) || rows.iter().zip(residual).any(|(row, r)| r + row[last] as i128 * x != 0) {
                return false;
            }
            match w.int_index(x) {
                Some(j) if colours[j as usize] == colours[idx[0] as usize] => {
                    idx[last] = j;
                    true
                }
                _ => false,
            }
        }
    }
}

fn generic_search(a: &Matrix, elements: &[Scalar], colours: &[u64], budget: u64) -> Result<Option<Vec<u64>>> {
    let l = a.ncols();
    let size = elements.len() as u64;
    let buckets = colour_buckets(colours);
    let largest = buckets.values().map(Vec::len).max().unwrap_or(0) as u64;
    let cost = (0..l.saturating_sub(1)).try_fold(size, |acc, _| acc.checked_mul(largest));
    if l == 0 {
        return Ok(None);
    }
    if cost.is_none_or(|c| c > budget) {
        return Err(Error::BudgetExceeded(format!(
            "about {size} x {largest}^{} candidate tuples",
            l - 1
        )));
    }
    let ring = a.ring();
    let columns = a.columns();
    let found = (0..size).into_par_iter().find_map_first(|i0| {
        let bucket = &buckets[&colours[i0 as usize]];
        let mut idx = vec![i0; l];
        let mut odometer = vec![0usize; l - 1];
        loop {
            for (d, &o) in odometer.iter().enumerate() {
                idx[d + 1] = bucket[o];
            }
            let nonzero = idx.iter().any(|&i| !ring.is_zero(&elements[i as usize]));
            if nonzero && (0..a.nrows()).all(|r| {
                let terms: Vec<Scalar> = (0..l).map(|j| ring.mul(&columns[j][r], &elements[idx[j] as usize])).collect();
                ring.is_zero(&ring.sum(&terms))
            }) {
                return Some(idx);
            }
            let mut d = l - 1;
            loop {
                if d == 0 {
                    return None;
                }
                odometer[d - 1] += 1;
                if odometer[d - 1] < bucket.len() {
                    break;
                }
                odometer[d - 1] = 0;
                d -= 1;
            }
        }
    });
    Ok(found)
}

/// JSON-facing result of a windowed search.
#[derive(Clone, Debug, Serialize)]
pub struct SearchReport {
    pub found: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solution: Option<Vec<Value>>,
    pub window: SearchWindow,
    pub colouring: Colouring,
    pub elapsed_ms: u128,
}

pub fn search_report(a: &Matrix, chi: &Colouring, w: &SearchWindow, budget: u64) -> Result<SearchReport> {
    let start = Instant::now();
    let solution = find_mono_solution(a, chi, w, budget)?;
    Ok(SearchReport {
        found: solution.is_some(),
        solution: solution.map(|m| m.iter().map(|x| scalar_to_json(a.ring(), x)).collect()),
        window: *w,
        colouring: chi.clone(),
        elapsed_ms: start.elapsed().as_millis(),
    })
}

/// Replay of a certificate next to a windowed search under its colouring.
#[derive(Clone, Debug, Serialize)]
pub struct CertificateValidation {
    pub replay: ReplayReport,
    pub search: SearchReport,
    /// The replay is sound and the search found nothing.
    pub consistent: bool,
}

pub fn validate_certificate(cert: &RefutationCertificate, w: &SearchWindow, budget: u64) -> Result<CertificateValidation> {
    let replay = cert.replay();
    let search = search_report(&cert.matrix, &cert.colouring(), w, budget)?;
    Ok(CertificateValidation {
        consistent: replay.sound() && !search.found,
        replay,
        search,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colouring::refute;
    use RingDescriptor::*;

    fn ints(rows: &[Vec<i64>]) -> Matrix {
        Matrix::from_i64(Integers, rows).unwrap()
    }

    fn as_i64(m: &[Scalar]) -> Vec<i64> {
        m.iter()
            .map(|x| match x {
                Scalar::Int(v) => v.to_i64().unwrap(),
                _ => panic!(),
            })
            .collect()
    }

    #[test]
    fn window_order() {
        let w = SearchWindow::Symmetric { n: 2 };
        let e: Vec<i64> = (0..5).map(|i| w.int_at(i)).collect();
        assert_eq!(e, vec![0, 1, -1, 2, -2]);
        for (i, &v) in e.iter().enumerate() {
            assert_eq!(w.int_index(v as i128), Some(i as u64));
        }
        let polys = SearchWindow::FpPolys { p: 3, d: 1 }
            .elements(&RingDescriptor::poly(PrimeField(3)))
            .unwrap();
        assert_eq!(polys.len(), 9);
        assert_eq!(polys[5], Scalar::Poly(vec![Scalar::Residue(2), Scalar::Residue(1)]));
        assert!(SearchWindow::Residues { n: 5 }.elements(&ModRing(6)).is_err());
    }

    #[test]
    fn schur_under_c2() {
        let m = find_mono_solution(&ints(&[vec![1, 1, -1]]), &Colouring::Cp { p: 2 }, &SearchWindow::Positive { n: 20 }, DEFAULT_BUDGET)
            .unwrap()
            .unwrap();
        // Every least nonzero binary digit is 1, so c_2 is constant.
        assert_eq!(as_i64(&m), vec![1, 1, 2]);
        let m = find_mono_solution(&ints(&[vec![1, 1, -1]]), &Colouring::Cp { p: 3 }, &SearchWindow::Positive { n: 20 }, DEFAULT_BUDGET)
            .unwrap()
            .unwrap();
        assert_eq!(as_i64(&m), vec![1, 3, 4]);
    }

    #[test]
    fn trivial_equation() {
        let chi = Colouring::Cp { p: 3 };
        let m = find_mono_solution(&ints(&[vec![1, -1]]), &chi, &SearchWindow::Symmetric { n: 4 }, DEFAULT_BUDGET)
            .unwrap()
            .unwrap();
        assert_eq!(as_i64(&m), vec![1, 1]);
    }

    #[test]
    fn no_solution_under_refuting_colouring() {
        let a = ints(&[vec![1, 1, -3]]);
        let chi = Colouring::Cp { p: 5 };
        assert_eq!(find_mono_solution(&a, &chi, &SearchWindow::Symmetric { n: 300 }, DEFAULT_BUDGET).unwrap(), None);
        let cert = refute(&a).unwrap().unwrap();
        let v = validate_certificate(&cert, &SearchWindow::Positive { n: 1000 }, DEFAULT_BUDGET).unwrap();
        assert!(v.consistent);
    }

    #[test]
    fn fast_path_matches_generic() {
        let chi = Colouring::Cp { p: 3 };
        for rows in [vec![vec![1, 2, -3]], vec![vec![1, 1, -1, -1]], vec![vec![1, -1, 0], vec![0, 2, -2]], vec![vec![2, 0]]] {
            let a = ints(&rows);
            for w in [SearchWindow::Positive { n: 12 }, SearchWindow::Symmetric { n: 6 }] {
                let rows = small_integer_rows(&a).unwrap().unwrap();
                let elements = w.elements(&Integers).unwrap();
                let colours: Vec<u64> = elements.iter().map(|x| chi.colour(x).unwrap_or(0)).collect();
                let fast = integer_search(&rows, a.ncols(), &w, &colours, DEFAULT_BUDGET).unwrap();
                let slow = generic_search(&a, &elements, &colours, DEFAULT_BUDGET).unwrap();
                assert_eq!(fast, slow, "{rows:?} {w:?}");
            }
        }
    }

    #[test]
    fn finite_rings_and_polynomials() {
        let a = Matrix::from_i64(ModRing(4), &[vec![1, 1, 1]]).unwrap();
        let chi = Colouring::Residue {
            ring: ModRing(4),
            modulus: Scalar::Residue(0),
        };
        assert_eq!(find_mono_solution(&a, &chi, &SearchWindow::Residues { n: 4 }, DEFAULT_BUDGET).unwrap(), None);
        let r = RingDescriptor::poly(PrimeField(2));
        let a = Matrix::from_i64(r.clone(), &[vec![1, 1, 1]]).unwrap();
        let m = find_mono_solution(&a, &Colouring::MFpx { p: 2 }, &SearchWindow::FpPolys { p: 2, d: 2 }, DEFAULT_BUDGET)
            .unwrap()
            .unwrap();
        assert!(is_mono_solution(&a, &Colouring::MFpx { p: 2 }, &m).unwrap());
    }

    #[test]
    fn budget_is_enforced() {
        let a = ints(&[vec![1, 1, 1, -3]]);
        let err = find_mono_solution(&a, &Colouring::Constant { colour: 0 }, &SearchWindow::Positive { n: 10_000 }, 1_000_000);
        assert!(matches!(err, Err(Error::BudgetExceeded(_))));
    }
}
