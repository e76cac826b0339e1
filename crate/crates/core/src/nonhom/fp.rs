//! Dense linear algebra over `F_p` with `u64` entries.

use crate::arith::{add_mod, inv_mod, mul_mod, sub_mod};

/// Row-reduce in place; returns pivot columns. Zero rows are dropped.
pub(crate) fn rref(p: u64, rows: &mut Vec<Vec<u64>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(i) = (r..rows.len()).find(|&i| rows[i][c] != 0) else { continue };
        rows.swap(r, i);
        let inv = inv_mod(rows[r][c], p).expect("nonzero entry of a prime field");
        for x in rows[r].iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let f = row[c];
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x = sub_mod(*x, mul_mod(f, *y, p), p);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// Basis of `{x : M x = 0}` for `M` given by rows of length `ncols`.
pub(crate) fn nullspace(p: u64, rows: &[Vec<u64>], ncols: usize) -> Vec<Vec<u64>> {
    let mut m = rows.to_vec();
    let pivots = rref(p, &mut m, ncols);
    (0..ncols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![0; ncols];
            v[free] = 1;
            for (row, &pc) in m.iter().zip(&pivots) {
                v[pc] = sub_mod(0, row[free], p);
            }
            v
        })
        .collect()
}

/// `M v`.
pub(crate) fn mat_vec(p: u64, m: &[Vec<u64>], v: &[u64]) -> Vec<u64> {
    m.iter()
        .map(|row| row.iter().zip(v).fold(0, |acc, (a, b)| add_mod(acc, mul_mod(*a, *b, p), p)))
        .collect()
}

pub(crate) fn transpose(m: &[Vec<u64>], ncols: usize) -> Vec<Vec<u64>> {
    (0..ncols).map(|j| m.iter().map(|row| row[j]).collect()).collect()
}

pub(crate) fn axpy(p: u64, acc: &mut [u64], c: u64, v: &[u64]) {
    if c == 0 {
        return;
    }
    for (x, y) in acc.iter_mut().zip(v) {
        *x = add_mod(*x, mul_mod(c, *y, p), p);
    }
}

/// A subspace of `F_p^dim` kept in reduced row echelon form.
#[derive(Clone, Debug)]
pub(crate) struct FpSpace {
    p: u64,
    dim: usize,
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

impl FpSpace {
    pub fn new(p: u64, dim: usize) -> Self {
        FpSpace {
            p,
            dim,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn span(p: u64, dim: usize, vectors: &[Vec<u64>]) -> Self {
        let mut rows = vectors.to_vec();
        let pivots = rref(p, &mut rows, dim);
        FpSpace { p, dim, rows, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vec<u64>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// `v` minus its projection along the pivots.
    pub fn reduce(&self, v: &[u64]) -> Vec<u64> {
        let mut out = v.to_vec();
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            let f = out[c];
            if f != 0 {
                for (x, y) in out.iter_mut().zip(row) {
                    *x = sub_mod(*x, mul_mod(f, *y, self.p), self.p);
                }
            }
        }
        out
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Coefficients of `v` on the echelon basis, if `v` lies in the space.
    pub fn coordinates(&self, v: &[u64]) -> Option<Vec<u64>> {
        self.contains(v).then(|| self.pivots.iter().map(|&c| v[c]).collect())
    }

    /// Add `v`; returns whether the rank grew.
    pub fn insert(&mut self, v: &[u64]) -> bool {
        if self.contains(v) {
            return false;
        }
        let mut rows = std::mem::take(&mut self.rows);
        rows.push(v.to_vec());
        self.pivots = rref(self.p, &mut rows, self.dim);
        self.rows = rows;
        true
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.dim
    }
}

/// Coefficients `c` with `sum_j c_j cols[j] = target`, if any.
pub(crate) fn solve(p: u64, cols: &[Vec<u64>], target: &[u64]) -> Option<Vec<u64>> {
    let n = cols.len();
    let mut rows: Vec<Vec<u64>> = (0..target.len())
        .map(|i| cols.iter().map(|c| c[i]).chain(std::iter::once(target[i])).collect())
        .collect();
    let pivots = rref(p, &mut rows, n + 1);
    if pivots.last() == Some(&n) {
        return None;
    }
    let mut x = vec![0; n];
    for (row, &c) in rows.iter().zip(&pivots) {
        x[c] = row[n];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nullspace_is_annihilated() {
        let m = vec![vec![1, 2, 0, 1], vec![2, 4, 1, 0]];
        let ns = nullspace(5, &m, 4);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(mat_vec(5, &m, v).iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn space_membership_and_solve() {
        let mut s = FpSpace::new(3, 3);
        assert!(s.insert(&[1, 1, 0]));
        assert!(s.insert(&[0, 1, 1]));
        assert!(!s.insert(&[1, 2, 1]));
        assert!(s.contains(&[2, 0, 1]));
        let c = solve(3, &[vec![1, 1, 0], vec![0, 1, 1]], &[1, 0, 2]).unwrap();
        assert_eq!(c, vec![1, 2]);
        assert!(solve(3, &[vec![1, 1, 0]], &[0, 0, 1]).is_none());
    }
}
