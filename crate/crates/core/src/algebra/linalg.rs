//! Linear algebra over field descriptors, and the embedding of a domain
//! into its fraction field.

use super::matrix::Matrix;
use super::poly;
use super::ring::{RingDescriptor, Scalar};
use crate::error::{Error, Result};

fn require_field(ring: &RingDescriptor) -> Result<()> {
    if ring.is_field() {
        Ok(())
    } else {
        Err(Error::NonFieldDescriptor(ring.to_string()))
    }
}

/// Reduce rows in place to reduced row echelon form, choosing the leftmost
/// pivot column and the first nonzero row in it. Returns the pivot columns.
pub(crate) fn rref_rows(field: &RingDescriptor, rows: &mut [Vec<Scalar>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !field.is_zero(&rows[i][c])) else {
            continue;
        };
        rows.swap(r, p);
        let inv = field.inv(&rows[r][c]).expect("nonzero field element");
        for x in rows[r].iter_mut() {
            *x = field.mul(x, &inv);
        }
        for i in 0..rows.len() {
            if i != r && !field.is_zero(&rows[i][c]) {
                let f = rows[i][c].clone();
                for j in 0..ncols {
                    let t = field.mul(&f, &rows[r][j]);
                    rows[i][j] = field.sub(&rows[i][j], &t);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Reduced row echelon form and rank.
pub fn rref(m: &Matrix) -> Result<(Matrix, usize)> {
    require_field(m.ring())?;
    let mut rows = m.rows().to_vec();
    let pivots = rref_rows(m.ring(), &mut rows, m.ncols());
    Ok((Matrix::new(m.ring().clone(), rows)?, pivots.len()))
}

/// Basis of `{x : M x = 0}`, one vector per free column in increasing order.
pub fn nullspace(m: &Matrix) -> Result<Vec<Vec<Scalar>>> {
    require_field(m.ring())?;
    let field = m.ring();
    let mut rows = m.rows().to_vec();
    let pivots = rref_rows(field, &mut rows, m.ncols());
    let free = (0..m.ncols()).filter(|c| !pivots.contains(c));
    Ok(free
        .map(|f| {
            let mut v = vec![field.zero(); m.ncols()];
            v[f] = field.one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = field.neg(&rows[r][f]);
            }
            v
        })
        .collect())
}

/// A subspace of `K^dim` held as a reduced row echelon basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    field: RingDescriptor,
    dim: usize,
    basis: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(field: RingDescriptor, dim: usize) -> Result<Self> {
        require_field(&field)?;
        Ok(Subspace {
            field,
            dim,
            basis: Vec::new(),
            pivots: Vec::new(),
        })
    }

    pub fn span(field: RingDescriptor, dim: usize, vectors: &[Vec<Scalar>]) -> Result<Self> {
        let mut s = Subspace::zero(field, dim)?;
        for v in vectors {
            s.check_dim(v)?;
        }
        let mut rows = vectors.to_vec();
        let pivots = rref_rows(&s.field, &mut rows, dim);
        rows.truncate(pivots.len());
        s.basis = rows;
        s.pivots = pivots;
        Ok(s)
    }

    fn check_dim(&self, v: &[Scalar]) -> Result<()> {
        if v.len() == self.dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(format!(
                "vector of length {} in a space of dimension {}",
                v.len(),
                self.dim
            )))
        }
    }

    pub fn field(&self) -> &RingDescriptor {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// `v` minus its component along the basis; zero exactly on the span.
    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        let f = &self.field;
        let mut out = v.to_vec();
        for (row, &pc) in self.basis.iter().zip(&self.pivots) {
            if f.is_zero(&out[pc]) {
                continue;
            }
            let c = out[pc].clone();
            for j in 0..self.dim {
                out[j] = f.sub(&out[j], &f.mul(&c, &row[j]));
            }
        }
        out
    }

    pub fn contains(&self, v: &[Scalar]) -> Result<bool> {
        self.check_dim(v)?;
        Ok(self.reduce(v).iter().all(|x| self.field.is_zero(x)))
    }

    /// Coefficients of `v` in the echelon basis, if `v` lies in the span.
    pub fn coordinates(&self, v: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
        if !self.contains(v)? {
            return Ok(None);
        }
        Ok(Some(self.pivots.iter().map(|&pc| v[pc].clone()).collect()))
    }

    /// Add a vector; returns whether the rank grew.
    pub fn insert(&mut self, v: &[Scalar]) -> Result<bool> {
        self.check_dim(v)?;
        if self.contains(v)? {
            return Ok(false);
        }
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        let pivots = rref_rows(&self.field, &mut rows, self.dim);
        rows.truncate(pivots.len());
        self.basis = rows;
        self.pivots = pivots;
        Ok(true)
    }
}

/// Whether `v` lies in the span of `vectors`.
pub fn span_contains(field: &RingDescriptor, vectors: &[Vec<Scalar>], v: &[Scalar]) -> Result<bool> {
    let dim = v.len();
    Subspace::span(field.clone(), dim, vectors)?.contains(v)
}

/// Solve `sum_j y_j cols[j] = s` over a field, with zero weight on every
/// column that is not a pivot column of `[cols | s]`.
pub fn solve(field: &RingDescriptor, cols: &[Vec<Scalar>], s: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
    require_field(field)?;
    let k = s.len();
    let r = cols.len();
    let mut rows: Vec<Vec<Scalar>> = (0..k)
        .map(|i| {
            let mut row: Vec<Scalar> = cols.iter().map(|c| c[i].clone()).collect();
            row.push(s[i].clone());
            row
        })
        .collect();
    let pivots = rref_rows(field, &mut rows, r + 1);
    if pivots.last() == Some(&r) {
        return Ok(None);
    }
    let mut y = vec![field.zero(); r];
    for (i, &pc) in pivots.iter().enumerate() {
        y[pc] = rows[i][r].clone();
    }
    Ok(Some(y))
}

/// The fraction field of a domain.
pub fn fraction_field(ring: &RingDescriptor) -> Result<RingDescriptor> {
    use RingDescriptor::*;
    if !ring.is_domain() {
        return Err(Error::NotADomain(ring.to_string()));
    }
    match ring {
        Integers => Ok(Rationals),
        Poly(base) => match &**base {
            Integers | Rationals => Ok(RationalFunctions(Box::new(Rationals))),
            PrimeField(p) | ModRing(p) => Ok(RationalFunctions(Box::new(PrimeField(*p)))),
            _ => Err(Error::UnsupportedRing(format!(
                "fraction field of {ring} (only univariate polynomials are supported)"
            ))),
        },
        field => Ok(field.clone()),
    }
}

/// Map an element of a domain into its fraction field.
pub fn fraction_field_embed(ring: &RingDescriptor, x: &Scalar) -> Result<(RingDescriptor, Scalar)> {
    let target = fraction_field(ring)?;
    let image = embed_into(ring, &target, x);
    Ok((target, image))
}

pub(crate) fn embed_into(ring: &RingDescriptor, target: &RingDescriptor, x: &Scalar) -> Scalar {
    use RingDescriptor::*;
    match (ring, target, x) {
        (Integers, Rationals, Scalar::Int(v)) => target.from_bigint(v),
        (Poly(base), RationalFunctions(tb), Scalar::Poly(c)) => {
            let num = c.iter().map(|a| coefficient_into(base, tb, a)).collect();
            Scalar::Frac(poly::trim(tb, num), vec![tb.one()])
        }
        _ => x.clone(),
    }
}

fn coefficient_into(base: &RingDescriptor, target: &RingDescriptor, a: &Scalar) -> Scalar {
    match (base, a) {
        (RingDescriptor::Integers, Scalar::Int(v)) => target.from_bigint(v),
        _ => a.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;
    use RingDescriptor::*;

    fn q(rows: &[Vec<i64>]) -> Matrix {
        Matrix::from_i64(Rationals, rows).unwrap()
    }

    fn vq(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&x| Rationals.from_i64(x)).collect()
    }

    #[test]
    fn rref_ranks() {
        assert_eq!(rref(&q(&[vec![1, 1, -1], vec![0, 0, 0]])).unwrap().1, 1);
        let id = Matrix::from_i64(PrimeField(2), &[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
        let (r, rank) = rref(&id).unwrap();
        assert_eq!(rank, 3);
        assert_eq!(r, id);
        assert_eq!(rref(&q(&[vec![1, 2], vec![2, 4]])).unwrap().1, 1);
        assert!(matches!(
            rref(&Matrix::from_i64(ModRing(4), &[vec![1]]).unwrap()),
            Err(Error::NonFieldDescriptor(_))
        ));
    }

    #[test]
    fn span_membership() {
        assert!(span_contains(&Rationals, &[vq(&[1, 0])], &vq(&[3, 0])).unwrap());
        assert!(span_contains(&Rationals, &[], &vq(&[0, 0])).unwrap());
        assert!(!span_contains(&Rationals, &[], &vq(&[0, 1])).unwrap());
        assert!(span_contains(&Rationals, &[vq(&[1, 1, 0]), vq(&[0, 1, 1])], &vq(&[1, 0, -1])).unwrap());
        assert!(matches!(
            span_contains(&Rationals, &[vq(&[1, 0])], &vq(&[1, 0, 0])),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn solve_prefers_pivot_columns() {
        let y = solve(&Rationals, &[vq(&[1]), vq(&[-1])], &vq(&[1])).unwrap().unwrap();
        assert_eq!(y, vq(&[1, 0]));
        assert_eq!(solve(&Rationals, &[vq(&[1, 0])], &vq(&[0, 1])).unwrap(), None);
    }

    #[test]
    fn nullspace_is_annihilated() {
        let m = q(&[vec![1, 1, -1], vec![0, 1, 2]]);
        let ns = nullspace(&m).unwrap();
        assert_eq!(ns.len(), 1);
        for row in m.rows() {
            let dot = Rationals.sum(&row.iter().zip(&ns[0]).map(|(a, b)| Rationals.mul(a, b)).collect::<Vec<_>>());
            assert!(Rationals.is_zero(&dot));
        }
    }

    #[test]
    fn fraction_field_embeddings() {
        let (f, x) = fraction_field_embed(&Integers, &Integers.from_i64(6)).unwrap();
        assert_eq!(f, Rationals);
        assert_eq!(super::super::json::scalar_to_json(&f, &x), json!("6"));

        let f2x = RingDescriptor::poly(PrimeField(2));
        let x_plus_1 = Scalar::Poly(vec![Scalar::Residue(1), Scalar::Residue(1)]);
        let (k, e) = fraction_field_embed(&f2x, &x_plus_1).unwrap();
        assert_eq!(k, RationalFunctions(Box::new(PrimeField(2))));
        assert_eq!(e, Scalar::Frac(vec![Scalar::Residue(1), Scalar::Residue(1)], vec![Scalar::Residue(1)]));

        let f3x = RingDescriptor::poly(PrimeField(3));
        let p = |c: &[u64]| Scalar::Poly(c.iter().map(|&v| Scalar::Residue(v)).collect());
        let (k, num) = fraction_field_embed(&f3x, &p(&[2, 0, 1])).unwrap();
        let (_, den) = fraction_field_embed(&f3x, &p(&[2, 1])).unwrap();
        let (_, expect) = fraction_field_embed(&f3x, &p(&[1, 1])).unwrap();
        assert_eq!(k.div(&num, &den), expect);

        assert!(matches!(
            fraction_field_embed(&ModRing(6), &Scalar::Residue(1)),
            Err(Error::NotADomain(_))
        ));
    }
}
