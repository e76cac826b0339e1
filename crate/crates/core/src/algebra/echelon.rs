//! Division-free elimination over an integral domain.
//!
//! Everything here decides questions about the span over the fraction field
//! while only multiplying and subtracting inside the domain, so it applies
//! to every domain descriptor (including bivariate polynomial rings).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::ring::{RingDescriptor, Scalar};

/// An echelon basis over a domain `D`. Rows are kept with strictly
/// increasing pivot columns; no division is ever performed.
#[derive(Clone, Debug)]
pub(crate) struct FreeEchelon {
    ring: RingDescriptor,
    dim: usize,
    rows: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl FreeEchelon {
    pub fn new(ring: RingDescriptor, dim: usize) -> Self {
        FreeEchelon {
            ring,
            dim,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    #[cfg(test)]
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// A `D`-linear map whose kernel is the span (over the fraction field)
    /// of the rows inserted so far.
    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        let d = &self.ring;
        let mut out = v.to_vec();
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let piv = &row[pc];
            let c = out[pc].clone();
            let unit_pivot = d.is_one(piv);
            for j in 0..self.dim {
                let scaled = if unit_pivot { out[j].clone() } else { d.mul(piv, &out[j]) };
                out[j] = if d.is_zero(&c) {
                    scaled
                } else {
                    d.sub(&scaled, &d.mul(&c, &row[j]))
                };
            }
        }
        out
    }

    /// Insert a vector; returns whether the rank grew.
    pub fn insert(&mut self, v: &[Scalar]) -> bool {
        let r = self.reduce(v);
        let Some(pc) = r.iter().position(|x| !self.ring.is_zero(x)) else {
            return false;
        };
        let row = normalize_row(&self.ring, r, pc);
        let at = self.pivots.partition_point(|&p| p < pc);
        self.rows.insert(at, row);
        self.pivots.insert(at, pc);
        true
    }

    #[cfg(test)]
    pub fn is_zero_vector(&self, v: &[Scalar]) -> bool {
        v.iter().all(|x| self.ring.is_zero(x))
    }
}

/// Scale a row so that its entries stay small: monic pivot over fields,
/// primitive with positive pivot over `Z`.
fn normalize_row(ring: &RingDescriptor, row: Vec<Scalar>, pc: usize) -> Vec<Scalar> {
    if ring.is_field() {
        let inv = ring.inv(&row[pc]).expect("nonzero");
        return row.iter().map(|x| ring.mul(&inv, x)).collect();
    }
    if let RingDescriptor::Integers = ring {
        let ints: Vec<&BigInt> = row
            .iter()
            .map(|x| match x {
                Scalar::Int(v) => v,
                _ => unreachable!(),
            })
            .collect();
        let mut g = ints.iter().fold(BigInt::zero(), |g, v| g.gcd(v));
        if ints[pc].is_negative() {
            g = -g;
        }
        if !g.is_one() {
            return ints.iter().map(|v| Scalar::Int(*v / &g)).collect();
        }
    }
    row
}

/// Solve `sum_j Y_j cols[j] = delta * s` with `Y` over `D` and `delta != 0`.
///
/// Columns that are not pivots of the elimination get weight zero, so the
/// answer is canonical. Over a field the result has `delta = 1`; over `Z`
/// it is primitive with `delta > 0`.
pub(crate) fn solve_fraction_free(
    ring: &RingDescriptor,
    cols: &[Vec<Scalar>],
    s: &[Scalar],
) -> Option<(Scalar, Vec<Scalar>)> {
    let d = ring;
    let k = s.len();
    let r = cols.len();
    let mut a: Vec<Vec<Scalar>> = (0..k)
        .map(|i| {
            let mut row: Vec<Scalar> = cols.iter().map(|c| c[i].clone()).collect();
            row.push(s[i].clone());
            row
        })
        .collect();

    let mut pivots: Vec<usize> = Vec::new();
    let mut pr = 0;
    for c in 0..r {
        if pr == k {
            break;
        }
        let Some(p) = (pr..k).find(|&i| !d.is_zero(&a[i][c])) else {
            continue;
        };
        a.swap(pr, p);
        for i in pr + 1..k {
            if d.is_zero(&a[i][c]) {
                continue;
            }
            let f = a[i][c].clone();
            let piv = a[pr][c].clone();
            for j in c..=r {
                a[i][j] = d.sub(&d.mul(&piv, &a[i][j]), &d.mul(&f, &a[pr][j]));
            }
        }
        pivots.push(c);
        pr += 1;
    }
    if (pr..k).any(|i| !d.is_zero(&a[i][r])) {
        return None;
    }

    let mut delta = d.one();
    let mut y = vec![d.zero(); r];
    for (row, &pc) in pivots.iter().enumerate().rev() {
        let mut t = d.mul(&delta, &a[row][r]);
        for j in pc + 1..r {
            t = d.sub(&t, &d.mul(&a[row][j], &y[j]));
        }
        let piv = &a[row][pc];
        for yj in y.iter_mut() {
            *yj = d.mul(piv, yj);
        }
        delta = d.mul(piv, &delta);
        y[pc] = t;
    }
    Some(normalize_solution(d, delta, y))
}

fn normalize_solution(d: &RingDescriptor, delta: Scalar, y: Vec<Scalar>) -> (Scalar, Vec<Scalar>) {
    if d.is_field() {
        let inv = d.inv(&delta).expect("nonzero");
        return (d.one(), y.iter().map(|x| d.mul(&inv, x)).collect());
    }
    if let (RingDescriptor::Integers, Scalar::Int(dv)) = (d, &delta) {
        let mut g = y.iter().fold(dv.clone(), |g, x| match x {
            Scalar::Int(v) => g.gcd(v),
            _ => unreachable!(),
        });
        if dv.is_negative() {
            g = -g;
        }
        let div = |x: &Scalar| match x {
            Scalar::Int(v) => Scalar::Int(v / &g),
            _ => unreachable!(),
        };
        return (div(&delta), y.iter().map(div).collect());
    }
    (delta, y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use RingDescriptor::*;

    fn z(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&x| Integers.from_i64(x)).collect()
    }

    #[test]
    fn reduce_vanishes_exactly_on_the_span() {
        let mut e = FreeEchelon::new(Integers, 3);
        assert!(e.insert(&z(&[2, 4, 0])));
        assert!(e.insert(&z(&[0, 3, 3])));
        assert!(!e.insert(&z(&[1, 5, 3])));
        assert!(e.is_zero_vector(&e.reduce(&z(&[1, -1, -3]))));
        assert!(!e.is_zero_vector(&e.reduce(&z(&[0, 0, 1]))));
        assert_eq!(e.rank(), 2);
    }

    #[test]
    fn solve_returns_integral_combination() {
        let cols = vec![z(&[2, 0]), z(&[0, 3])];
        let (delta, y) = solve_fraction_free(&Integers, &cols, &z(&[1, 1])).unwrap();
        assert_eq!(delta, Integers.from_i64(6));
        assert_eq!(y, z(&[3, 2]));
        assert!(solve_fraction_free(&Integers, &[z(&[1, 0])], &z(&[0, 1])).is_none());
    }

    #[test]
    fn solve_over_polynomials() {
        let r = RingDescriptor::poly(Integers);
        let x = Scalar::Poly(z(&[0, 1]));
        let cols = vec![vec![x.clone()]];
        let (delta, y) = solve_fraction_free(&r, &cols, &[r.one()]).unwrap();
        assert_eq!(r.mul(&y[0], &x), delta);
    }
}
