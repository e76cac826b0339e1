//! Linear algebra over the local chain ring `A_(q)`, where
//! `A = (Z/q^e)[x_1..x_d]` with `d <= 2`.
//!
//! Every element of `A` outside `qA` is a non-zero-divisor, so localising at
//! the prime `qA` loses nothing: an element of `A_(q)` is `num / den` with
//! `den` not in `qA`, and `a/1 = b/1` iff `a = b` in `A`. Each nonzero
//! element is a unit times `q^v`, which makes Smith-form elimination with
//! minimal-valuation pivots exact.

use super::ring::{RingDescriptor, Scalar};
use crate::arith;

#[derive(Clone, Debug)]
pub(crate) struct ChainRing {
    q: u64,
    e: u32,
    ring: RingDescriptor,
}

#[derive(Clone, Debug)]
pub(crate) struct Local {
    num: Scalar,
    den: Scalar,
}

impl ChainRing {
    /// The ring `Poly^depth(Z/q^e)` localised at `q`.
    pub fn new(q: u64, e: u32, depth: usize) -> Self {
        let mut ring = RingDescriptor::ModRing(q.pow(e));
        for _ in 0..depth {
            ring = RingDescriptor::poly(ring);
        }
        ChainRing { q, e, ring }
    }

    pub fn ring(&self) -> &RingDescriptor {
        &self.ring
    }

    /// `q`-adic valuation of an element of `A`, capped at `e` (zero maps to `e`).
    pub fn valuation(&self, a: &Scalar) -> u32 {
        fn walk(s: &Scalar, q: u64, e: u32, acc: &mut u32) {
            match s {
                Scalar::Residue(r) if *r != 0 => *acc = (*acc).min(arith::valuation(*r, q)),
                Scalar::Poly(c) => c.iter().for_each(|x| walk(x, q, e, acc)),
                _ => {}
            }
        }
        let mut v = self.e;
        walk(a, self.q, self.e, &mut v);
        v
    }

    /// Divide every coefficient representative by `q^v` (all must be divisible).
    fn shift_down(&self, a: &Scalar, v: u32) -> Scalar {
        let qv = self.q.pow(v);
        fn walk(s: &Scalar, qv: u64) -> Scalar {
            match s {
                Scalar::Residue(r) => Scalar::Residue(r / qv),
                Scalar::Poly(c) => Scalar::Poly(c.iter().map(|x| walk(x, qv)).collect()),
                other => other.clone(),
            }
        }
        walk(a, qv)
    }

    pub fn from_a(&self, a: &Scalar) -> Local {
        Local {
            num: a.clone(),
            den: self.ring.one(),
        }
    }

    pub fn val(&self, x: &Local) -> u32 {
        self.valuation(&x.num)
    }

    pub fn is_zero(&self, x: &Local) -> bool {
        self.ring.is_zero(&x.num)
    }

    fn make(&self, num: Scalar, den: Scalar) -> Local {
        // Constant denominators are units of Z/q^e; fold them into the numerator.
        if let Some(inv) = constant_unit_inverse(&self.ring, &den) {
            return Local {
                num: self.ring.mul(&num, &inv),
                den: self.ring.one(),
            };
        }
        Local { num, den }
    }

    pub fn add(&self, x: &Local, y: &Local) -> Local {
        let r = &self.ring;
        if r.is_zero(&y.num) {
            return x.clone();
        }
        let num = r.add(&r.mul(&x.num, &y.den), &r.mul(&y.num, &x.den));
        self.make(num, r.mul(&x.den, &y.den))
    }

    pub fn sub(&self, x: &Local, y: &Local) -> Local {
        let r = &self.ring;
        if r.is_zero(&y.num) {
            return x.clone();
        }
        let num = r.sub(&r.mul(&x.num, &y.den), &r.mul(&y.num, &x.den));
        self.make(num, r.mul(&x.den, &y.den))
    }

    pub fn mul(&self, x: &Local, y: &Local) -> Local {
        let r = &self.ring;
        self.make(r.mul(&x.num, &y.num), r.mul(&x.den, &y.den))
    }

    /// Some `z` with `y z = x`; requires `val(y) <= val(x)` and `y != 0`.
    pub fn div(&self, x: &Local, y: &Local) -> Local {
        let r = &self.ring;
        let v = self.val(y);
        debug_assert!(v < self.e && self.val(x) >= v);
        let x1 = self.shift_down(&x.num, v);
        let y1 = self.shift_down(&y.num, v);
        self.make(r.mul(&x1, &y.den), r.mul(&x.den, &y1))
    }

    /// Solve `sum_j y_j cols[j] = s` over `A_(q)` and clear denominators:
    /// returns `(delta, Y)` over `A` with `delta` outside `qA` and
    /// `sum_j Y_j cols[j] = delta * s` exactly in `A`.
    pub fn solve(&self, cols: &[Vec<Scalar>], s: &[Scalar]) -> Option<(Scalar, Vec<Scalar>)> {
        let k = s.len();
        let r = cols.len();
        let mut m: Vec<Vec<Local>> = (0..k)
            .map(|i| cols.iter().map(|c| self.from_a(&c[i])).collect())
            .collect();
        let mut b: Vec<Local> = s.iter().map(|x| self.from_a(x)).collect();
        // Column transform: the solution is y = Q z.
        let mut qm: Vec<Vec<Local>> = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| self.from_a(&if i == j { self.ring.one() } else { self.ring.zero() }))
                    .collect()
            })
            .collect();

        let mut rank = 0;
        while rank < k.min(r) {
            let mut best: Option<(u32, usize, usize)> = None;
            for i in rank..k {
                for j in rank..r {
                    if self.is_zero(&m[i][j]) {
                        continue;
                    }
                    let v = self.val(&m[i][j]);
                    if best.is_none_or(|(bv, _, _)| v < bv) {
                        best = Some((v, i, j));
                    }
                }
            }
            let Some((_, pi, pj)) = best else { break };
            m.swap(rank, pi);
            b.swap(rank, pi);
            for row in m.iter_mut() {
                row.swap(rank, pj);
            }
            for row in qm.iter_mut() {
                row.swap(rank, pj);
            }
            let piv = m[rank][rank].clone();
            for i in rank + 1..k {
                if self.is_zero(&m[i][rank]) {
                    continue;
                }
                let f = self.div(&m[i][rank], &piv);
                for j in rank..r {
                    m[i][j] = self.sub(&m[i][j], &self.mul(&f, &m[rank][j]));
                }
                b[i] = self.sub(&b[i], &self.mul(&f, &b[rank]));
            }
            for j in rank + 1..r {
                if self.is_zero(&m[rank][j]) {
                    continue;
                }
                let g = self.div(&m[rank][j], &piv);
                for i in rank..k {
                    m[i][j] = self.sub(&m[i][j], &self.mul(&g, &m[i][rank]));
                }
                for row in qm.iter_mut() {
                    row[j] = self.sub(&row[j], &self.mul(&g, &row[rank]));
                }
            }
            rank += 1;
        }

        if (rank..k).any(|i| !self.is_zero(&b[i])) {
            return None;
        }
        let mut z = Vec::with_capacity(r);
        for i in 0..r {
            if i < rank {
                if self.val(&b[i]) < self.val(&m[i][i]) {
                    return None;
                }
                z.push(if self.is_zero(&b[i]) {
                    self.from_a(&self.ring.zero())
                } else {
                    self.div(&b[i], &m[i][i])
                });
            } else {
                z.push(self.from_a(&self.ring.zero()));
            }
        }
        let y: Vec<Local> = (0..r)
            .map(|i| {
                (0..r).fold(self.from_a(&self.ring.zero()), |acc, j| {
                    self.add(&acc, &self.mul(&qm[i][j], &z[j]))
                })
            })
            .collect();

        let rg = &self.ring;
        let delta = y.iter().fold(rg.one(), |acc, l| rg.mul(&acc, &l.den));
        let big_y: Vec<Scalar> = y
            .iter()
            .enumerate()
            .map(|(j, l)| {
                y.iter()
                    .enumerate()
                    .filter(|(i, _)| *i != j)
                    .fold(l.num.clone(), |acc, (_, o)| rg.mul(&acc, &o.den))
            })
            .collect();
        debug_assert!(self.valuation(&delta) == 0);
        Some((delta, big_y))
    }
}

fn constant_unit_inverse(ring: &RingDescriptor, den: &Scalar) -> Option<Scalar> {
    match den {
        Scalar::Residue(_) => ring.inv(den),
        Scalar::Poly(c) if c.len() == 1 => {
            let RingDescriptor::Poly(base) = ring else { return None };
            constant_unit_inverse(base, &c[0]).map(|i| Scalar::Poly(vec![i]))
        }
        _ => None,
    }
}
