//! Dense univariate polynomials over a base ring, stored as ascending
//! coefficient vectors without trailing zeros.

use super::ring::{RingDescriptor, Scalar};

pub(crate) fn trim(base: &RingDescriptor, mut c: Vec<Scalar>) -> Vec<Scalar> {
    while c.last().is_some_and(|x| base.is_zero(x)) {
        c.pop();
    }
    c
}

pub(crate) fn add(base: &RingDescriptor, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let n = a.len().max(b.len());
    let zero = base.zero();
    let out = (0..n)
        .map(|i| base.add(a.get(i).unwrap_or(&zero), b.get(i).unwrap_or(&zero)))
        .collect();
    trim(base, out)
}

pub(crate) fn neg(base: &RingDescriptor, a: &[Scalar]) -> Vec<Scalar> {
    a.iter().map(|x| base.neg(x)).collect()
}

pub(crate) fn mul(base: &RingDescriptor, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![base.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if base.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = base.add(&out[i + j], &base.mul(x, y));
        }
    }
    trim(base, out)
}

pub(crate) fn scale(base: &RingDescriptor, c: &Scalar, a: &[Scalar]) -> Vec<Scalar> {
    trim(base, a.iter().map(|x| base.mul(c, x)).collect())
}

/// Division with remainder over a field base.
pub(crate) fn divrem(
    field: &RingDescriptor,
    a: &[Scalar],
    b: &[Scalar],
) -> (Vec<Scalar>, Vec<Scalar>) {
    assert!(!b.is_empty(), "polynomial division by zero");
    let lead_inv = field.inv(b.last().unwrap()).expect("field coefficient");
    let mut rem = a.to_vec();
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let mut quot = vec![field.zero(); rem.len() - b.len() + 1];
    while rem.len() >= b.len() {
        let shift = rem.len() - b.len();
        let c = field.mul(rem.last().unwrap(), &lead_inv);
        for (j, y) in b.iter().enumerate() {
            rem[shift + j] = field.sub(&rem[shift + j], &field.mul(&c, y));
        }
        quot[shift] = c;
        rem = trim(field, rem);
    }
    (trim(field, quot), rem)
}

pub(crate) fn monic(field: &RingDescriptor, a: Vec<Scalar>) -> Vec<Scalar> {
    match a.last() {
        None => a,
        Some(lead) => {
            let inv = field.inv(lead).expect("field coefficient");
            scale(field, &inv, &a)
        }
    }
}

/// Monic greatest common divisor over a field base.
pub(crate) fn gcd(field: &RingDescriptor, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let (mut x, mut y) = (a.to_vec(), b.to_vec());
    while !y.is_empty() {
        let (_, r) = divrem(field, &x, &y);
        x = y;
        y = r;
    }
    monic(field, x)
}

/// Reduce a fraction of polynomials over a field to lowest terms with a
/// monic denominator.
pub(crate) fn frac_canonical(
    field: &RingDescriptor,
    num: Vec<Scalar>,
    den: Vec<Scalar>,
) -> (Vec<Scalar>, Vec<Scalar>) {
    assert!(!den.is_empty(), "zero denominator");
    if num.is_empty() {
        return (Vec::new(), vec![field.one()]);
    }
    let g = gcd(field, &num, &den);
    let (n, _) = divrem(field, &num, &g);
    let (d, _) = divrem(field, &den, &g);
    let inv = field.inv(d.last().unwrap()).expect("field coefficient");
    (scale(field, &inv, &n), scale(field, &inv, &d))
}

pub(crate) fn render(c: &[Scalar]) -> String {
    if c.is_empty() {
        return "0".into();
    }
    let terms: Vec<String> = c
        .iter()
        .enumerate()
        .map(|(i, x)| match i {
            0 => format!("{x}"),
            1 => format!("({x})*t"),
            _ => format!("({x})*t^{i}"),
        })
        .collect();
    terms.join(" + ")
}
