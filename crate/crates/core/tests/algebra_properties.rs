use proptest::prelude::*;

use rado_core::algebra::{rref, Matrix, RingDescriptor, Scalar};
use rado_core::regularity::{columns_condition, columns_condition_bruteforce, gcc};

fn rings() -> Vec<RingDescriptor> {
    use RingDescriptor::*;
    vec![
        Integers,
        Rationals,
        ModRing(12),
        PrimeField(7),
        RingDescriptor::poly(PrimeField(3)),
        RingDescriptor::poly(ModRing(4)),
        RingDescriptor::poly(Integers),
    ]
}

/// An element from small integer coefficients; polynomial rings use them as
/// ascending coefficients, everything else uses their alternating sum with
/// an occasional fraction over `Q`.
fn element(ring: &RingDescriptor, coeffs: &[i64]) -> Scalar {
    match ring {
        RingDescriptor::Poly(base) => {
            let x = Scalar::Poly(vec![base.zero(), base.one()]);
            coeffs.iter().rev().fold(ring.zero(), |acc, &c| ring.add(&ring.mul(&acc, &x), &ring.from_i64(c)))
        }
        RingDescriptor::Rationals if coeffs[1] != 0 => ring.div(&ring.from_i64(coeffs[0]), &ring.from_i64(coeffs[1])),
        _ => ring.from_i64(coeffs.iter().enumerate().map(|(i, c)| if i % 2 == 0 { *c } else { -c }).sum()),
    }
}

fn triple() -> impl Strategy<Value = (usize, [Vec<i64>; 3])> {
    let v = || proptest::collection::vec(-9i64..=9, 3);
    (0..rings().len(), [v(), v(), v()])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn ring_axioms((k, [a, b, c]) in triple()) {
        let r = &rings()[k];
        let (a, b, c) = (element(r, &a), element(r, &b), element(r, &c));
        prop_assert!(r.contains(&a) && r.contains(&b) && r.contains(&c));
        prop_assert_eq!(r.add(&a, &b), r.add(&b, &a));
        prop_assert_eq!(r.mul(&a, &b), r.mul(&b, &a));
        prop_assert_eq!(r.add(&r.add(&a, &b), &c), r.add(&a, &r.add(&b, &c)));
        prop_assert_eq!(r.mul(&r.mul(&a, &b), &c), r.mul(&a, &r.mul(&b, &c)));
        prop_assert_eq!(r.mul(&a, &r.add(&b, &c)), r.add(&r.mul(&a, &b), &r.mul(&a, &c)));
        prop_assert_eq!(r.add(&a, &r.zero()), a.clone());
        prop_assert_eq!(r.mul(&a, &r.one()), a.clone());
        prop_assert!(r.is_zero(&r.add(&a, &r.neg(&a))));
        prop_assert_eq!(r.sub(&r.add(&a, &b), &b), a.clone());
        if let Some(inv) = r.inv(&a) {
            prop_assert!(r.is_one(&r.mul(&a, &inv)));
        }
    }

    #[test]
    fn rref_is_idempotent(rows in proptest::collection::vec(proptest::collection::vec(-5i64..=5, 4), 1..5), p in prop::sample::select(vec![0u64, 2, 3, 5])) {
        let field = if p == 0 { RingDescriptor::Rationals } else { RingDescriptor::PrimeField(p) };
        let m = Matrix::from_i64(field, &rows).unwrap();
        let (r, rank) = rref(&m).unwrap();
        let (r2, rank2) = rref(&r).unwrap();
        prop_assert_eq!(&r, &r2);
        prop_assert_eq!(rank, rank2);
        prop_assert!(rank <= rows.len().min(4));
    }

    #[test]
    fn columns_condition_matches_brute_force(
        rows in (1usize..=6).prop_flat_map(|l| proptest::collection::vec(proptest::collection::vec(-3i64..=3, l), 1..=3)),
        p in prop::sample::select(vec![0u64, 2, 3, 5]),
    ) {
        let field = if p == 0 { RingDescriptor::Rationals } else { RingDescriptor::PrimeField(p) };
        let a = Matrix::from_i64(field, &rows).unwrap();
        let fast = columns_condition(&a).unwrap();
        let slow = columns_condition_bruteforce(&a).unwrap();
        prop_assert_eq!(fast.is_some(), slow.is_some());
        for w in fast.iter().chain(slow.iter()) {
            prop_assert!(w.check(&a).is_ok());
        }
    }

    #[test]
    fn integer_verdict_equals_rational_verdict(
        rows in (1usize..=5).prop_flat_map(|l| proptest::collection::vec(proptest::collection::vec(-4i64..=4, l), 1..=2)),
    ) {
        let z = Matrix::from_i64(RingDescriptor::Integers, &rows).unwrap();
        let q = Matrix::from_i64(RingDescriptor::Rationals, &rows).unwrap();
        let wz = columns_condition(&z).unwrap();
        prop_assert_eq!(wz.is_some(), columns_condition(&q).unwrap().is_some());
        if let Some(w) = wz {
            prop_assert!(w.check(&z).is_ok());
        }
    }

    #[test]
    fn gcc_witnesses_recheck(
        rows in (1usize..=4).prop_flat_map(|l| proptest::collection::vec(proptest::collection::vec(0i64..8, l), 1..=2)),
        n in prop::sample::select(vec![4u64, 8, 9, 12]),
    ) {
        let a = Matrix::from_i64(RingDescriptor::poly(RingDescriptor::ModRing(n)), &rows).unwrap();
        if let Some(w) = gcc(&a).unwrap() {
            prop_assert!(w.check(&a).is_ok());
        }
    }
}
