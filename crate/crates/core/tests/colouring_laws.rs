use num_bigint::BigInt;
use proptest::prelude::*;

use rado_core::algebra::{RingDescriptor, Scalar};
use rado_core::colouring::{c_p, devissage, m_colouring_zxy, residue_colouring, Colouring, MOrder};

const CASES: u32 = 20_000;

/// Least nonzero base-`p` digit read off the printed expansion of `|n|`,
/// negated mod `p` for negative `n`.
fn digit_oracle(n: i64, p: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let s = BigInt::from(n.unsigned_abs()).to_str_radix(p as u32);
    let d = s.chars().rev().find(|&c| c != '0').unwrap().to_digit(36).unwrap() as u64;
    if n < 0 {
        (p - d) % p
    } else {
        d
    }
}

fn zxy_ring() -> RingDescriptor {
    RingDescriptor::poly(RingDescriptor::poly(RingDescriptor::Integers))
}

/// `sum c_ij x^i y^j` from a 3x3 coefficient grid.
fn zxy(grid: &[Vec<i64>]) -> Scalar {
    let r = zxy_ring();
    let zy = RingDescriptor::poly(RingDescriptor::Integers);
    let y = Scalar::Poly(vec![RingDescriptor::Integers.zero(), RingDescriptor::Integers.one()]);
    let x = Scalar::Poly(vec![zy.zero(), zy.one()]);
    let mut f = r.zero();
    for (i, row) in grid.iter().enumerate() {
        for (j, &c) in row.iter().enumerate() {
            let mono = r.mul(&r.pow(&x, i as u32), &r.mul(&r.pow(&Scalar::Poly(vec![y.clone()]), j as u32), &r.from_i64(c)));
            f = r.add(&f, &mono);
        }
    }
    f
}

fn grid() -> impl Strategy<Value = Vec<Vec<i64>>> {
    proptest::collection::vec(proptest::collection::vec(-30i64..=30, 3), 3)
}

fn primes() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 5, 7, 11, 13])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(CASES))]

    #[test]
    fn least_digit_law(n in -10_000_000i64..=10_000_000, p in primes(), k in 0u32..6) {
        prop_assert_eq!(c_p(&BigInt::from(n), p).unwrap(), digit_oracle(n, p));
        // Scaling by p^k leaves the colour alone.
        let scaled = BigInt::from(n) * BigInt::from(p).pow(k);
        prop_assert_eq!(c_p(&scaled, p).unwrap(), digit_oracle(n, p));
        if n != 0 && n.rem_euclid(p as i64) != 0 {
            prop_assert_eq!(c_p(&BigInt::from(n), p).unwrap(), n.rem_euclid(p as i64) as u64);
        }
    }

    #[test]
    fn xyp_colouring_ignores_generators(g in grid(), p in primes()) {
        let r = zxy_ring();
        let f = zxy(&g);
        let x = zxy(&[vec![0, 0, 0], vec![1, 0, 0]]);
        let y = zxy(&[vec![0, 1, 0]]);
        let c = m_colouring_zxy(&f, p, MOrder::Xyp).unwrap();
        prop_assert_eq!(m_colouring_zxy(&r.mul(&x, &f), p, MOrder::Xyp).unwrap(), c);
        prop_assert_eq!(m_colouring_zxy(&r.mul(&y, &f), p, MOrder::Xyp).unwrap(), c);
    }

    #[test]
    fn pxy_colouring_ignores_p(g in grid(), p in primes(), k in 1u32..4) {
        let r = zxy_ring();
        let f = zxy(&g);
        let pk = r.from_i64((p as i64).pow(k));
        prop_assert_eq!(
            m_colouring_zxy(&r.mul(&pk, &f), p, MOrder::Pxy).unwrap(),
            m_colouring_zxy(&f, p, MOrder::Pxy).unwrap()
        );
    }

    #[test]
    fn devissage_restricts_to_its_parts(n in -100_000i64..=100_000, a in 2i64..12, p in primes(), offset in 1u64..5) {
        let z = RingDescriptor::Integers;
        let quotient = residue_colouring(&z, &z.from_i64(a)).unwrap();
        let chi = devissage(&z, &z.from_i64(a), offset, Colouring::Cp { p }, quotient).unwrap();
        let expected = if n % a == 0 { digit_oracle(n, p) } else { offset + n.rem_euclid(a) as u64 };
        prop_assert_eq!(chi.colour(&z.from_i64(n)).unwrap(), expected);
        prop_assert!(expected < chi.colours().unwrap().max(p));
    }

    #[test]
    fn residue_colour_is_constant_on_cosets(n in -100_000i64..=100_000, a in 1i64..40, k in -50i64..50) {
        let z = RingDescriptor::Integers;
        let chi = residue_colouring(&z, &z.from_i64(a)).unwrap();
        let c = chi.colour(&z.from_i64(n)).unwrap();
        prop_assert_eq!(chi.colour(&z.from_i64(n + k * a)).unwrap(), c);
        prop_assert_eq!(c, n.rem_euclid(a) as u64);
    }
}
