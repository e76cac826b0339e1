use proptest::prelude::*;

use rado_core::nonhom::{brute_force_dims, compute_h, h_spaces, FiniteAlgebra, DEFAULT_H_BUDGET};

/// `x^2 + bx + c` has no root in `F_p`.
fn irreducible_quadratic(p: u64, b: u64, c: u64) -> bool {
    (0..p).all(|x| !(x * x + b * x + c).is_multiple_of(p))
}

/// A field `F_p[t]/(f)` of degree 1 or 2, picked from the seed.
fn field_part(p: u64, seed: u64) -> FiniteAlgebra {
    if seed.is_multiple_of(2) {
        return FiniteAlgebra::polynomial_quotient(p, &[seed % p, 1], &[]).unwrap();
    }
    let (b, c) = (0..p)
        .flat_map(|b| (0..p).map(move |c| (b, c)))
        .cycle()
        .skip((seed as usize) % (p * p) as usize)
        .find(|&(b, c)| irreducible_quadratic(p, b, c))
        .unwrap();
    FiniteAlgebra::polynomial_quotient(p, &[c, b, 1], &[]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn principal_ideals_have_no_h(
        p in prop::sample::select(vec![2u64, 3, 5]),
        f in proptest::collection::vec(0u64..5, 1..=4),
        g in proptest::collection::vec(0u64..5, 4),
    ) {
        let mut monic: Vec<u64> = f.iter().map(|c| c % p).collect();
        monic.push(1);
        let d = monic.len() - 1;
        let gen: Vec<u64> = g[..d].iter().map(|c| c % p).collect();
        let alg = FiniteAlgebra::polynomial_quotient(p, &monic, &[gen]).unwrap();
        prop_assert_eq!(compute_h(&alg, DEFAULT_H_BUDGET).unwrap().dim_h, 0);
    }

    #[test]
    fn principal_ideals_of_the_fixture_have_no_h(p in prop::sample::select(vec![2u64, 3]), g in proptest::collection::vec(0u64..3, 10)) {
        let gen: Vec<u64> = g.iter().map(|c| c % p).collect();
        let alg = FiniteAlgebra::nonprincipal_h(p).unwrap().with_ideal(&[gen]).unwrap();
        prop_assert_eq!(compute_h(&alg, DEFAULT_H_BUDGET).unwrap().dim_h, 0);
    }

    #[test]
    fn reduced_products_have_no_h(
        p in prop::sample::select(vec![2u64, 3]),
        seeds in proptest::collection::vec(0u64..1000, 1..=3),
        gens in proptest::collection::vec(proptest::collection::vec(0u64..3, 6), 0..=3),
    ) {
        let parts: Vec<FiniteAlgebra> = seeds.iter().map(|&s| field_part(p, s)).collect();
        let r = FiniteAlgebra::product(&parts).unwrap();
        let gens: Vec<Vec<u64>> = gens.iter().map(|g| g[..r.dim()].iter().map(|c| c % p).collect()).collect();
        let alg = r.with_ideal(&gens).unwrap();
        prop_assert_eq!(compute_h(&alg, DEFAULT_H_BUDGET).unwrap().dim_h, 0);
    }

    #[test]
    fn direct_sum_doubles_every_space(p in prop::sample::select(vec![2u64, 3]), f in proptest::collection::vec(0u64..3, 2..=3), g in proptest::collection::vec(0u64..3, 3)) {
        let mut monic: Vec<u64> = f.iter().map(|c| c % p).collect();
        monic.push(1);
        let d = monic.len() - 1;
        let alg = FiniteAlgebra::polynomial_quotient(p, &monic, &[g[..d].iter().map(|c| c % p).collect()]).unwrap();
        let one = h_spaces(&alg, DEFAULT_H_BUDGET).unwrap();
        let two = h_spaces(&alg.doubled_module().unwrap(), DEFAULT_H_BUDGET).unwrap();
        prop_assert_eq!(two.hom.len(), 2 * one.hom.len());
        prop_assert_eq!(two.z.len(), 2 * one.z.len());
        prop_assert_eq!(two.b.len(), 2 * one.b.len());
    }

    #[test]
    fn projective_enumeration_matches_brute_force(p in prop::sample::select(vec![2u64, 3]), f in proptest::collection::vec(0u64..3, 2..=3), g in proptest::collection::vec(0u64..3, 3)) {
        let mut monic: Vec<u64> = f.iter().map(|c| c % p).collect();
        monic.push(1);
        let d = monic.len() - 1;
        let alg = FiniteAlgebra::polynomial_quotient(p, &monic, &[g[..d].iter().map(|c| c % p).collect()]).unwrap();
        let s = h_spaces(&alg, DEFAULT_H_BUDGET).unwrap();
        prop_assert_eq!((s.hom.len(), s.z.len(), s.b.len()), brute_force_dims(&alg, 1 << 22).unwrap());
    }
}

#[test]
fn fixture_over_two_and_three() {
    for (p, dim_h) in [(2, 2), (3, 1)] {
        let r = compute_h(&FiniteAlgebra::nonprincipal_h(p).unwrap(), DEFAULT_H_BUDGET).unwrap();
        assert_eq!(r.dim_h, dim_h);
        assert_eq!(r.representative_verified, Some(true));
    }
}
