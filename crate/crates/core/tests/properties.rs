use std::sync::Arc;

use num_integer::Integer;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

use springer_rca::combinatorics::{betti_2k, compactified_jacobian_dim, euler_series};
use springer_rca::model::{build_graded_basis, enumerate_fixed_points, is_admissible};
use springer_rca::operators::{
    abelian_monopole_coeff, excess_factor, monopole_coefficient, operator_x, operator_y,
    tangent_euler, weyl_orbit, DressPolynomial, MinusculeCoweight,
};
use springer_rca::oracle::{count_ideals_up_to, enumerate_ideals, NumericalSemigroup};
use springer_rca::rational::{self, frac};
use springer_rca::verify::{
    check_boundary_vanishing, check_kernel_y, check_lowest_weights, check_singular_vectors,
    check_sl2_and_casimir, check_weyl_relation, finite_part_character, kernel_y,
};
use springer_rca::Params;

fn coprime_pair(max_n: usize, max_k: usize) -> impl Strategy<Value = (usize, usize)> {
    (1..=max_n, 1..=max_k).prop_filter("coprime", |&(n, k)| n.gcd(&k) == 1)
}

fn p(n: usize, k: usize) -> Params {
    Params::new(n, k).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn strata_sizes_follow_the_q_series((n, k) in coprime_pair(5, 9), d in 0usize..14) {
        let series = euler_series(&p(n, k), d).unwrap();
        let basis = build_graded_basis(&p(n, k), d).unwrap();
        for (i, c) in basis.counts().into_iter().enumerate() {
            prop_assert_eq!(c as i128, series.coeff(i));
        }
    }

    #[test]
    fn localization_routes_agree((n, k) in coprime_pair(4, 7), r in 1usize..5, sign in prop_oneof![Just(1i64), Just(-1)], d in 0usize..6) {
        prop_assume!(r <= n);
        let params = p(n, k);
        let one = DressPolynomial::one(n);
        let lam = MinusculeCoweight::new(sign, r, n).unwrap().vector();
        for a in enumerate_fixed_points(&params, d).unwrap() {
            for lp in weyl_orbit(&lam) {
                let c = monopole_coefficient(&a, &lp, &lam, &one, &params).unwrap();
                prop_assert!(!c.denominator.is_zero());
                if !is_admissible(&c.target, &params).unwrap() {
                    prop_assert!(c.numerator.is_zero());
                    continue;
                }
                let phi: Vec<_> = springer_rca::model::phi_weights(&c.target, &params).unwrap().phis;
                let other = excess_factor(&a, &lp, &params).unwrap() / tangent_euler(&phi, &lp);
                prop_assert_eq!(&c.value, &other);
                if r == n {
                    prop_assert_eq!(&c.value, &abelian_monopole_coeff(&a, &lp, &params).unwrap());
                }
            }
        }
    }

    #[test]
    fn weyl_and_boundary_hold((n, k) in coprime_pair(4, 7), d in 2usize..8) {
        prop_assert!(check_weyl_relation(&p(n, k), d).unwrap().passed());
        prop_assert!(check_boundary_vanishing(&p(n, k), d).unwrap().passed());
    }

    #[test]
    fn singular_vector_is_unique((n, k) in coprime_pair(4, 7), d in 0usize..8) {
        let r = check_singular_vectors(&p(n, k), d).unwrap();
        prop_assert!(r.passed(), "{}", r);
    }

    #[test]
    fn rank_two_module_structure(ell in 1usize..6, extra in 0usize..3) {
        let k = 2 * ell + 1;
        let d = k + extra;
        prop_assert!(check_sl2_and_casimir(&p(2, k), d).unwrap().passed());
        prop_assert!(check_lowest_weights(&p(2, k), d).unwrap().passed());
    }

    #[test]
    fn kernel_of_y_matches_the_character((n, k) in coprime_pair(4, 7).prop_filter("small", |&(n, k)| (n - 1) * (k - 1) + n <= 14)) {
        let params = p(n, k);
        let d = params.stabilization_degree();
        let s = kernel_y(&params, d).unwrap();
        let character = finite_part_character(&params, d).unwrap();
        for (i, &dim) in s.dims.iter().enumerate() {
            prop_assert_eq!(dim as i128, character.coeff(i));
        }
        prop_assert_eq!(s.total as u128, compactified_jacobian_dim(&params).unwrap());
        prop_assert_eq!(character.eval_at_one() as u128, compactified_jacobian_dim(&params).unwrap());
        prop_assert!(check_kernel_y(&params, d).unwrap().passed());

        let basis = Arc::new(build_graded_basis(&params, d).unwrap());
        let y = operator_y(&basis).unwrap();
        for v in &s.vectors {
            let image = y.block(v.degree).unwrap().mul_vec(&v.coords).unwrap();
            prop_assert!(image.iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn odd_betti_sums_count_fixed_points(ell in 0usize..7, abs in 0usize..16) {
        let k = 2 * ell + 1;
        let sum = betti_2k(k, -(abs as i64)).unwrap().eval_at_one();
        prop_assert_eq!(sum as usize, enumerate_fixed_points(&p(2, k), abs).unwrap().len());
    }

    #[test]
    fn oracle_matches_and_is_stable((n, k) in coprime_pair(4, 7), d in 0usize..8) {
        let counts = count_ideals_up_to(n, k, d, 64).unwrap();
        let gamma = NumericalSemigroup::new(n, k, 200).unwrap();
        for (m, &c) in counts.iter().enumerate() {
            prop_assert_eq!(c as usize, enumerate_fixed_points(&p(n, k), m).unwrap().len());
            let ideals = enumerate_ideals(n, k, m).unwrap();
            prop_assert_eq!(ideals.len() as u64, c);
            for ideal in &ideals {
                prop_assert!(ideal.is_stable(&gamma));
            }
        }
    }

    #[test]
    fn construction_is_deterministic((n, k) in coprime_pair(4, 7), d in 0usize..8) {
        let a = Arc::new(build_graded_basis(&p(n, k), d).unwrap());
        let b = Arc::new(build_graded_basis(&p(n, k), d).unwrap());
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(operator_x(&a).unwrap(), operator_x(&b).unwrap());
    }

    #[test]
    fn rationals_print_in_lowest_terms(num in -500i64..500, den in 1i64..500) {
        let q = frac(num, if num % 2 == 0 { -den } else { den });
        let s = rational::to_string(&q);
        prop_assert_eq!(rational::parse(&s), Some(q.clone()));
        if let Some((a, b)) = s.split_once('/') {
            let (a, b): (i64, i64) = (a.parse().unwrap(), b.parse().unwrap());
            prop_assert!(b > 1 && a.gcd(&b) == 1);
        }
        prop_assert!(q.denom().is_positive());
    }
}
