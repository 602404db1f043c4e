use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use qrank::qseries::{gaussian_binomial, moebius_coefficient, p_j_coeff, q_power, q_product, q_transform, x_minus_y, x_plus_shifted_y, HomogeneousMPoly};
use qrank::subspace::count_subspaces;

proptest! {
    #[test]
    fn gaussian_binomial_symmetry(a in 0i64..12, b in 0i64..12, q in 2i64..6) {
        prop_assert_eq!(gaussian_binomial(a, b, q), gaussian_binomial(a, a - b, q));
        if b > a {
            prop_assert_eq!(gaussian_binomial(a, b, q), BigInt::from(0));
        }
    }

    #[test]
    fn moebius_sum_over_an_interval_vanishes(n in 1i64..7, q in 2i64..5) {
        // sum over all subspaces T of F_q^n of mu(T, F_q^n) is zero for n >= 1
        let total: BigInt = (0..=n).map(|k| gaussian_binomial(n, k, q) * moebius_coefficient(n - k, q)).sum();
        prop_assert_eq!(total, BigInt::from(0));
    }

    #[test]
    fn galois_numbers_agree(n in 0usize..7, q in prop::sample::select(vec![2u32, 3, 4, 5])) {
        let summed: BigInt = (0..=n as i64).map(|k| gaussian_binomial(n as i64, k, q as i64)).sum();
        prop_assert_eq!(count_subspaces(n, q, None), summed);
    }

    #[test]
    fn p_j_matches_expansion_for_larger_fields(n in 0i64..4, m in 0i64..6, q in prop::sample::select(vec![4i64, 5])) {
        for i in 0..=n {
            let expansion = q_product(&q_power(&x_minus_y(), i, q).unwrap(), &q_power(&x_plus_shifted_y(q), n - i, q).unwrap(), q);
            let coeffs = expansion.coeffs_at(m);
            for j in 0..=n {
                prop_assert_eq!(BigRational::from_integer(p_j_coeff(i, j, m, n, q).unwrap()), coeffs[j as usize].clone());
            }
        }
    }

    #[test]
    fn q_product_is_associative(
        a in prop::collection::vec(-5i64..6, 1..4),
        b in prop::collection::vec(-5i64..6, 1..4),
        c in prop::collection::vec(-5i64..6, 1..4),
        m in 0i64..5,
    ) {
        let (a, b, c) = (HomogeneousMPoly::from_integers(a), HomogeneousMPoly::from_integers(b), HomogeneousMPoly::from_integers(c));
        let left = q_product(&q_product(&a, &b, 2), &c, 2);
        let right = q_product(&a, &q_product(&b, &c, 2), 2);
        prop_assert_eq!(left.at(m), right.at(m));
    }
}

#[test]
fn transform_of_monomials() {
    for (r, expected) in ["1", "x", "x^2", "x^3", "x^4"].into_iter().enumerate() {
        let mut coeffs = vec![0i64; r + 1];
        coeffs[0] = 1;
        assert_eq!(q_transform(&HomogeneousMPoly::from_integers(coeffs), 3).at(2).to_string(), expected);
    }
    let y2 = HomogeneousMPoly::from_integers([0, 0, 1]);
    assert_eq!(q_transform(&y2, 2).at(0).to_string(), "2*y^2");
}
