use std::collections::HashMap;

use num_complex::Complex64;
use num_traits::One;
use proptest::prelude::*;
use qrs_core::fps::{cauchy_expand, euler_expand, euler_inv_expand, series_mul, PolySeries};
use qrs_core::qcore::{qbinom, qpoch, qpoch_scalar, rat, ExactScalar, LaurentPoly, MultiPoly};

fn small_rat() -> impl Strategy<Value = ExactScalar> {
    (-6i64..=6, 1i64..=5).prop_map(|(n, d)| rat(n, d))
}

fn base() -> impl Strategy<Value = ExactScalar> {
    (1i64..=4, 2i64..=7).prop_filter_map("need 0 < |q| < 1", |(n, d)| (n < d).then(|| rat(n, d)))
        .prop_flat_map(|q| prop_oneof![Just(q.clone()), Just(-q)])
}

fn poly_xy() -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec(((0u32..3, 0u32..3), small_rat()), 0..4)
        .prop_map(|ts| MultiPoly::from_terms(&["x", "y"], ts.into_iter().map(|((i, j), c)| (vec![i, j], c))))
}

fn series_t(order: u32) -> impl Strategy<Value = PolySeries> {
    prop::collection::vec(poly_xy(), (order + 1) as usize).prop_map(move |cs| {
        let mut s = PolySeries::zero(&["t"], order);
        for (k, c) in cs.into_iter().enumerate() {
            s.set((k as u32, 0), c);
        }
        s
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn poch_splits(a in small_rat(), q in base(), m in 0i64..6, n in 0i64..6) {
        let whole = qpoch_scalar(&a, &q, m + n).unwrap();
        let aq = &a * q.pow(m as i32);
        let split = qpoch_scalar(&a, &q, m).unwrap() * qpoch_scalar(&aq, &q, n).unwrap();
        prop_assert_eq!(whole, split);
    }

    #[test]
    fn poch_negative_order_inverts(a in small_rat(), q in base(), n in 1i64..5) {
        let shifted = &a * q.pow(-(n as i32));
        if let (Ok(neg), Ok(pos)) = (qpoch_scalar(&a, &q, -n), qpoch_scalar(&shifted, &q, n)) {
            prop_assert_eq!(neg * pos, ExactScalar::one());
        }
    }

    #[test]
    fn symbolic_poch_matches_scalar(a in small_rat(), q in base(), n in 0i64..6) {
        let p = qpoch(&MultiPoly::constant(a.clone()), &q, n).unwrap();
        prop_assert_eq!(p.as_constant().unwrap(), qpoch_scalar(&a, &q, n).unwrap());
    }

    #[test]
    fn gauss_pascal_and_symmetry(q in base(), n in 1i64..10, k in 0i64..10) {
        prop_assume!(k <= n);
        prop_assert_eq!(qbinom(n, k, &q), qbinom(n, n - k, &q));
        let left = qbinom(n - 1, k - 1, &q) + q.pow(k as i32) * qbinom(n - 1, k, &q);
        let right = q.pow((n - k) as i32) * qbinom(n - 1, k - 1, &q) + qbinom(n - 1, k, &q);
        prop_assert_eq!(qbinom(n, k, &q), left.clone());
        prop_assert_eq!(left, right);
    }

    #[test]
    fn poly_ring_axioms(a in poly_xy(), b in poly_xy(), c in poly_xy()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!((&a * &b) * &c, &a * (&b * &c));
        prop_assert_eq!(&a * (&b + &c), &a * &b + &a * &c);
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &MultiPoly::one(), a.clone());
    }

    #[test]
    fn fold_agrees_with_evaluation(cs in prop::collection::vec(small_rat(), 1..5), theta in 0.0f64..3.14) {
        let mut l = LaurentPoly::zero("z");
        for (k, c) in cs.iter().enumerate() {
            let c = MultiPoly::constant(c.clone());
            l = l.add(&LaurentPoly::monomial("z", k as i64, c.clone()));
            if k > 0 {
                l = l.add(&LaurentPoly::monomial("z", -(k as i64), c));
            }
        }
        let folded = l.to_cos_poly("x").unwrap();
        let z = Complex64::from_polar(1.0, theta);
        let direct = l.eval_complex(z, &HashMap::new()).unwrap();
        let bind = HashMap::from([("x".to_string(), Complex64::new(theta.cos(), 0.0))]);
        let via_x = folded.eval_complex(&bind).unwrap();
        prop_assert!((direct - via_x).norm() < 1e-9 * (1.0 + direct.norm()));
    }

    #[test]
    fn series_product_laws(f in series_t(4), g in series_t(4), h in series_t(4)) {
        let fg = series_mul(&f, &g).unwrap();
        prop_assert_eq!(fg.clone(), series_mul(&g, &f).unwrap());
        prop_assert_eq!(series_mul(&fg, &h).unwrap(), series_mul(&f, &series_mul(&g, &h).unwrap()).unwrap());
        for n in 0..=4u32 {
            let want = (0..=n).fold(MultiPoly::zero(), |acc, k| acc + f.coeff((k, 0)) * g.coeff((n - k, 0)));
            prop_assert_eq!(fg.coeff((n, 0)), want);
        }
    }

    #[test]
    fn euler_pair_is_inverse(c in poly_xy(), q in base()) {
        let p = series_mul(&euler_expand(&c, &q, 6), &euler_inv_expand(&c, &q, 6)).unwrap();
        prop_assert_eq!(p, PolySeries::one(&["t"], 6));
    }

    #[test]
    fn q_binomial_theorem(a in small_rat(), c in small_rat(), q in base()) {
        // sum (a;q)_k (ct)^k/(q;q)_k times (ct;q)_inf is (act;q)_inf
        let (av, cv) = (MultiPoly::constant(a.clone()), MultiPoly::constant(c.clone()));
        let lhs = series_mul(&cauchy_expand(&av, &cv, &q, 6), &euler_expand(&cv, &q, 6)).unwrap();
        prop_assert_eq!(lhs, euler_expand(&MultiPoly::constant(a * c), &q, 6));
    }
}
