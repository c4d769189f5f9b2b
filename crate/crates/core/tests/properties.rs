mod common;

use edgeworth::bell::bell_sequence;
use edgeworth::estimators::{cumulants_to_moments, moments_to_cumulants};
use edgeworth::models::{Atom, ModelSpec};
use edgeworth::poly::Polynomial;
use edgeworth::{edgeworth_term, CumulantSet};
use num_rational::BigRational as Q;
use proptest::prelude::*;

use common::{partition_bell, q};

fn rational() -> impl Strategy<Value = Q> {
    (-40i64..=40, 1i64..=15).prop_map(|(n, d)| q(n, d))
}

fn positive_rational() -> impl Strategy<Value = Q> {
    (1i64..=40, 1i64..=15).prop_map(|(n, d)| q(n, d))
}

/// Deterministic clusters: each child displaced by an offset in `[-2, 3]`.
fn deterministic_model() -> impl Strategy<Value = ModelSpec> {
    prop::collection::vec(-2i64..=3, 2..=4)
        .prop_filter("non-degenerate displacements", |o| o.iter().any(|&k| k != o[0]))
        .prop_map(|offsets| {
            ModelSpec::custom("prop", vec![Atom { offsets, prob: q(1, 1) }], 0).expect("valid cluster")
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn g_parity_and_degree(
        sigma in positive_rational(),
        kappa in prop::collection::vec(rational(), 9),
        chi in prop::collection::vec(rational(), 8),
    ) {
        let mut k = vec![kappa[0].clone(), &sigma * &sigma];
        k.extend(kappa[1..].iter().cloned());
        let c = CumulantSet::new(0.0, k, chi, sigma).unwrap();
        for j in 0..=8usize {
            let g = edgeworth_term(j, &c).unwrap();
            let sign = if j % 2 == 0 { q(1, 1) } else { q(-1, 1) };
            prop_assert_eq!(g.reflect(), g.scale(&sign));
            prop_assert!(g.degree().unwrap_or(0) <= 3 * j);
        }
    }

    #[test]
    fn bell_recurrence_matches_partitions(coeffs in prop::collection::vec(prop::collection::vec(rational(), 1..4), 1..=6)) {
        let z: Vec<Polynomial<Q>> = coeffs.into_iter().map(Polynomial::new).collect();
        let b = bell_sequence(&z);
        for n in 0..=z.len() {
            prop_assert_eq!(&b[n], &partition_bell(&z, n));
        }
    }

    #[test]
    fn moments_cumulants_round_trip(mean in rational(), central in prop::collection::vec(rational(), 1..=7)) {
        let cum = moments_to_cumulants(mean.clone(), &central).unwrap();
        let (m, c) = cumulants_to_moments(&cum).unwrap();
        prop_assert_eq!(m, mean);
        prop_assert_eq!(c, central);
    }

    #[test]
    fn phi_is_strictly_convex(model in deterministic_model(), t in 0.02f64..0.98) {
        let range = model.beta_range().unwrap();
        let lo = range.minus.finite().unwrap_or(-3.0).max(-3.0);
        let hi = range.plus.finite().unwrap_or(3.0).min(3.0);
        let beta = lo + t * (hi - lo);
        prop_assert!(model.phi_deriv(2, beta) > 0.0);
    }

    #[test]
    fn saddle_at_the_centre(n in 1_000u64..10_000_000) {
        let bst = ModelSpec::bst();
        let w = (n as f64).ln();
        let k = (bst.phi_deriv(1, 0.0) * w).round();
        let beta = bst.saddle_beta(k, w).unwrap();
        prop_assert!((bst.phi_deriv(1, beta) * w - k).abs() <= 1e-9 * k);
        prop_assert!(beta.abs() <= 0.5 / (bst.phi_deriv(2, 0.0) * w) + 1e-3);
    }

    #[test]
    fn exact_mean_matches_product(n in 1u64..5_000, beta in -1.0f64..0.7, which in 0usize..3) {
        let model = [ModelSpec::bst(), ModelSpec::rrt(), ModelSpec::d_ary(3).unwrap()][which].clone();
        let mean = model.exact_mean_W(n, beta).unwrap();
        let alpha = model.jabbour_normalizer(n, beta).unwrap();
        let scaled = mean * (model.phi(beta) * (n as f64).ln()).exp();
        prop_assert!((scaled / alpha - 1.0).abs() < 1e-10, "{} vs {}", scaled, alpha);
    }
}
