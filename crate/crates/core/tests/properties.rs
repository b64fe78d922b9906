use gsh_shrink::dwt::{daubechies_filter, forward, inverse};
use gsh_shrink::elicitation::{elicit_t, estimate_sigma, sample_kurtosis, ElicitationConfig};
use gsh_shrink::gsh_prior::{gsh_kurtosis, GshParams, ShrinkagePrior};
use gsh_shrink::shrinkage::ShrinkageRule;
use proptest::prelude::*;

fn rule(alpha: f64, t: f64, sigma: f64) -> ShrinkageRule {
    let prior = ShrinkagePrior::new(alpha, GshParams::new(1.0, t).unwrap()).unwrap();
    ShrinkageRule::new(prior, sigma).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dwt_round_trip(
        values in prop::collection::vec(-100.0..100.0f64, 256),
        order in 1usize..=10,
        j0 in 0usize..8,
    ) {
        let f = daubechies_filter(order).unwrap();
        let dec = forward(&values, &f, j0).unwrap();
        let back = inverse(&dec).unwrap();
        for (a, b) in values.iter().zip(&back) {
            prop_assert!((a - b).abs() < 1e-9);
        }
        let e: f64 = values.iter().map(|v| v * v).sum();
        prop_assert!((dec.energy() - e).abs() <= 1e-10 * e.max(1.0));
    }

    #[test]
    fn rule_is_odd_monotone_and_shrinking(
        alpha in 0.0..0.999f64,
        t in -3.0..20.0f64,
        sigma in 0.2..3.0f64,
        d in 0.0..30.0f64,
        gap in 1e-3..1.0f64,
    ) {
        let r = rule(alpha, t, sigma);
        let lo = r.shrink(d).unwrap();
        let hi = r.shrink(d + gap).unwrap();
        prop_assert_eq!(r.shrink(-d).unwrap(), -lo);
        prop_assert!(lo >= 0.0 && lo <= d);
        prop_assert!(hi >= lo - 1e-12);
    }

    #[test]
    fn kurtosis_map_round_trips(t in -3.1..30.0f64) {
        let b = gsh_kurtosis(t).unwrap();
        let back = elicit_t(b, &ElicitationConfig::default());
        prop_assert!((back - t).abs() < 1e-7 * t.abs().max(1.0), "{} -> {} -> {}", t, b, back);
    }

    #[test]
    fn sample_kurtosis_affine_invariant(
        values in prop::collection::vec(-10.0..10.0f64, 8..64),
        scale in prop_oneof![-5.0..-0.1f64, 0.1..5.0f64],
        shift in -50.0..50.0f64,
    ) {
        if let Ok(k) = sample_kurtosis(&values) {
            let moved: Vec<f64> = values.iter().map(|v| scale * v + shift).collect();
            let k2 = sample_kurtosis(&moved).unwrap();
            prop_assert!((k - k2).abs() < 1e-8 * k);
        }
    }

    #[test]
    fn sigma_estimate_scale_equivariant(
        values in prop::collection::vec(-10.0..10.0f64, 1..64),
        c in -5.0..5.0f64,
    ) {
        let base = estimate_sigma(&values).unwrap();
        let scaled: Vec<f64> = values.iter().map(|v| c * v).collect();
        prop_assert!((estimate_sigma(&scaled).unwrap() - c.abs() * base).abs() < 1e-12 * (1.0 + base));
    }
}
