use proptest::prelude::*;
use speclab_spectral::Potential;
use speclab_wkb::{action_phi, theta_plus, turning_points};

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn action_decreases(scale in 0.5f64..3.0, exponent in 1.1f64..3.0, a in 0.01f64..0.98, b in 0.01f64..0.98) {
        prop_assume!((a - b).abs() > 1e-3);
        let q = Potential::RationalDecay { scale, exponent };
        let top = scale.sqrt();
        let (lo, hi) = (a.min(b) * top, a.max(b) * top);
        prop_assert!(action_phi(&q, hi).unwrap() < action_phi(&q, lo).unwrap());
    }

    #[test]
    fn turning_point_solves_level(exponent in 1.1f64..3.0, a in 0.01f64..0.99) {
        let q = Potential::RationalDecay { scale: 1.0, exponent };
        let (_, xp) = turning_points(&q, a).unwrap();
        prop_assert!((q.eval(xp) - a * a).abs() <= 1e-10 * a * a);
        prop_assert!(theta_plus(&q, a).unwrap() > 0.0);
    }
}
