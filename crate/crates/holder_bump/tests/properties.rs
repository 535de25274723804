use proptest::prelude::*;
use speclab_holder_bump::{
    analytic_floor_constant, eval_f_eps, eval_g, lower_bound_constant, sup_norm_on_grid, BumpSpec,
    EntireFamilyParams, HolderClass, NormCase,
};

fn signs(len: usize, bits: u64) -> Vec<i8> {
    (0..len).map(|i| if (bits >> (i % 64)) & 1 == 1 { 1 } else { -1 }).collect()
}

proptest! {
    #[test]
    fn g_symmetric_under_reflection(l in 0.1f64..4.0, x in prop::collection::vec(0.0f64..=1.0, 1..4), axis in 0usize..3) {
        let h = HolderClass::new(l, x.len()).unwrap();
        let j = axis % x.len();
        let mut y = x.clone();
        y[j] = 1.0 - y[j];
        let a = eval_g(&h, &x).unwrap();
        let b = eval_g(&h, &y).unwrap();
        prop_assert!((a - b).abs() <= 1e-15);
        prop_assert!(a <= 4f64.powf(-(h.s as f64) * h.bump_power() as f64) * (1.0 + 1e-12));
    }

    #[test]
    fn f_vanishes_on_faces(l in 0.2f64..3.0, r in 1usize..6, bits in any::<u64>(), cell in 0usize..6, t in 0.0f64..=1.0) {
        let h = HolderClass::new(l, 2).unwrap();
        let b = BumpSpec::new(h, r, signs(r * r, bits)).unwrap();
        let face = (cell % (r + 1)) as f64 / r as f64;
        prop_assert!(eval_f_eps(&b, &[face, t]).unwrap().abs() < 1e-12);
        prop_assert!(eval_f_eps(&b, &[t, face]).unwrap().abs() < 1e-12);
    }

    #[test]
    fn floor_constant_at_most_three_quarters(l in 0.1f64..5.0, s in 1usize..5, a in 1.0f64..50.0, d in 1.0f64..4.0, big_b in 1.0f64..10.0) {
        let h = HolderClass::new(l, s).unwrap();
        let p = EntireFamilyParams::new(a, 1.5, 1.0, 2.0, 1.0, d, big_b, 1.0, 16).unwrap();
        for case in [NormCase::Uniform, NormCase::L1] {
            let c = lower_bound_constant(case, &h);
            let cp = analytic_floor_constant(case, &h, &p).unwrap();
            prop_assert!(cp > 0.0);
            prop_assert!(cp <= 0.75 * c);
            prop_assert!(c < 1.0);
        }
    }
}

#[test]
fn sup_norm_attained_at_centres() {
    for &(l, s, r) in &[(0.5, 1, 2), (1.5, 2, 5), (2.0, 2, 2), (1.0, 1, 7)] {
        let h = HolderClass::new(l, s).unwrap();
        let b = BumpSpec::new(h, r, signs(r.pow(s as u32), 0x5a5a)).unwrap();
        let sup = sup_norm_on_grid(&b, 21);
        let want = b.center_magnitude();
        assert!(((sup - want) / want).abs() < 1e-10, "l={l} s={s} r={r}");
    }
}

#[test]
fn centre_value_matches_closed_form() {
    let h = HolderClass::new(1.5, 2).unwrap();
    let b = BumpSpec::new(h, 3, signs(9, 0b101)).unwrap();
    let v = eval_f_eps(&b, &[0.5 / 3.0, 0.5 / 3.0]).unwrap();
    assert!((v - b.center_magnitude()).abs() < 1e-18);
    let v = eval_f_eps(&b, &[0.5 / 3.0, 1.5 / 3.0]).unwrap();
    assert!((v + b.center_magnitude()).abs() < 1e-18);
}
