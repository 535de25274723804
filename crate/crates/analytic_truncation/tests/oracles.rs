use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use proptest::prelude::*;
use speclab_holder_bump::{lower_bound_constant, HolderClass};
use speclab_truncation::{
    coeff_bound, empirical_coeff_check, floor_lower_bound, multinomial_count, scalar_exponential_tail, tail_bound,
    truncation_degree, CoefficientOracle, CoshProduct, EntireFamilyParams, ExpProduct, NormCase,
};

const P: usize = 256;
const RM: RoundingMode = RoundingMode::ToEven;

fn to_f64(x: &BigFloat, cc: &mut Consts) -> f64 {
    x.format(Radix::Dec, RM, cc).unwrap().parse().unwrap()
}

fn big(v: f64) -> BigFloat {
    BigFloat::from_f64(v, P)
}

#[test]
fn coefficient_bound_vs_reference() {
    let mut cc = Consts::new().unwrap();
    let e = cc.e(P, RM);
    let p = EntireFamilyParams::new(2.0, 1.5, 1.0, 1.25, 2.0, 3.0, 2.0, 1.0, 5).unwrap();
    for k in [1u64, 7, 40, 333] {
        let n = big(p.n as f64);
        let npow = n.pow(&big(p.v), P, RM, &mut cc);
        let pre = big(p.a).mul(&big(p.u).mul(&npow, P, RM).exp(P, RM, &mut cc), P, RM);
        let ratio = e
            .mul(&big(p.b * p.d), P, RM)
            .mul(&n.pow(&big(p.d + p.t), P, RM, &mut cc), P, RM)
            .div(&big(k as f64), P, RM);
        let v = pre.mul(&ratio.pow(&big(k as f64 / p.d), P, RM, &mut cc), P, RM);
        let want = to_f64(&v.log2(P, RM, &mut cc), &mut cc);
        let got = coeff_bound(&p, k).unwrap().log2();
        assert!(((got - want) / want).abs() < 1e-12, "k={k}: {got} vs {want}");
    }
}

#[test]
fn exponential_family_to_degree_50() {
    let o = ExpProduct { params: EntireFamilyParams::all_ones(1) };
    let rep = empirical_coeff_check(&o, 50).unwrap();
    assert_eq!(rep.checked, 51);
    assert!(rep.worst_margin_log2 >= 0.0);
}

#[test]
fn cosh_family_three_vars_to_degree_30() {
    let o = CoshProduct { params: EntireFamilyParams::all_ones(3) };
    let rep = empirical_coeff_check(&o, 30).unwrap();
    assert!(rep.checked > 0);
    assert!(rep.worst_margin_log2 >= 0.0);
}

struct Zero;
impl CoefficientOracle for Zero {
    fn params(&self) -> EntireFamilyParams {
        EntireFamilyParams::all_ones(2)
    }
    fn vars(&self) -> usize {
        2
    }
    fn factor_log2(&self, _: usize, _: u32) -> Option<f64> {
        None
    }
}

#[test]
fn zero_function_holds_trivially() {
    let rep = empirical_coeff_check(&Zero, 10).unwrap();
    assert_eq!(rep.checked, 0);
}

/// Σ_{n>K} 1/n! in 256-bit arithmetic.
fn reference_tail_log2(k: u64, cc: &mut Consts) -> f64 {
    let mut fact = big(1.0);
    for j in 2..=k + 1 {
        fact = fact.mul(&big(j as f64), P, RM);
    }
    let mut term = big(1.0).div(&fact, P, RM);
    let mut acc = term.clone();
    for j in k + 2..k + 40 {
        term = term.div(&big(j as f64), P, RM);
        acc = acc.add(&term, P, RM);
    }
    to_f64(&acc.log2(P, RM, cc), cc)
}

#[test]
fn scalar_tail_chain_at_threshold() {
    let mut cc = Consts::new().unwrap();
    let p = EntireFamilyParams::all_ones(1);
    let k = tail_bound(&p, 1).unwrap().threshold.ceil() as u64;
    assert!((10_150..10_250).contains(&k));
    let tb = tail_bound(&p, k).unwrap();
    assert!(tb.valid);
    let ours = scalar_exponential_tail(&p, k);
    let want = reference_tail_log2(k, &mut cc);
    assert!(((ours.log2() - want) / want).abs() < 1e-12);
    assert!(ours.log2() <= tb.value.log2());
}

#[test]
fn pascal_table_exact() {
    for n in 1..200u64 {
        for vars in 2..=10u64 {
            let lhs = multinomial_count(n, vars).unwrap();
            let rhs = multinomial_count(n - 1, vars).unwrap() + multinomial_count(n, vars - 1).unwrap();
            assert_eq!(lhs, rhs, "n={n} N={vars}");
        }
    }
}

#[test]
fn floor_examples() {
    let h = HolderClass::new(1.0, 1).unwrap();
    let p = EntireFamilyParams::all_ones(1024);
    let c = speclab_holder_bump::analytic_floor_constant(NormCase::Uniform, &h, &p).unwrap();
    let f = floor_lower_bound(&p, &h, NormCase::Uniform).unwrap();
    assert!((f / (c / 10240.0) - 1.0).abs() < 1e-14);
}

proptest! {
    #[test]
    fn truncation_degree_is_valid(a in 1.0f64..20.0, d in 1.0f64..2.0, n in 1u64..8, c in 1e-6f64..1.0, l in 0.2f64..3.0, s in 1usize..4) {
        let p = EntireFamilyParams::new(a, 1.0, 1.0, 1.0, 1.0, d, 1.0, 1.0, n).unwrap();
        let h = HolderClass::new(l, s).unwrap();
        let k = truncation_degree(&p, &h, c).unwrap();
        prop_assert!(tail_bound(&p, k).unwrap().valid);
        let k_small = truncation_degree(&p, &h, (c * 0.5).max(1e-300)).unwrap();
        prop_assert!(k_small >= k);
    }

    #[test]
    fn floor_decreasing_and_below_constant(n in 2u64..5000, l in 0.2f64..3.0, s in 1usize..4) {
        let h = HolderClass::new(l, s).unwrap();
        let p = EntireFamilyParams::all_ones(n);
        let q = EntireFamilyParams::all_ones(n + 1);
        for case in [NormCase::Uniform, NormCase::L1] {
            let f = floor_lower_bound(&p, &h, case).unwrap();
            prop_assert!(floor_lower_bound(&q, &h, case).unwrap() < f);
            prop_assert!(f < lower_bound_constant(case, &h));
        }
    }

    #[test]
    fn doubling_k_squares_the_decay(k in 1u64..100_000) {
        let p = EntireFamilyParams::all_ones(3);
        let a = tail_bound(&p, k).unwrap().value.log2();
        let b = tail_bound(&p, 2 * k).unwrap().value.log2();
        let pre = tail_bound(&p, 1).unwrap().value.log2() + 1.0;
        prop_assert!(((b - pre) - 2.0 * (a - pre)).abs() < 1e-9);
    }
}
