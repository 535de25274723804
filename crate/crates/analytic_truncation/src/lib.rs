//! Quantitative truncation machinery for families f(·, ζ) entire in ζ:
//! Cauchy coefficient bounds, multi-index counts, the 2^{-K} tail, the
//! degree K that makes it small, and the resulting (N log N)^{-l/s} floor.
//!
//! Every "log" here is binary. Bounds are returned as [`Log2`] magnitudes.

use std::f64::consts::{E, LOG2_E};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use speclab_holder_bump::{EntireFamilyParams, NormCase};
use speclab_holder_bump::{analytic_floor_constant, HolderClass, HolderError};
pub use speclab_numerics::Log2;
use speclab_numerics::NeumaierSum;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TruncationError {
    #[error(transparent)]
    Params(#[from] HolderError),
    #[error("binomial C({n}, {k}) overflows u128")]
    Overflow { n: u64, k: u64 },
    #[error("{what} must be >= {min}, got {got}")]
    TooSmall { what: &'static str, min: u64, got: u64 },
    #[error("threshold C must lie in (0, 1], got {0}")]
    Threshold(f64),
    #[error("coefficient bound violated at k = {k:?}: log2 |c_k| = {coeff_log2}, log2 bound = {bound_log2}")]
    Violation { k: Vec<u32>, coeff_log2: f64, bound_log2: f64 },
}

fn lsum(terms: &[f64]) -> f64 {
    terms.iter().copied().collect::<NeumaierSum>().total()
}

fn prefactor_log2(p: &EntireFamilyParams) -> f64 {
    lsum(&[p.a.log2(), p.u * (p.n as f64).powf(p.v) * LOG2_E])
}

/// A e^{uN^v} (e b d N^{d+t} / |k|)^{|k|/d}; `A e^{uN^v}` at |k| = 0.
pub fn coeff_bound(params: &EntireFamilyParams, total_degree: u64) -> Result<Log2, TruncationError> {
    params.validate()?;
    let pre = prefactor_log2(params);
    if total_degree == 0 {
        return Ok(Log2(pre));
    }
    let k = total_degree as f64;
    let n = params.n as f64;
    let inner = lsum(&[LOG2_E, params.b.log2(), params.d.log2(), (params.d + params.t) * n.log2(), -k.log2()]);
    Ok(Log2(pre + k / params.d * inner))
}

/// #{k ∈ ℕ^vars : |k| = total} = C(total + vars − 1, vars − 1).
pub fn multinomial_count(total: u64, vars: u64) -> Result<u128, TruncationError> {
    if vars == 0 {
        return Err(TruncationError::TooSmall { what: "vars", min: 1, got: 0 });
    }
    let n = total + vars - 1;
    let k = (vars - 1).min(total);
    let mut acc: u128 = 1;
    for i in 0..k {
        let num = (n - i) as u128;
        let den = (i + 1) as u128;
        let g = gcd(acc, den);
        let (a, d) = (acc / g, den / g);
        let num_red = num / d;
        acc = a.checked_mul(num_red).ok_or(TruncationError::Overflow { n, k })?;
    }
    Ok(acc)
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Tail of the truncated expansion and whether K clears the validity thresholds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailBound {
    pub value: Log2,
    pub valid: bool,
    /// e b d 2^{(4e+1)d} B^d N^{d(r+1)+t}.
    pub threshold: f64,
}

/// log2 of e b d 2^{(4e+1)d} B^d N^{d(r+1)+t}.
pub fn tail_threshold_log2(p: &EntireFamilyParams) -> f64 {
    lsum(&[
        LOG2_E,
        p.b.log2(),
        p.d.log2(),
        (4.0 * E + 1.0) * p.d,
        p.d * p.big_b.log2(),
        (p.d * (p.r + 1.0) + p.t) * (p.n as f64).log2(),
    ])
}

/// A e^{uN^v} 2^{−K}.
pub fn tail_bound(params: &EntireFamilyParams, k: u64) -> Result<TailBound, TruncationError> {
    params.validate()?;
    if k == 0 {
        return Err(TruncationError::TooSmall { what: "K", min: 1, got: 0 });
    }
    let t = tail_threshold_log2(params);
    let kf = k as f64;
    Ok(TailBound {
        value: Log2(prefactor_log2(params) - kf),
        valid: kf.log2() >= t && k >= params.n,
        threshold: t.exp2(),
    })
}

/// ⌈e b u d 2^{(4e+1)d} B^d (1 + l/s)² log₂(4A/C) N^{d(r+1)+v+t}⌉.
pub fn truncation_degree(params: &EntireFamilyParams, holder: &HolderClass, c: f64) -> Result<u64, TruncationError> {
    params.validate()?;
    if !(c > 0.0 && c <= 1.0) {
        return Err(TruncationError::Threshold(c));
    }
    let p = params;
    let ls = holder.l / holder.s as f64;
    let lg = lsum(&[
        LOG2_E,
        p.b.log2(),
        p.u.log2(),
        p.d.log2(),
        (4.0 * E + 1.0) * p.d,
        p.d * p.big_b.log2(),
        2.0 * (1.0 + ls).log2(),
        (4.0 * p.a / c).log2().log2(),
        (p.d * (p.r + 1.0) + p.v + p.t) * (p.n as f64).log2(),
    ]);
    Ok(lg.exp2().ceil() as u64)
}

/// C′ / (N log₂ N)^{l/s}.
pub fn floor_lower_bound(
    params: &EntireFamilyParams,
    holder: &HolderClass,
    case: NormCase,
) -> Result<f64, TruncationError> {
    if params.n < 2 {
        return Err(TruncationError::TooSmall { what: "N", min: 2, got: params.n });
    }
    let c = analytic_floor_constant(case, holder, params)?;
    let n = params.n as f64;
    Ok(c / (n * n.log2()).powf(holder.l / holder.s as f64))
}

/// Σ_{n>K} (B N^r)^n / n!, the scalar exponential family's true tail.
pub fn scalar_exponential_tail(params: &EntireFamilyParams, k: u64) -> Log2 {
    let rho = params.big_b * (params.n as f64).powf(params.r);
    let ln_rho = rho.ln();
    let mut ln_fact: f64 = (2..=k + 1).map(|j| (j as f64).ln()).sum();
    let mut acc = Log2::ZERO;
    let mut j = k + 1;
    loop {
        let term = Log2::from_ln(j as f64 * ln_rho - ln_fact);
        acc = acc.add(term);
        if term.log2() < acc.log2() - 60.0 {
            break;
        }
        j += 1;
        ln_fact += (j as f64).ln();
    }
    acc
}

/// |c_k| for a separable family: the product of per-coordinate factors.
pub trait CoefficientOracle {
    fn params(&self) -> EntireFamilyParams;
    fn vars(&self) -> usize;
    /// log2 |c_k| of the one-dimensional factor, `None` when it vanishes.
    fn factor_log2(&self, coordinate: usize, k: u32) -> Option<f64>;
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoeffCheckReport {
    pub max_total_degree: u64,
    pub checked: usize,
    /// min over nonzero c_k of log2(bound) − log2 |c_k|.
    pub worst_margin_log2: f64,
    pub worst_k: Vec<u32>,
}

/// Checks |c_k| ≤ coeff_bound(|k|) for every multi-index up to the cap.
pub fn empirical_coeff_check<O: CoefficientOracle + ?Sized>(
    oracle: &O,
    max_total_degree: u64,
) -> Result<CoeffCheckReport, TruncationError> {
    let params = oracle.params();
    let vars = oracle.vars();
    let bounds: Vec<f64> = (0..=max_total_degree)
        .map(|k| coeff_bound(&params, k).map(|b| b.log2()))
        .collect::<Result<_, _>>()?;
    let mut report = CoeffCheckReport { max_total_degree, checked: 0, worst_margin_log2: f64::INFINITY, worst_k: vec![] };
    let mut k = vec![0u32; vars];
    visit(oracle, &bounds, &mut k, 0, max_total_degree as u32, &mut report)?;
    Ok(report)
}

fn visit<O: CoefficientOracle + ?Sized>(
    oracle: &O,
    bounds: &[f64],
    k: &mut Vec<u32>,
    pos: usize,
    budget: u32,
    report: &mut CoeffCheckReport,
) -> Result<(), TruncationError> {
    if pos == k.len() {
        let mut log_c = 0.0;
        for (j, &kj) in k.iter().enumerate() {
            match oracle.factor_log2(j, kj) {
                Some(v) => log_c += v,
                None => return Ok(()),
            }
        }
        let total: u32 = k.iter().sum();
        let margin = bounds[total as usize] - log_c;
        report.checked += 1;
        if margin < report.worst_margin_log2 {
            report.worst_margin_log2 = margin;
            report.worst_k = k.clone();
        }
        if margin < 0.0 {
            return Err(TruncationError::Violation { k: k.clone(), coeff_log2: log_c, bound_log2: bounds[total as usize] });
        }
        return Ok(());
    }
    for v in 0..=budget {
        k[pos] = v;
        visit(oracle, bounds, k, pos + 1, budget - v, report)?;
    }
    k[pos] = 0;
    Ok(())
}

/// f(ζ) = ∏_{j<N} exp(ζ_j): c_k = ∏ 1/k_j!.
#[derive(Clone, Debug)]
pub struct ExpProduct {
    pub params: EntireFamilyParams,
}

/// f(ζ) = ∏_{j<N} cosh(ζ_j): c_k = ∏ 1/k_j! on even indices.
#[derive(Clone, Debug)]
pub struct CoshProduct {
    pub params: EntireFamilyParams,
}

fn log2_factorial(k: u32) -> f64 {
    (2..=k).map(|j| (j as f64).log2()).sum()
}

impl CoefficientOracle for ExpProduct {
    fn params(&self) -> EntireFamilyParams {
        self.params
    }
    fn vars(&self) -> usize {
        self.params.n as usize
    }
    fn factor_log2(&self, _coordinate: usize, k: u32) -> Option<f64> {
        Some(-log2_factorial(k))
    }
}

impl CoefficientOracle for CoshProduct {
    fn params(&self) -> EntireFamilyParams {
        self.params
    }
    fn vars(&self) -> usize {
        self.params.n as usize
    }
    fn factor_log2(&self, _coordinate: usize, k: u32) -> Option<f64> {
        k.is_multiple_of(2).then(|| -log2_factorial(k))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multinomial_examples() {
        assert_eq!(multinomial_count(2, 3).unwrap(), 6);
        assert_eq!(multinomial_count(0, 7).unwrap(), 1);
        assert_eq!(multinomial_count(5, 4).unwrap(), 56);
        assert_eq!(multinomial_count(9, 1).unwrap(), 1);
        assert!(matches!(multinomial_count(10_000, 60), Err(TruncationError::Overflow { .. })));
    }

    #[test]
    fn zero_degree_bound_is_prefactor() {
        let p = EntireFamilyParams::all_ones(1);
        assert!((coeff_bound(&p, 0).unwrap().value() - E).abs() < 1e-15);
    }

    #[test]
    fn bound_at_saddle_degree() {
        let p = EntireFamilyParams::new(1.0, 1.0, 1.0, 1.0, 1.0, 2.0, 1.0, 1.0, 2).unwrap();
        let k_star = E * p.b * p.d * (p.n as f64).powf(p.d + p.t);
        let k = k_star.round() as u64;
        let got = coeff_bound(&p, k).unwrap().ln();
        let want = p.u * (p.n as f64).powf(p.v) + k as f64 / p.d * (k_star / k as f64).ln();
        assert!((got - want).abs() < 1e-12);
    }

    #[test]
    fn tail_validity_threshold() {
        let p = EntireFamilyParams::all_ones(1);
        let t = tail_bound(&p, 10300).unwrap();
        assert!(t.valid);
        assert!((t.threshold - E * (4.0 * E + 1.0).exp2()).abs() < 1e-8);
        assert!((t.value.log2() - (LOG2_E - 10300.0)).abs() < 1e-9);
        assert!(!tail_bound(&p, 10000).unwrap().valid);
    }

    #[test]
    fn truncation_degree_example() {
        let p = EntireFamilyParams::all_ones(1);
        let h = HolderClass::new(1.0, 1).unwrap();
        let k = truncation_degree(&p, &h, 1.0).unwrap();
        let want = (E * (4.0 * E + 1.0).exp2() * 4.0 * 2.0).ceil() as u64;
        assert_eq!(k, want);
        assert!(tail_bound(&p, k).unwrap().valid);
        assert!(matches!(truncation_degree(&p, &h, 0.0), Err(TruncationError::Threshold(_))));
    }

    #[test]
    fn floor_needs_n_two() {
        let h = HolderClass::new(1.0, 1).unwrap();
        let p = EntireFamilyParams::all_ones(2);
        let c = analytic_floor_constant(NormCase::Uniform, &h, &p).unwrap();
        let f = floor_lower_bound(&p, &h, NormCase::Uniform).unwrap();
        assert!((f - c / 2.0).abs() < 1e-18);
        assert!(floor_lower_bound(&EntireFamilyParams::all_ones(1), &h, NormCase::Uniform).is_err());
    }
}
