use std::f64::consts::{E, LOG2_E};

use speclab_holder_bump::{lower_bound_constant, HolderClass, NormCase};
use speclab_numerics::{Log2, NeumaierSum};

use crate::CountingError;

fn at_least(what: &'static str, got: u64, min: u64) -> Result<(), CountingError> {
    if got < min {
        Err(CountingError::TooSmall { what, min, got })
    } else {
        Ok(())
    }
}

fn lg(x: f64) -> f64 {
    x.log2()
}

fn sum(terms: &[f64]) -> f64 {
    terms.iter().copied().collect::<NeumaierSum>().total()
}

/// (4edq/n)^n: components of the complement of q hypersurfaces of degree ≤ d.
pub fn warren_component_bound(n: u64, d: u64, q: u64) -> Result<Log2, CountingError> {
    at_least("n", n, 1)?;
    at_least("d", d, 1)?;
    at_least("q", q, 1)?;
    let nf = n as f64;
    Ok(Log2(nf * sum(&[2.0, LOG2_E, lg(d as f64), lg(q as f64), -lg(nf)])))
}

/// (⌈8 n log₂ d⌉, ⌈18 n log₂ d⌉).
pub fn warren_thresholds(n: u64, d: u64) -> Result<(u64, u64), CountingError> {
    at_least("n", n, 1)?;
    at_least("d", d, 2)?;
    let base = n as f64 * lg(d as f64);
    Ok(((8.0 * base).ceil() as u64, (18.0 * base).ceil() as u64))
}

/// 2^{k(k−1)/2} d^{n+k} n^{n+2k}.
pub fn khovanskii_cell_bound(n: u64, k: u64, d: u64) -> Result<Log2, CountingError> {
    at_least("n", n, 2)?;
    at_least("d", d, 2)?;
    at_least("k", k, 1)?;
    let (nf, kf) = (n as f64, k as f64);
    Ok(Log2(sum(&[kf * (kf - 1.0) / 2.0, (nf + kf) * lg(d as f64), (nf + 2.0 * kf) * lg(nf)])))
}

/// 2^{k(k−1)/2} (4emdn)^{n+2k}.
pub fn khovanskii_complement_bound(n: u64, k: u64, d: u64, m: u64) -> Result<Log2, CountingError> {
    at_least("n", n, 2)?;
    at_least("d", d, 2)?;
    at_least("k", k, 1)?;
    at_least("m", m, 1)?;
    let (nf, kf) = (n as f64, k as f64);
    let inner = sum(&[2.0, LOG2_E, lg(m as f64), lg(d as f64), lg(nf)]);
    Ok(Log2(sum(&[kf * (kf - 1.0) / 2.0, (nf + 2.0 * kf) * inner])))
}

/// C(l,s) / (k² n log₂n log₂d)^{l/s} with
/// C = 1/(√s 2^{l+1} 38^{l/s} (⌊l⌋+1)^{⌊l⌋+1} (4(1+e))^{s(⌊l⌋+1)}).
/// n = 1 or d = 1 is promoted to 2.
pub fn khovanskii_floor(n: u64, k: u64, d: u64, holder: &HolderClass) -> Result<f64, CountingError> {
    at_least("n", n, 1)?;
    at_least("d", d, 1)?;
    at_least("k", k, 1)?;
    let (n, d) = (n.max(2) as f64, d.max(2) as f64);
    let s = holder.s as f64;
    let ls = holder.l / s;
    let p = holder.bump_power() as f64;
    let ln_c = -(0.5 * s.ln()
        + (holder.l + 1.0) * 2f64.ln()
        + ls * 38f64.ln()
        + p * p.ln()
        + s * p * (4.0 * (1.0 + E)).ln());
    let ln_den = ls * ((k * k) as f64 * n * lg(n) * lg(d)).ln();
    Ok((ln_c - ln_den).exp())
}

/// C_l / (n + Σ p_j)^l with C_l the uniform constant at s = 1.
pub fn exp_sum_distance_floor(n: u64, degrees: &[u64], holder: &HolderClass) -> Result<f64, CountingError> {
    if holder.s != 1 {
        return Err(CountingError::NotOneDimensional(holder.s));
    }
    at_least("n", n, 1)?;
    let total = n + degrees.iter().sum::<u64>();
    Ok(lower_bound_constant(NormCase::Uniform, holder) / (total as f64).powf(holder.l))
}
