use rand::{Rng, RngExt};
use serde::{Deserialize, Serialize};

use crate::{CountingError, Poly1};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpTerm {
    pub poly: Poly1,
    pub zeta: f64,
}

/// ψ(t) = Σ_j P_j(t) exp(ζ_j t) on [a, b].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpSum {
    pub terms: Vec<ExpTerm>,
    pub a: f64,
    pub b: f64,
}

impl ExpSum {
    pub fn new(terms: Vec<ExpTerm>, a: f64, b: f64) -> Result<Self, CountingError> {
        if !(a < b) {
            return Err(CountingError::Interval(a, b));
        }
        for i in 0..terms.len() {
            for j in i + 1..terms.len() {
                if terms[i].zeta == terms[j].zeta {
                    return Err(CountingError::RepeatedExponent(i, j));
                }
            }
        }
        if terms.iter().all(|t| t.poly.is_zero()) {
            return Err(CountingError::ZeroFunction);
        }
        Ok(ExpSum { terms, a, b })
    }

    /// n + Σ p_j, the Descartes budget.
    pub fn budget(&self) -> usize {
        self.terms.len() + self.terms.iter().map(|t| t.poly.degree()).sum::<usize>()
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.terms.iter().map(|term| term.poly.eval(t) * (term.zeta * t).exp()).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroCount {
    pub count: usize,
    pub roots: Vec<f64>,
    /// Near-zero local minima of |ψ| without a sign change; not counted.
    pub tangential: Vec<f64>,
}

const TANGENT_TOL: f64 = 1e-13;

/// Sign changes of ψ over a uniform scan, each refined by bisection.
pub fn count_exp_sum_zeros(sum: &ExpSum, scan_points: usize) -> Result<ZeroCount, CountingError> {
    let needed = 10 * sum.budget();
    if scan_points < needed.max(2) {
        return Err(CountingError::ScanTooCoarse { needed: needed.max(2), got: scan_points });
    }
    let h = (sum.b - sum.a) / (scan_points - 1) as f64;
    let ts: Vec<f64> = (0..scan_points).map(|i| if i + 1 == scan_points { sum.b } else { sum.a + i as f64 * h }).collect();
    let vs: Vec<f64> = ts.iter().map(|&t| sum.eval(t)).collect();

    let mut roots = Vec::new();
    let mut tangential = Vec::new();
    let mut last: Option<usize> = None;
    for i in 0..scan_points {
        if vs[i] == 0.0 {
            continue;
        }
        if let Some(j) = last {
            if vs[j].signum() != vs[i].signum() {
                let root = match (j + 1..i).find(|&k| vs[k] == 0.0) {
                    Some(k) => ts[k],
                    None => speclab_numerics::bisect(|t| sum.eval(t), ts[j], ts[i], 1e-12)
                        .unwrap_or(0.5 * (ts[j] + ts[i])),
                };
                roots.push(root);
            } else if i > j + 1 {
                tangential.extend((j + 1..i).map(|k| ts[k]));
            }
        } else if i > 0 {
            roots.push(ts[0]);
        }
        last = Some(i);
    }
    match last {
        None => return Err(CountingError::ZeroFunction),
        Some(j) if j + 1 < scan_points => roots.push(ts[scan_points - 1]),
        _ => {}
    }
    for i in 1..scan_points.saturating_sub(1) {
        let (l, m, r) = (vs[i - 1], vs[i], vs[i + 1]);
        let local_min = m.abs() < l.abs() && m.abs() < r.abs();
        if m != 0.0 && local_min && m.abs() < TANGENT_TOL && l.signum() == m.signum() && r.signum() == m.signum() {
            tangential.push(ts[i]);
        }
    }
    Ok(ZeroCount { count: roots.len(), roots, tangential })
}

/// n constant-coefficient terms, c_j ∈ [-1, 1], ζ_j ∈ [-5, 5] distinct, on [-1, 1].
pub fn random_exp_sum<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ExpSum {
    let mut zetas: Vec<f64> = Vec::with_capacity(n);
    while zetas.len() < n {
        let z = rng.random_range(-5.0..=5.0);
        if zetas.iter().all(|w: &f64| (w - z).abs() > 1e-6) {
            zetas.push(z);
        }
    }
    let terms = zetas
        .into_iter()
        .map(|zeta| {
            let mut c = 0.0;
            while c == 0.0 {
                c = rng.random_range(-1.0..=1.0);
            }
            ExpTerm { poly: Poly1::new(vec![c]), zeta }
        })
        .collect();
    ExpSum { terms, a: -1.0, b: 1.0 }
}
