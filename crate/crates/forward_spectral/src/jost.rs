use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use speclab_numerics::gauss::gauss_legendre;
use speclab_numerics::integrate;

use crate::grid::seg_max_q;
use crate::{Potential, SpectralError};

const NODES: usize = 16;
const TERM_TOL: f64 = 1e-16;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JostValue {
    pub k: Complex64,
    pub f: Complex64,
    /// Relative size of the neglected ∫_{x_cut}^∞ contribution.
    pub truncation_error: f64,
    /// Worst last-term / sum ratio of the successive approximations over panels.
    pub picard_ratio: f64,
    pub max_iterations: usize,
}

/// Gauss–Legendre nodes with S_ij = ∫_{τ_i}^1 ℓ_j.
struct Panel {
    tau: Vec<f64>,
    w: Vec<f64>,
    s: Vec<Vec<f64>>,
}

impl Panel {
    fn new() -> Self {
        let (tau, w) = gauss_legendre(NODES);
        let lagrange = |j: usize, t: f64| -> f64 {
            (0..NODES).filter(|&m| m != j).map(|m| (t - tau[m]) / (tau[j] - tau[m])).product()
        };
        let s = (0..NODES)
            .map(|i| {
                let half = 0.5 * (1.0 - tau[i]);
                let mid = 0.5 * (1.0 + tau[i]);
                (0..NODES)
                    .map(|j| (0..NODES).map(|q| w[q] * half * lagrange(j, mid + half * tau[q])).sum())
                    .collect()
            })
            .collect();
        Panel { tau, w, s }
    }
}

struct Outcome {
    f: Complex64,
    ratio: f64,
    iters: usize,
}

/// Panel edges from x_cut down to 0, never straddling a breakpoint.
fn panel_edges(potential: &Potential, omega: f64, k: Complex64, x_cut: f64) -> Vec<f64> {
    let omega2 = omega * omega;
    let mut bps: Vec<f64> = potential.breakpoints().into_iter().filter(|&b| b > 0.0 && b < x_cut).collect();
    bps.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut edges = vec![x_cut];
    let mut b = x_cut;
    let mut next_bp = bps.into_iter().peekable();
    while b > 0.0 {
        let mut h = (2.0 / k.norm()).min((0.5 * b).max(0.25)).min(b);
        if let Some(&bp) = next_bp.peek() {
            if b - h < bp {
                h = b - bp;
                next_bp.next();
            }
        }
        while omega2 * seg_max_q(potential, 1.0, b - h, b) * h * h > 0.25 {
            h *= 0.5;
        }
        b -= h;
        if b < 1e-12 * x_cut {
            b = 0.0;
        }
        edges.push(b);
    }
    edges
}

fn march(potential: &Potential, omega: f64, k: Complex64, x_cut: f64, picard_iters: usize, panel: &Panel) -> Result<Outcome, SpectralError> {
    let omega2 = omega * omega;
    let edges = panel_edges(potential, omega, k, x_cut);
    let i = Complex64::i();
    let mut fb = (i * k.re * x_cut).exp();
    let mut dfb = i * k * fb;
    let mut ln_acc = -k.im * x_cut;
    let mut worst: f64 = 0.0;
    let mut iters_max = 0;
    let kscale = k.norm().max(1e-300);
    for e in edges.windows(2) {
        let (b, a) = (e[0], e[1]);
        let c = 0.5 * (a + b);
        let hh = 0.5 * (b - a);
        let xs: Vec<f64> = panel.tau.iter().map(|t| c + hh * t).collect();
        let v: Vec<f64> = xs.iter().map(|&x| -omega2 * potential.eval_branch(x, c)).collect();
        let phase = |x: f64| ((k * (x - c)).sin(), (k * (x - c)).cos());
        let trig: Vec<(Complex64, Complex64)> = xs.iter().map(|&x| phase(x)).collect();
        let (sa, ca) = phase(a);
        let free = |x: f64| {
            let (sn, cs) = ((k * (x - b)).sin(), (k * (x - b)).cos());
            (fb * cs + dfb * sn / k, -fb * k * sn + dfb * cs)
        };
        let mut delta: Vec<Complex64> = xs.iter().map(|&x| free(x).0).collect();
        let (mut fa, mut dfa) = free(a);
        let mut total = delta.clone();
        let mut prev_norm = delta.iter().map(|d| d.norm()).fold(0.0, f64::max);
        let mut ratio = 1.0;
        let mut n = 0;
        while n < picard_iters {
            n += 1;
            let gs: Vec<Complex64> = (0..NODES).map(|j| trig[j].0 * v[j] * delta[j]).collect();
            let gc: Vec<Complex64> = (0..NODES).map(|j| trig[j].1 * v[j] * delta[j]).collect();
            let mut next = Vec::with_capacity(NODES);
            for (r, row) in panel.s.iter().enumerate() {
                let mut sa_ = Complex64::new(0.0, 0.0);
                let mut sc_ = Complex64::new(0.0, 0.0);
                for j in 0..NODES {
                    sa_ += gs[j] * row[j];
                    sc_ += gc[j] * row[j];
                }
                let (sn, cs) = trig[r];
                next.push((cs * sa_ - sn * sc_) * hh / k);
            }
            let mut ia = Complex64::new(0.0, 0.0);
            let mut ic = Complex64::new(0.0, 0.0);
            for j in 0..NODES {
                ia += gs[j] * panel.w[j];
                ic += gc[j] * panel.w[j];
            }
            ia *= hh;
            ic *= hh;
            fa += (ca * ia - sa * ic) / k;
            dfa += -(ca * ic + sa * ia);
            for (t, d) in total.iter_mut().zip(&next) {
                *t += d;
            }
            let nrm = next.iter().map(|d| d.norm()).fold(0.0, f64::max);
            let tot = total.iter().map(|d| d.norm()).fold(0.0, f64::max);
            if n >= 3 && prev_norm > 0.0 && nrm >= prev_norm && nrm > TERM_TOL * tot {
                return Err(SpectralError::Picard { k: k.to_string(), ratio: nrm / prev_norm });
            }
            ratio = if tot > 0.0 { nrm / tot } else { 0.0 };
            delta = next;
            prev_norm = nrm;
            if ratio <= TERM_TOL {
                break;
            }
        }
        worst = worst.max(ratio);
        iters_max = iters_max.max(n);
        let m = fa.norm().max(dfa.norm() / kscale);
        if m > 0.0 && m.is_finite() {
            fb = fa / m;
            dfb = dfa / m;
            ln_acc += m.ln();
        } else {
            fb = fa;
            dfb = dfa;
        }
    }
    Ok(Outcome { f: fb * ln_acc.exp(), ratio: worst, iters: iters_max })
}

/// ω² ∫_{x_cut}^∞ Q(t) min(t, 1/|k|) dt.
fn tail_estimate(potential: &Potential, omega: f64, k: Complex64, x_cut: f64) -> Result<f64, SpectralError> {
    if let Some(end) = potential.support_end() {
        if x_cut >= end {
            return Ok(0.0);
        }
    }
    let inv_k = 1.0 / k.norm();
    let far = 64.0 * x_cut;
    let body = integrate(|t| potential.eval(t) * t.min(inv_k), x_cut, far, 1e-300, 1e-8, 200)?.value;
    let beta = potential.decay_exponent().unwrap_or(f64::INFINITY);
    let rest = if beta.is_finite() { potential.eval(far) * far * far.min(inv_k) / (beta - 2.0).max(1e-3) } else { 0.0 };
    Ok(omega * omega * (body + rest))
}

/// Smallest power of two whose truncation estimate is below `tol` for every k.
pub fn jost_cut(potential: &Potential, omega: f64, ks: &[Complex64], tol: f64) -> Result<f64, SpectralError> {
    let mut x = potential.support_end().unwrap_or(1.0);
    for &k in ks {
        while tail_estimate(potential, omega, k, x)? > tol && x < 1e9 {
            x *= 2.0;
        }
    }
    Ok(x)
}

/// F(k) = f(k, 0) for the Jost solution f ~ e^{ikx}. `x_cut = None` picks a
/// cut per k from a truncation tolerance of 1e-10.
pub fn jost_function(
    potential: &Potential,
    omega: f64,
    k_values: &[Complex64],
    picard_iters: usize,
    x_cut: Option<f64>,
) -> Result<Vec<JostValue>, SpectralError> {
    potential.validate()?;
    for &k in k_values {
        if k.im < 0.0 || k.norm() == 0.0 || !k.is_finite() {
            return Err(SpectralError::BadK(k.to_string()));
        }
    }
    if let Some(x) = x_cut {
        if !(x > 0.0) {
            return Err(SpectralError::Config(format!("x_cut must be > 0, got {x}")));
        }
    }
    let panel = Panel::new();
    k_values
        .par_iter()
        .map(|&k| {
            let x_cut = match x_cut {
                Some(x) => x,
                None => jost_cut(potential, omega, &[k], 1e-10)?,
            };
            let out = march(potential, omega, k, x_cut, picard_iters.max(1), &panel)?;
            Ok(JostValue {
                k,
                f: out.f,
                truncation_error: tail_estimate(potential, omega, k, x_cut)?,
                picard_ratio: out.ratio,
                max_iterations: out.iters,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cumulative_matrix_integrates_polynomials() {
        let p = Panel::new();
        // ∫_τ^1 t³ dt = (1 − τ⁴)/4
        for (i, &t) in p.tau.iter().enumerate() {
            let v: f64 = (0..NODES).map(|j| p.s[i][j] * p.tau[j].powi(3)).sum();
            assert!((v - (1.0 - t.powi(4)) / 4.0).abs() < 1e-14);
        }
    }

    #[test]
    fn square_well_closed_form() {
        // F(k) = e^{ik}(cos μ − i k sin μ / μ) with μ² = ω² + k²
        let omega = 3.0;
        let ks = [Complex64::new(2.0, 0.0), Complex64::new(0.5, 1.5), Complex64::new(0.0, 2.0)];
        let vals = jost_function(&Potential::SquareWell, omega, &ks, 60, None).unwrap();
        for jv in vals {
            let k = jv.k;
            let mu = (k * k + omega * omega).sqrt();
            let exact = (Complex64::i() * k).exp() * (mu.cos() - Complex64::i() * k * mu.sin() / mu);
            assert!((jv.f - exact).norm() < 1e-11 * exact.norm().max(1.0), "{k}: {} vs {exact}", jv.f);
        }
    }

    #[test]
    fn rejects_lower_half_plane() {
        let r = jost_function(&Potential::SquareWell, 1.0, &[Complex64::new(1.0, -0.1)], 10, None);
        assert!(matches!(r, Err(SpectralError::BadK(_))));
    }
}
