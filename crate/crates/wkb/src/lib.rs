//! WKB estimates for −ψ″ − ω²Q ψ = −ξ²ψ with Q even and decreasing.
//!
//! Everything is in the scaled variable η = ξ/ω. Φ(η) is the action between
//! the turning points ±x₊(η); levels solve Φ(η_j) = (j − ½)π/ω.

use serde::{Deserialize, Serialize};
use speclab_numerics::{bisect, integrate, QuadError, RootError};
use speclab_spectral::Potential;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WkbError {
    #[error("potential must be strictly decreasing on the half-line")]
    NotDecreasing,
    #[error("no turning point: eta = {eta} must lie in (0, sqrt Q(0) = {top})")]
    NoTurningPoint { eta: f64, top: f64 },
    #[error("tail integral diverges for decay exponent {0} (needs > 1)")]
    DivergentTail(f64),
    #[error("action at eta = 0 diverges for decay exponent {0} (needs > 2)")]
    DivergentAction(f64),
    #[error("no WKB level below omega = {0}")]
    NoLevels(f64),
    #[error("level {level}: {source}")]
    Level { level: usize, source: RootError },
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error(transparent)]
    Root(#[from] RootError),
}

/// Quantized levels, η₁ > η₂ > … > η_N.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WkbLevels {
    pub omega: f64,
    pub eta: Vec<f64>,
    pub theta_plus: Vec<f64>,
    /// ln s_j = ω θ₊(η_j).
    pub ln_s: Vec<f64>,
    /// exp(ln s_j); may be +∞ where it overflows.
    pub s: Vec<f64>,
}

impl WkbLevels {
    /// Levels of odd states (even j), ordered by ascending η, for comparison with
    /// the Dirichlet half-line spectrum. Returns (j, η_j, ln s_j).
    pub fn odd_levels(&self) -> Vec<(usize, f64, f64)> {
        let mut out: Vec<(usize, f64, f64)> = (0..self.eta.len())
            .filter(|i| (i + 1) % 2 == 0)
            .map(|i| (i + 1, self.eta[i], self.ln_s[i]))
            .collect();
        out.reverse();
        out
    }
}

const ABS_TOL: f64 = 1e-12;

fn check(potential: &Potential) -> Result<(), WkbError> {
    if potential.is_decreasing() {
        Ok(())
    } else {
        Err(WkbError::NotDecreasing)
    }
}

/// (x₋, x₊) with Q(x₊) = η², x₋ = −x₊.
pub fn turning_points(potential: &Potential, eta: f64) -> Result<(f64, f64), WkbError> {
    check(potential)?;
    let top = potential.at_origin().sqrt();
    if !(eta > 0.0 && eta < top) {
        return Err(WkbError::NoTurningPoint { eta, top });
    }
    let target = eta * eta;
    let mut hi: f64 = 1.0;
    while potential.eval(hi) > target {
        hi *= 2.0;
    }
    let g = |x: f64| potential.eval(x) - target;
    let x = bisect(g, 0.0, hi, 1e-13 * hi.max(1.0))?;
    Ok((-x, x))
}

/// Split [a, b] into pieces no longer than their left end (geometric beyond 1).
fn pieces(a: f64, b: f64) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let mut x = a;
    while x < b {
        let y = if x < 1.0 { 1.0f64.min(b) } else { (2.0 * x).min(b) };
        out.push((x, y));
        x = y;
    }
    out
}

fn integrate_pieces<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> Result<f64, WkbError> {
    let mut total = 0.0;
    for (x, y) in pieces(a, b) {
        total += integrate(&f, x, y, ABS_TOL, 1e-12, 400)?.value;
    }
    Ok(total)
}

/// Φ(η) = ∫_{x₋}^{x₊} √(Q − η²).
pub fn action_phi(potential: &Potential, eta: f64) -> Result<f64, WkbError> {
    check(potential)?;
    let top = potential.at_origin().sqrt();
    if eta == 0.0 {
        let beta = potential.decay_exponent().unwrap_or(f64::INFINITY);
        return match potential.integral_sqrt().map_err(|_| WkbError::DivergentAction(beta))? {
            Some(v) => Ok(2.0 * v),
            None => Err(WkbError::DivergentAction(beta)),
        };
    }
    if eta >= top {
        return Ok(0.0);
    }
    let (_, xp) = turning_points(potential, eta)?;
    let e2 = eta * eta;
    let f = |x: f64| (potential.eval(x) - e2).max(0.0).sqrt();
    let inner = integrate_pieces(f, 0.0, 0.5 * xp)?;
    // x = x₊ − u²
    let umax = (0.5 * xp).sqrt();
    let outer = integrate(|u| 2.0 * u * f(xp - u * u), 0.0, umax, ABS_TOL, 1e-12, 400)?.value;
    Ok(2.0 * (inner + outer))
}

/// ⌊ω Φ(0)/π⌋, with quadrature error below 1e-9 absorbed at integer boundaries.
pub fn wkb_count(potential: &Potential, omega: f64) -> Result<usize, WkbError> {
    let phi0 = action_phi(potential, 0.0)?;
    let v = omega * phi0 / std::f64::consts::PI;
    Ok((v + 1e-9).floor().max(0.0) as usize)
}

/// θ₊(η) = η x₊ + ∫_{x₊}^∞ (η − √(η² − Q)).
pub fn theta_plus(potential: &Potential, eta: f64) -> Result<f64, WkbError> {
    check(potential)?;
    let beta = potential.decay_exponent().unwrap_or(f64::INFINITY);
    if !(beta > 1.0) {
        return Err(WkbError::DivergentTail(beta));
    }
    let (_, xp) = turning_points(potential, eta)?;
    let e2 = eta * eta;
    let g = |y: f64| {
        let q = potential.eval(y).min(e2);
        // η − √(η² − q) without cancellation
        q / (eta + (e2 - q).sqrt())
    };
    let remainder = |y: f64| {
        let q = potential.eval(y);
        q * y / (2.0 * eta * (beta - 1.0)) + q * q * y / (8.0 * eta.powi(3) * (2.0 * beta - 1.0))
    };
    let mut split = 10.0 * xp.max(0.1);
    while remainder(split) > 1e-10 * eta * xp.max(1.0) {
        split *= 2.0;
    }
    // y = x₊ + u² on [x₊, 2x₊]
    let umax = xp.max(0.1).sqrt();
    let near = integrate(|u| 2.0 * u * g(xp + u * u), 0.0, umax, ABS_TOL, 1e-12, 400)?.value;
    let far = integrate_pieces(g, xp + umax * umax, split)?;
    Ok(eta * xp + near + far + remainder(split))
}

/// Solves Φ(η_j) = (j − ½)π/ω for j = 1..N.
pub fn wkb_levels(potential: &Potential, omega: f64) -> Result<WkbLevels, WkbError> {
    let n = wkb_count(potential, omega)?;
    if n == 0 {
        return Err(WkbError::NoLevels(omega));
    }
    let top = potential.at_origin().sqrt();
    let mut eta = Vec::with_capacity(n);
    for j in 1..=n {
        let target = (j as f64 - 0.5) * std::f64::consts::PI / omega;
        let f = |e: f64| action_phi(potential, e).map(|p| p - target).unwrap_or(f64::NAN);
        let lo = 1e-14 * top;
        let root = bisect(f, lo, top, 1e-10).map_err(|source| WkbError::Level { level: j, source })?;
        eta.push(root);
    }
    let theta: Vec<f64> = eta.iter().map(|&e| theta_plus(potential, e)).collect::<Result<_, _>>()?;
    let ln_s: Vec<f64> = theta.iter().map(|t| omega * t).collect();
    let s = ln_s.iter().map(|l| l.exp()).collect();
    Ok(WkbLevels { omega, eta, theta_plus: theta, ln_s, s })
}
