//! Q⁰_ω(x) = (2/ω²) d²/dx² ln|det W(x)| from (ξ_j, C_j).
//!
//! W_{sr}(x) = 4∫₀ˣ sinh(ξ_s t) sinh(ξ_r t) dt + δ_{sr} e^{ζ_{N+r}}. Entries grow
//! like e^{(ξ_s+ξ_r)x}, so everything is computed on D⁻¹WD⁻¹ with
//! D = diag(e^{ξ_j x}); the trace identities are invariant under that similarity.

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use speclab_numerics::quad::cumulative_simpson;
use speclab_numerics::{integrate, QuadError};
use speclab_spectral::{Potential, Spectrum};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GlError {
    #[error("parameter vector must have even positive length, got {0}")]
    Length(usize),
    #[error("xi_{index} = {value} must be positive and finite")]
    Xi { index: usize, value: f64 },
    #[error("xi_{a} and xi_{b} coincide")]
    Coincident { a: usize, b: usize },
    #[error("ratio exponent zeta_{index} = {value} is not finite")]
    Ratio { index: usize, value: f64 },
    #[error("x = {0} must be finite and >= 0")]
    BadX(f64),
    #[error("grid must be increasing and start at 0")]
    Grid,
    #[error("grid must be uniform with an even number of panels for Simpson primitives")]
    NonUniform,
    #[error(transparent)]
    Quad(#[from] QuadError),
}

/// ζ = (ξ₁..ξ_N, ln(4ξ₁²/C₁)..ln(4ξ_N²/C_N)).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GlParameters {
    pub zeta: Vec<f64>,
}

impl GlParameters {
    pub fn new(zeta: Vec<f64>) -> Result<Self, GlError> {
        if zeta.is_empty() || !zeta.len().is_multiple_of(2) {
            return Err(GlError::Length(zeta.len()));
        }
        let n = zeta.len() / 2;
        for (i, &x) in zeta[..n].iter().enumerate() {
            if !(x > 0.0 && x.is_finite()) {
                return Err(GlError::Xi { index: i + 1, value: x });
            }
        }
        for a in 0..n {
            for b in a + 1..n {
                if zeta[a] == zeta[b] {
                    return Err(GlError::Coincident { a: a + 1, b: b + 1 });
                }
            }
        }
        for (i, &r) in zeta[n..].iter().enumerate() {
            if !r.is_finite() {
                return Err(GlError::Ratio { index: n + i + 1, value: r });
            }
        }
        Ok(GlParameters { zeta })
    }

    pub fn from_spectrum(sp: &Spectrum) -> Result<Self, GlError> {
        let mut zeta = sp.xi.clone();
        zeta.extend(sp.xi.iter().zip(&sp.c).map(|(x, c)| (4.0 * x * x / c).ln()));
        Self::new(zeta)
    }

    pub fn n(&self) -> usize {
        self.zeta.len() / 2
    }

    pub fn xi(&self) -> &[f64] {
        &self.zeta[..self.n()]
    }

    /// 4ξ_j²/C_j.
    pub fn ratio(&self, j: usize) -> f64 {
        self.zeta[self.n() + j].exp()
    }
}

/// sinh(y)/y, five Taylor terms below |y| = 1e-4.
pub fn sinhc(y: f64) -> f64 {
    if y.abs() < 1e-4 {
        let y2 = y * y;
        1.0 + y2 / 6.0 * (1.0 + y2 / 20.0 * (1.0 + y2 / 42.0 * (1.0 + y2 / 72.0)))
    } else {
        y.sinh() / y
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WMatrix {
    /// Unscaled W(x); may overflow for large ξx.
    pub raw: DMatrix<f64>,
    /// D⁻¹ W D⁻¹.
    pub scaled: DMatrix<f64>,
    /// 2xΣξ_j, so that ln|det W| = scale_exponent + ln|det scaled|.
    pub scale_exponent: f64,
}

fn check_x(x: f64) -> Result<(), GlError> {
    if x.is_finite() && x >= 0.0 {
        Ok(())
    } else {
        Err(GlError::BadX(x))
    }
}

fn symmetric<F: Fn(usize, usize) -> f64>(n: usize, f: F) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(n, n);
    for s in 0..n {
        for r in s..n {
            let v = f(s, r);
            m[(s, r)] = v;
            m[(r, s)] = v;
        }
    }
    m
}

pub fn w_matrix(params: &GlParameters, x: f64) -> Result<WMatrix, GlError> {
    check_x(x)?;
    let xi = params.xi();
    let n = params.n();
    let raw = symmetric(n, |s, r| {
        let (a, b) = (xi[s], xi[r]);
        let sum = 2.0 * x * sinhc((a + b) * x);
        if s == r {
            sum - (2.0 * x - params.ratio(r))
        } else {
            sum - 2.0 * x * sinhc((a - b) * x)
        }
    });
    let scaled = symmetric(n, |s, r| {
        let (a, b) = (xi[s], xi[r]);
        let p = a + b;
        let sum = -(-2.0 * p * x).exp_m1() / p;
        if s == r {
            sum - (2.0 * x - params.ratio(r)) * (-2.0 * a * x).exp()
        } else {
            let z = (a - b).abs();
            let diff = if z * x < 1e-4 {
                2.0 * x * sinhc(z * x) * (-p * x).exp()
            } else {
                ((z - p) * x).exp() * -(-2.0 * z * x).exp_m1() / z
            };
            sum - diff
        }
    });
    Ok(WMatrix { raw, scaled, scale_exponent: 2.0 * x * xi.iter().sum::<f64>() })
}

#[derive(Clone, Debug, PartialEq)]
pub struct WDerivatives {
    pub first: DMatrix<f64>,
    pub second: DMatrix<f64>,
    pub first_scaled: DMatrix<f64>,
    pub second_scaled: DMatrix<f64>,
}

/// W′ = 4 sinh(ξ_s x) sinh(ξ_r x), W″ its derivative; scaled by D⁻¹·D⁻¹.
pub fn w_x_derivatives(params: &GlParameters, x: f64) -> Result<WDerivatives, GlError> {
    check_x(x)?;
    let xi = params.xi();
    let n = params.n();
    let first = symmetric(n, |s, r| 4.0 * (xi[s] * x).sinh() * (xi[r] * x).sinh());
    let second = symmetric(n, |s, r| {
        let (a, b) = (xi[s], xi[r]);
        4.0 * (a * (a * x).cosh() * (b * x).sinh() + b * (a * x).sinh() * (b * x).cosh())
    });
    // e^{−ξx}·2sinh(ξx) = 1 − e^{−2ξx}, e^{−ξx}·2cosh(ξx) = 1 + e^{−2ξx}
    let sh: Vec<f64> = xi.iter().map(|&a| -(-2.0 * a * x).exp_m1()).collect();
    let ch: Vec<f64> = xi.iter().map(|&a| 1.0 + (-2.0 * a * x).exp()).collect();
    let first_scaled = symmetric(n, |s, r| sh[s] * sh[r]);
    let second_scaled = symmetric(n, |s, r| xi[s] * ch[s] * sh[r] + xi[r] * sh[s] * ch[r]);
    Ok(WDerivatives { first, second, first_scaled, second_scaled })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PointFlag {
    Ok,
    IllConditioned,
    Singular,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WEval {
    pub x: f64,
    pub logdet: f64,
    pub d1: Option<f64>,
    pub d2: Option<f64>,
    pub condition_estimate: f64,
    pub flag: PointFlag,
}

const PIVOT_FLOOR: f64 = 1e-300;
const COND_LIMIT: f64 = 1e12;

/// LU (partial pivoting) on the scaled matrix; ln|det| and trace identities.
pub fn eval_point(params: &GlParameters, x: f64) -> Result<WEval, GlError> {
    let w = w_matrix(params, x)?;
    let der = w_x_derivatives(params, x)?;
    let lu = w.scaled.clone().lu();
    let piv: Vec<f64> = lu.u().diagonal().iter().map(|v| v.abs()).collect();
    let pmax = piv.iter().cloned().fold(0.0, f64::max);
    let pmin = piv.iter().cloned().fold(f64::INFINITY, f64::min);
    if !(pmin >= PIVOT_FLOOR) {
        return Ok(WEval { x, logdet: f64::NEG_INFINITY, d1: None, d2: None, condition_estimate: f64::INFINITY, flag: PointFlag::Singular });
    }
    let logdet = w.scale_exponent + piv.iter().map(|p| p.ln()).sum::<f64>();
    let cond = pmax / pmin;
    let a = lu.solve(&der.first_scaled).expect("nonsingular after pivot check");
    let b = lu.solve(&der.second_scaled).expect("nonsingular after pivot check");
    let d1 = a.trace();
    let d2 = b.trace() - (&a * &a).trace();
    let flag = if cond < COND_LIMIT { PointFlag::Ok } else { PointFlag::IllConditioned };
    Ok(WEval { x, logdet, d1: Some(d1), d2: Some(d2), condition_estimate: cond, flag })
}

fn check_grid(grid: &[f64]) -> Result<(), GlError> {
    if grid.first().is_some_and(|&x| x < 0.0) || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(GlError::Grid);
    }
    Ok(())
}

pub fn logdet_profile(params: &GlParameters, grid: &[f64]) -> Result<Vec<WEval>, GlError> {
    check_grid(grid)?;
    grid.par_iter().map(|&x| eval_point(params, x)).collect()
}

/// (1/Ψ)∂Ψ/∂x with Ψ = det W̃; the same number as d1.
pub fn psi_log_derivative(params: &GlParameters, grid: &[f64]) -> Result<Vec<(f64, Option<f64>)>, GlError> {
    Ok(logdet_profile(params, grid)?.into_iter().map(|e| (e.x, e.d1)).collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfilePoint {
    pub x: f64,
    pub logdet: f64,
    pub d1: Option<f64>,
    pub d2: Option<f64>,
    pub q_reconstructed: Option<f64>,
    pub flag: PointFlag,
}

pub fn reconstruct_q(params: &GlParameters, omega: f64, grid: &[f64]) -> Result<Vec<ProfilePoint>, GlError> {
    let scale = 2.0 / (omega * omega);
    Ok(logdet_profile(params, grid)?
        .into_iter()
        .map(|e| ProfilePoint {
            x: e.x,
            logdet: e.logdet,
            d1: e.d1,
            d2: e.d2,
            q_reconstructed: if e.flag == PointFlag::Singular { None } else { e.d2.map(|d| scale * d) },
            flag: e.flag,
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrimitiveError {
    /// sup |∫₀ˣ Q − ∫₀ˣ Q⁰|.
    pub single: f64,
    /// sup |∫₀ˣ Q − 2∫₀ˣ Q⁰|.
    pub doubled: f64,
    pub excluded: usize,
    pub note: Option<String>,
}

/// Sup over grid points in [0, X]; flagged values are bridged linearly for the
/// primitive and left out of the sup.
pub fn primitive_error(true_potential: &Potential, profile: &[ProfilePoint], x_max: f64) -> Result<PrimitiveError, GlError> {
    let pts: Vec<&ProfilePoint> = profile.iter().filter(|p| p.x <= x_max * (1.0 + 1e-12)).collect();
    if pts.len() < 3 || pts[0].x != 0.0 {
        return Err(GlError::Grid);
    }
    let h = pts[1].x - pts[0].x;
    if pts.windows(2).any(|w| ((w[1].x - w[0].x) - h).abs() > 1e-9 * h) {
        return Err(GlError::NonUniform);
    }
    let n = pts.len();
    let good: Vec<usize> = (0..n).filter(|&i| pts[i].q_reconstructed.is_some_and(f64::is_finite)).collect();
    if good.is_empty() {
        return Ok(PrimitiveError { single: f64::NAN, doubled: f64::NAN, excluded: n, note: Some("no usable points".into()) });
    }
    let mut q0 = vec![0.0; n];
    for i in 0..n {
        q0[i] = match pts[i].q_reconstructed.filter(|v| v.is_finite()) {
            Some(v) => v,
            None => {
                let lo = good.iter().rev().find(|&&g| g < i);
                let hi = good.iter().find(|&&g| g > i);
                match (lo, hi) {
                    (Some(&a), Some(&b)) => {
                        let t = (i - a) as f64 / (b - a) as f64;
                        let (va, vb) = (pts[a].q_reconstructed.unwrap(), pts[b].q_reconstructed.unwrap());
                        va + t * (vb - va)
                    }
                    (Some(&a), None) => pts[a].q_reconstructed.unwrap(),
                    (None, Some(&b)) => pts[b].q_reconstructed.unwrap(),
                    (None, None) => unreachable!(),
                }
            }
        };
    }
    let recon = cumulative_simpson(&q0, h);
    let mut exact = vec![0.0; n];
    for i in 1..n {
        let (a, b) = (pts[i - 1].x, pts[i].x);
        let mid = 0.5 * (a + b);
        exact[i] = exact[i - 1] + integrate(|t| true_potential.eval_branch(t, mid), a, b, 1e-15, 1e-13, 50)?.value;
    }
    let mut single: f64 = 0.0;
    let mut doubled: f64 = 0.0;
    for &i in &good {
        single = single.max((exact[i] - recon[i]).abs());
        doubled = doubled.max((exact[i] - 2.0 * recon[i]).abs());
    }
    let excluded = n - good.len();
    let note = (excluded > 0).then(|| format!("{excluded} flagged points bridged and excluded from the sup"));
    Ok(PrimitiveError { single, doubled, excluded, note })
}
