use serde::{Deserialize, Serialize};
use speclab_numerics::bisect;

use crate::{SpectralError, Spectrum};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SquareWellSpectrum {
    pub spectrum: Spectrum,
    /// |ω − π/2 mod π| ≥ 1/5.
    pub phase_ok: bool,
    /// Roots where the defining function has a near-zero slope.
    pub double_root_suspects: Vec<usize>,
    pub residuals: Vec<f64>,
}

/// h(μ) = ξ sin μ + μ cos μ with ξ = √(ω² − μ²).
fn defining(omega: f64, mu: f64) -> f64 {
    let xi = (omega * omega - mu * mu).max(0.0).sqrt();
    xi * mu.sin() + mu * mu.cos()
}

/// Distance from ω to the nearest π/2 + kπ.
pub(crate) fn phase_distance(omega: f64) -> f64 {
    let r = (omega - std::f64::consts::FRAC_PI_2).rem_euclid(std::f64::consts::PI);
    r.min(std::f64::consts::PI - r)
}

pub fn square_well_spectrum(omega: f64) -> Result<SquareWellSpectrum, SpectralError> {
    if !(omega > std::f64::consts::FRAC_PI_2) || !omega.is_finite() {
        return Err(SpectralError::NoBoundState(omega));
    }
    let step = std::f64::consts::PI / (4.0 * omega);
    let mut mus = Vec::new();
    let mut a = step * 1e-3;
    let mut fa = defining(omega, a);
    while a < omega {
        let b = (a + step).min(omega);
        let fb = defining(omega, b);
        if fa == 0.0 {
            mus.push(a);
        } else if fa * fb < 0.0 {
            mus.push(bisect(|m| defining(omega, m), a, b, 1e-14)?);
        }
        a = b;
        fa = fb;
        if b >= omega {
            break;
        }
    }
    // ξ = √(ω² − μ²) ascending means μ descending
    mus.retain(|&m| m < omega);
    mus.reverse();
    let mut xi = Vec::new();
    let mut c = Vec::new();
    let mut residuals = Vec::new();
    let mut suspects = Vec::new();
    for (j, &mu) in mus.iter().enumerate() {
        let x = (omega * omega - mu * mu).sqrt();
        let r = x * mu.sin() + mu * mu.cos();
        let dh = 1e-7;
        let slope = (defining(omega, mu + dh) - defining(omega, mu - dh)) / (2.0 * dh);
        if slope.abs() < 1e-10 {
            suspects.push(j + 1);
        }
        residuals.push(r.abs());
        xi.push(x);
        c.push(2.0 * x / (1.0 + x) * mu * mu);
    }
    let n = xi.len();
    Ok(SquareWellSpectrum {
        spectrum: Spectrum { omega, xi, c, n },
        phase_ok: phase_distance(omega) >= 0.2,
        double_root_suspects: suspects,
        residuals,
    })
}
