use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{jost_function, solve_modes, Potential, ShootingConfig, SpectralError, Spectrum};

/// Where the asymptotic constants s_j come from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum SSource {
    /// ln ψ_j + ξ_j x averaged over [0.7L, 0.9L] (exact exponential tail for compact support).
    AsymptoticFit,
    /// ln s_j supplied by the caller, one per mode.
    LnS(Vec<f64>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModeResidual {
    pub index: usize,
    pub xi: f64,
    /// 4ξ²/C.
    pub lhs: f64,
    /// s² (dF/dξ)² at iξ.
    pub rhs: Option<f64>,
    pub residual: Option<f64>,
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub modes: Vec<ModeResidual>,
    pub median_residual: Option<f64>,
    pub pass: bool,
}

const FIT_SPREAD_MAX: f64 = 1e-3;
const PASS_MEDIAN: f64 = 0.05;

pub fn characteristic_identity_check(
    spectrum: &Spectrum,
    potential: &Potential,
    omega: f64,
    config: &ShootingConfig,
    source: &SSource,
) -> Result<IdentityReport, SpectralError> {
    if spectrum.n == 0 {
        return Ok(IdentityReport { modes: vec![], median_residual: None, pass: true });
    }
    let ln_s: Vec<Result<f64, String>> = match source {
        SSource::LnS(v) => {
            if v.len() != spectrum.n {
                return Err(SpectralError::Config(format!("{} ln s values for {} modes", v.len(), spectrum.n)));
            }
            v.iter().map(|&x| Ok(x)).collect()
        }
        SSource::AsymptoticFit => {
            let modes = solve_modes(potential, omega, config)?;
            spectrum
                .xi
                .iter()
                .map(|&xi| {
                    let m = modes
                        .iter()
                        .min_by(|a, b| (a.xi - xi).abs().partial_cmp(&(b.xi - xi).abs()).unwrap())
                        .filter(|m| (m.xi - xi).abs() <= 1e-6 * xi)
                        .ok_or_else(|| "no solver mode matches this xi".to_string())?;
                    if potential.support_end().is_some() {
                        return Ok(m.ln_s);
                    }
                    match m.ln_s_fit {
                        Some((v, spread)) if spread <= FIT_SPREAD_MAX => Ok(v),
                        Some((_, spread)) => Err(format!("asymptotic fit ill-conditioned (spread {spread:.2e})")),
                        None => Err("asymptotic fit ill-conditioned (Q not negligible on the window)".into()),
                    }
                })
                .collect()
        }
    };
    let step = 1e-4 * spectrum.xi[0];
    let mut ks = Vec::with_capacity(2 * spectrum.n);
    for &xi in &spectrum.xi {
        ks.push(Complex64::new(0.0, xi + step));
        ks.push(Complex64::new(0.0, xi - step));
    }
    let vals = jost_function(potential, omega, &ks, 80, None)?;
    let mut modes = Vec::with_capacity(spectrum.n);
    for (j, (&xi, &c)) in spectrum.xi.iter().zip(&spectrum.c).enumerate() {
        let lhs = 4.0 * xi * xi / c;
        let dfdxi = (vals[2 * j].f - vals[2 * j + 1].f) / (2.0 * step);
        let mut row = ModeResidual { index: j + 1, xi, lhs, rhs: None, residual: None, note: None };
        match &ln_s[j] {
            Ok(ls) => {
                let rhs = (2.0 * ls + 2.0 * dfdxi.norm().ln()).exp();
                if rhs.is_finite() {
                    row.rhs = Some(rhs);
                    row.residual = Some((lhs - rhs).abs() / lhs);
                } else {
                    row.note = Some("s^2 (dF/dxi)^2 overflows".into());
                }
            }
            Err(note) => row.note = Some(note.clone()),
        }
        modes.push(row);
    }
    let mut res: Vec<f64> = modes.iter().filter_map(|m| m.residual).collect();
    res.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median = if res.is_empty() {
        None
    } else if res.len() % 2 == 1 {
        Some(res[res.len() / 2])
    } else {
        Some(0.5 * (res[res.len() / 2 - 1] + res[res.len() / 2]))
    };
    Ok(IdentityReport { pass: median.is_some_and(|m| m < PASS_MEDIAN), median_residual: median, modes })
}
