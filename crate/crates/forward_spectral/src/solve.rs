use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use speclab_numerics::{brent, simpson};

use crate::grid::{build_grid, cut_point};
use crate::shoot::{kappa_at, linear_shot, prufer_count, Grid};
use crate::{Potential, SpectralError, Spectrum};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormQuadrature {
    #[default]
    Simpson,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShootingConfig {
    /// Upper cap on the per-mode cut L.
    pub domain_cut: f64,
    /// Base step on [0, 1]; relative step x·grid_step beyond.
    pub grid_step: f64,
    /// Relative tolerance on each ξ_j.
    pub eig_tol: f64,
    /// L is the first x with ω²Q(x) ≤ tail_tol·max(ξ², 1/x²).
    pub tail_tol: f64,
    pub norm_quadrature: NormQuadrature,
}

impl ShootingConfig {
    pub fn for_problem(potential: &Potential, omega: f64) -> Self {
        let s = omega * potential.sup().sqrt();
        ShootingConfig {
            domain_cut: 1e7,
            grid_step: 0.002 / s.max(1.0),
            eig_tol: 1e-10,
            tail_tol: 1e-8,
            norm_quadrature: NormQuadrature::Simpson,
        }
    }

    pub fn validate(&self, potential: &Potential, omega: f64) -> Result<(), SpectralError> {
        potential.validate()?;
        if !(omega.is_finite() && omega > 0.0) {
            return Err(SpectralError::Config(format!("omega must be > 0, got {omega}")));
        }
        if !(self.grid_step > 0.0 && self.eig_tol > 0.0 && self.tail_tol > 0.0 && self.domain_cut > 1.0) {
            return Err(SpectralError::Config("grid_step, eig_tol and tail_tol must be > 0, domain_cut > 1".into()));
        }
        let s = self.grid_step * omega * potential.sup().sqrt();
        if s >= 0.05 {
            return Err(SpectralError::Config(format!("grid_step·ω·sup√Q = {s:.4} must stay below 0.05")));
        }
        Ok(())
    }
}

/// One solved bound state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Mode {
    pub index: usize,
    pub xi: f64,
    pub c: f64,
    /// ln s with ψ(x) ~ s e^{−ξx}, from the exponential continuation at the cut.
    pub ln_s: f64,
    /// Fit of ln ψ + ξx on [0.7L, 0.9L] and its spread, when Q is negligible there.
    pub ln_s_fit: Option<(f64, f64)>,
    pub cut: f64,
    pub x_match: f64,
    pub norm_check: f64,
}

fn grid_for(potential: &Potential, omega: f64, xi: f64, cfg: &ShootingConfig) -> Grid {
    let l = cut_point(potential, omega, xi, cfg.tail_tol, cfg.domain_cut);
    Grid::new(build_grid(potential, omega, xi, l, cfg.grid_step))
}

/// #{j : ξ_j > ξ}.
fn count_above(potential: &Potential, omega: f64, xi: f64, cfg: &ShootingConfig) -> Result<usize, SpectralError> {
    let grid = grid_for(potential, omega, xi, cfg);
    prufer_count(potential, omega, xi, &grid)
}

/// Number of bound states: Dirichlet node count at λ = 0⁻.
pub fn count_eigenvalues(potential: &Potential, omega: f64, config: &ShootingConfig) -> Result<usize, SpectralError> {
    config.validate(potential, omega)?;
    count_above(potential, omega, 0.0, config)
}

struct Bracket {
    lo: f64,
    hi: f64,
}

fn isolate(
    potential: &Potential,
    omega: f64,
    cfg: &ShootingConfig,
    lo: f64,
    hi: f64,
    n_lo: usize,
    n_hi: usize,
    out: &mut Vec<Bracket>,
) -> Result<(), SpectralError> {
    if n_lo == n_hi {
        return Ok(());
    }
    if n_lo == n_hi + 1 && lo > 0.0 {
        out.push(Bracket { lo, hi });
        return Ok(());
    }
    if hi - lo <= 1e-13 * hi {
        return Err(SpectralError::Bracket {
            mode: n_hi,
            lo,
            hi,
            reason: format!("{} eigenvalues could not be separated", n_lo - n_hi),
        });
    }
    let mid = if n_lo == n_hi + 1 { 0.5 * hi } else { 0.5 * (lo + hi) };
    let mid = if lo == 0.0 && n_lo == n_hi + 1 { mid } else { mid.max(lo) };
    let n_mid = count_above(potential, omega, mid, cfg)?;
    if lo == 0.0 && n_lo == n_hi + 1 {
        // shrink the bottom bracket away from 0
        if n_mid == n_lo {
            out.push(Bracket { lo: mid, hi });
            return Ok(());
        }
        return isolate(potential, omega, cfg, mid, hi, n_mid, n_hi, out).and_then(|_| {
            isolate(potential, omega, cfg, 0.0, mid, n_lo, n_mid, out)
        });
    }
    isolate(potential, omega, cfg, lo, mid, n_lo, n_mid, out)?;
    isolate(potential, omega, cfg, mid, hi, n_mid, n_hi, out)
}

/// Match point: last grid point where ω²Q − ξ² ≥ 0.
fn match_index(potential: &Potential, omega: f64, xi: f64, grid: &Grid) -> usize {
    let omega2 = omega * omega;
    let mut m = 1;
    for (s, seg) in grid.segs.iter().enumerate() {
        for i in 0..=seg.steps {
            if omega2 * potential.eval_branch(seg.x(i), seg.mid()) >= xi * xi {
                m = m.max(grid.start[s] + i);
            }
        }
    }
    m.min(grid.last())
}

struct Matched {
    fwd: crate::shoot::Shot,
    bwd: crate::shoot::Shot,
    kappa: f64,
}

fn shoot_pair(potential: &Potential, omega: f64, xi: f64, grid: &Grid, m: usize) -> Matched {
    let l = grid.xs[grid.last()];
    let kappa = kappa_at(potential, omega, xi, l);
    let fwd = linear_shot(potential, omega, xi, grid, 0, m, (0.0, 1.0));
    let bwd = linear_shot(potential, omega, xi, grid, grid.last(), m, (1.0, -kappa));
    Matched { fwd, bwd, kappa }
}

/// Scale-free Wronskian of the two shots at the match point.
fn mismatch(mt: &Matched, scale: f64) -> f64 {
    let (pf, df) = (*mt.fwd.psi.last().unwrap(), *mt.fwd.dpsi.last().unwrap());
    let (pb, db) = (*mt.bwd.psi.last().unwrap(), *mt.bwd.dpsi.last().unwrap());
    let nf = pf.hypot(df / scale);
    let nb = pb.hypot(db / scale);
    (pf * db - df * pb) / (scale * nf * nb)
}

fn solve_mode(
    potential: &Potential,
    omega: f64,
    cfg: &ShootingConfig,
    index: usize,
    br: &Bracket,
) -> Result<Mode, SpectralError> {
    let grid = grid_for(potential, omega, br.lo, cfg);
    let mid = 0.5 * (br.lo + br.hi);
    let m = match_index(potential, omega, mid, &grid);
    let scale = |xi: f64| xi.max(1e-300);
    let d = |xi: f64| mismatch(&shoot_pair(potential, omega, xi, &grid, m), scale(xi));
    let xi = brent(d, br.lo, br.hi, 0.1 * cfg.eig_tol * br.hi).map_err(|e| SpectralError::Bracket {
        mode: index,
        lo: br.lo,
        hi: br.hi,
        reason: e.to_string(),
    })?;
    let mt = shoot_pair(potential, omega, xi, &grid, m);

    // ln|ψ| per point and signs, backward shot rescaled onto the forward one
    let sc = scale(xi);
    let (pf, df) = (*mt.fwd.psi.last().unwrap(), *mt.fwd.dpsi.last().unwrap());
    let (pb, db) = (*mt.bwd.psi.last().unwrap(), *mt.bwd.dpsi.last().unwrap());
    let ratio = (pf * pb + df * db / (sc * sc)) / (pb * pb + db * db / (sc * sc));
    let ln_alpha = mt.fwd.ln_scale.last().unwrap() - mt.bwd.ln_scale.last().unwrap() + ratio.abs().ln();
    let sign_b = ratio.signum();
    let n = grid.xs.len();
    let mut lnabs = vec![f64::NEG_INFINITY; n];
    let mut sign = vec![0.0; n];
    for i in 0..=m {
        let v = mt.fwd.psi[i];
        lnabs[i] = v.abs().ln() + mt.fwd.ln_scale[i];
        sign[i] = v.signum();
    }
    for (k, i) in (m..n).rev().enumerate() {
        let v = mt.bwd.psi[k];
        lnabs[i] = v.abs().ln() + mt.bwd.ln_scale[k] + ln_alpha;
        sign[i] = v.signum() * sign_b;
    }
    let top = lnabs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !top.is_finite() {
        return Err(SpectralError::Normalization { mode: index });
    }
    let rel: Vec<f64> = (0..n).map(|i| sign[i] * (lnabs[i] - top).exp()).collect();
    let norm_sq = |vals: &[f64]| -> Result<f64, SpectralError> {
        let mut total = 0.0;
        for (s, seg) in grid.segs.iter().enumerate() {
            let a = grid.start[s];
            let sq: Vec<f64> = vals[a..=a + seg.steps].iter().map(|v| v * v).collect();
            total += simpson(&sq, seg.h())?;
        }
        let last = vals[n - 1];
        if mt.kappa > 0.0 {
            total += last * last / (2.0 * mt.kappa);
        }
        Ok(total)
    };
    let i_rel = norm_sq(&rel)?;
    if !(i_rel.is_finite() && i_rel > 0.0) {
        return Err(SpectralError::Normalization { mode: index });
    }
    let ln_i = i_rel.ln() + 2.0 * top;
    let c = (-ln_i).exp();
    let unit: Vec<f64> = rel.iter().map(|v| v / i_rel.sqrt()).collect();
    let norm_check = norm_sq(&unit)?;
    let l = grid.xs[n - 1];
    let ln_s = lnabs[n - 1] - 0.5 * ln_i + xi * l;

    let omega2 = omega * omega;
    let ln_s_fit = if potential.support_end().is_none() {
        let pts: Vec<f64> = (0..n)
            .filter(|&i| grid.xs[i] >= 0.7 * l && grid.xs[i] <= 0.9 * l)
            .map(|i| lnabs[i] - 0.5 * ln_i + xi * grid.xs[i])
            .collect();
        let negligible = omega2 * potential.eval(0.7 * l) <= 1e-4 * xi * xi;
        if pts.len() >= 3 && negligible {
            let mean = pts.iter().sum::<f64>() / pts.len() as f64;
            let spread = pts.iter().fold(0.0f64, |acc, v| acc.max((v - mean).abs()));
            Some((mean, spread))
        } else {
            None
        }
    } else {
        None
    };

    Ok(Mode { index, xi, c, ln_s, ln_s_fit, cut: l, x_match: grid.xs[m], norm_check })
}

/// Every bound state with its eigenfunction diagnostics, ξ ascending.
pub fn solve_modes(potential: &Potential, omega: f64, config: &ShootingConfig) -> Result<Vec<Mode>, SpectralError> {
    let n0 = count_eigenvalues(potential, omega, config)?;
    if n0 == 0 {
        return Ok(vec![]);
    }
    let top = omega * potential.sup().sqrt();
    let n_top = count_above(potential, omega, top, config)?;
    if n_top != 0 {
        return Err(SpectralError::Bracket {
            mode: n0,
            lo: 0.0,
            hi: top,
            reason: format!("{n_top} states counted above omega sup sqrt Q"),
        });
    }
    let mut brackets = Vec::with_capacity(n0);
    isolate(potential, omega, config, 0.0, top, n0, 0, &mut brackets)?;
    brackets.sort_by(|a, b| a.lo.partial_cmp(&b.lo).unwrap());
    brackets
        .par_iter()
        .enumerate()
        .map(|(j, br)| solve_mode(potential, omega, config, j + 1, br))
        .collect()
}

pub fn solve_spectrum(potential: &Potential, omega: f64, config: &ShootingConfig) -> Result<Spectrum, SpectralError> {
    let modes = solve_modes(potential, omega, config)?;
    Ok(Spectrum {
        omega,
        xi: modes.iter().map(|m| m.xi).collect(),
        c: modes.iter().map(|m| m.c).collect(),
        n: modes.len(),
    })
}

