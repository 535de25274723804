use rayon::prelude::*;
use speclab_spectral::{solve_modes, square_well_spectrum, Mode, Potential, ShootingConfig, SpectralError, Spectrum};
use speclab_wkb::{wkb_count, wkb_levels, WkbError, WkbLevels};

use super::{omega_tag, rel_err, Env, Produced};
use crate::cli::SpectrumArgs;
use crate::output::{fmt_f64, fmt_opt, Artifacts};
use crate::summary::Check;
use crate::CliError;

pub const SQUARE_WELL_XI_TOL: f64 = 1e-6;
pub const SQUARE_WELL_C_TOL: f64 = 1e-4;

/// Solver output for one ω.
pub struct Solved {
    pub omega: f64,
    pub modes: Vec<Mode>,
    pub spectrum: Spectrum,
}

pub fn solve(potential: &Potential, omega: f64, grid_step: Option<f64>) -> Result<Solved, CliError> {
    let mut cfg = ShootingConfig::for_problem(potential, omega);
    if let Some(h) = grid_step {
        cfg.grid_step = h;
    }
    let modes = solve_modes(potential, omega, &cfg).map_err(|source| CliError::Spectral { omega, source })?;
    let spectrum = Spectrum {
        omega,
        xi: modes.iter().map(|m| m.xi).collect(),
        c: modes.iter().map(|m| m.c).collect(),
        n: modes.len(),
    };
    Ok(Solved { omega, modes, spectrum })
}

struct WkbPart {
    count: usize,
    levels: Option<WkbLevels>,
}

fn wkb_part(potential: &Potential, omega: f64) -> Result<WkbPart, CliError> {
    let wrap = |source| CliError::Wkb { omega, source };
    let count = wkb_count(potential, omega).map_err(wrap)?;
    let levels = match wkb_levels(potential, omega) {
        Ok(l) => Some(l),
        Err(WkbError::NoLevels(_)) => None,
        Err(e) => return Err(wrap(e)),
    };
    Ok(WkbPart { count, levels })
}

pub(crate) fn run(args: &SpectrumArgs, env: &mut Env) -> Result<Produced, CliError> {
    let res = env.res;
    let potential = res.potential(args.potential.clone())?.ok_or_else(|| CliError::Usage("missing --potential".into()))?;
    let omegas = res.list("omega", args.omega.clone())?.ok_or_else(|| CliError::Usage("missing --omega".into()))?;
    let with_wkb = res.flag("wkb", args.wkb)?;
    let grid_step: Option<f64> = res.get("grid-step", args.grid_step)?;
    env.cfg.potential = Some(potential.clone());
    env.cfg.omega = omegas.clone();
    env.cfg.param("wkb", with_wkb);
    env.cfg.param("grid_step", grid_step);
    env.cfg.validate()?;

    let solved: Vec<Solved> = env.timed("solve", || {
        omegas.par_iter().map(|&w| solve(&potential, w, grid_step)).collect::<Result<_, _>>()
    })?;
    let wkb: Vec<Option<WkbPart>> = if with_wkb {
        env.timed("wkb", || {
            omegas.par_iter().map(|&w| wkb_part(&potential, w).map(Some)).collect::<Result<_, _>>()
        })?
    } else {
        omegas.iter().map(|_| None).collect()
    };

    let mut checks = Vec::new();
    let mut artifacts = Artifacts::default();
    for (s, w) in solved.iter().zip(&wkb) {
        let tag = omega_tag(s.omega);
        artifacts.json(&format!("spectrum_{tag}.json"), &s.spectrum)?;
        artifacts.csv(&format!("modes_{tag}.csv"), MODE_HEADER, &mode_rows(&s.modes))?;
        let inv = s.spectrum.check_invariants(&potential);
        checks.push(
            Check::new(
                format!("invariants_{tag}"),
                "0 < ξ₁ < … < ξ_N ≤ ω sup√Q, C_j > 0, N ≤ ⌈(2ω/π)∫√Q⌉",
                inv.is_ok(),
                s.spectrum.n,
                serde_json::Value::Null,
            )
            .with_detail(inv.err().unwrap_or_else(|| "ok".into())),
        );
        if potential == Potential::SquareWell {
            checks.extend(square_well_checks(s)?);
        }
        if let Some(w) = w {
            artifacts.csv(&format!("wkb_{tag}.csv"), WKB_HEADER, &wkb_rows(s, w))?;
            checks.extend(wkb_checks(s, w));
        }
    }
    Ok(Produced { checks, artifacts })
}

const MODE_HEADER: &[&str] = &["index", "xi", "C", "ln_s", "ln_s_fit", "ln_s_fit_spread", "cut", "x_match", "norm_check"];

fn mode_rows(modes: &[Mode]) -> Vec<Vec<String>> {
    modes
        .iter()
        .map(|m| {
            vec![
                m.index.to_string(),
                fmt_f64(m.xi),
                fmt_f64(m.c),
                fmt_f64(m.ln_s),
                fmt_opt(m.ln_s_fit.map(|f| f.0)),
                fmt_opt(m.ln_s_fit.map(|f| f.1)),
                fmt_f64(m.cut),
                fmt_f64(m.x_match),
                fmt_f64(m.norm_check),
            ]
        })
        .collect()
}

fn square_well_checks(s: &Solved) -> Result<Vec<Check>, CliError> {
    let tag = omega_tag(s.omega);
    let oracle = match square_well_spectrum(s.omega) {
        Ok(o) => o.spectrum,
        Err(SpectralError::NoBoundState(_)) => Spectrum::empty(s.omega),
        Err(source) => return Err(CliError::Spectral { omega: s.omega, source }),
    };
    let same_n = oracle.n == s.spectrum.n;
    let (mut xi_err, mut c_err) = (0.0f64, 0.0f64);
    if same_n {
        for j in 0..oracle.n {
            xi_err = xi_err.max(rel_err(s.spectrum.xi[j], oracle.xi[j]));
            c_err = c_err.max(rel_err(s.spectrum.c[j], oracle.c[j]));
        }
    }
    Ok(vec![
        Check::new(
            format!("oracle_count_{tag}"),
            "roots of ξ sin√(ω²−ξ²) + √(ω²−ξ²) cos√(ω²−ξ²) = 0",
            same_n,
            s.spectrum.n,
            oracle.n,
        ),
        Check::new(
            format!("oracle_xi_{tag}"),
            "roots of ξ sin√(ω²−ξ²) + √(ω²−ξ²) cos√(ω²−ξ²) = 0",
            same_n && xi_err < SQUARE_WELL_XI_TOL,
            xi_err,
            SQUARE_WELL_XI_TOL,
        ),
        Check::new(
            format!("oracle_c_{tag}"),
            "C_ξ = (2ξ/(1+ξ))(ω² − ξ²)",
            same_n && c_err < SQUARE_WELL_C_TOL,
            c_err,
            SQUARE_WELL_C_TOL,
        ),
    ])
}

const WKB_HEADER: &[&str] =
    &["j", "eta", "xi_wkb", "theta_plus", "ln_s_wkb", "mode", "xi_exact", "xi_rel_err", "ln_s_exact"];

/// Full-line levels; the odd states (even j) line up with Dirichlet modes in order.
fn wkb_rows(s: &Solved, w: &WkbPart) -> Vec<Vec<String>> {
    let Some(lv) = &w.levels else {
        return vec![];
    };
    let odd: Vec<usize> = lv.odd_levels().iter().map(|o| o.0).collect();
    (0..lv.eta.len())
        .map(|i| {
            let j = i + 1;
            let xi_w = s.omega * lv.eta[i];
            let mode = odd.iter().position(|&o| o == j).and_then(|k| s.modes.get(k));
            vec![
                j.to_string(),
                fmt_f64(lv.eta[i]),
                fmt_f64(xi_w),
                fmt_f64(lv.theta_plus[i]),
                fmt_f64(lv.ln_s[i]),
                mode.map(|m| m.index.to_string()).unwrap_or_default(),
                fmt_opt(mode.map(|m| m.xi)),
                fmt_opt(mode.map(|m| rel_err(xi_w, m.xi))),
                fmt_opt(mode.map(|m| m.ln_s)),
            ]
        })
        .collect()
}

fn wkb_checks(s: &Solved, w: &WkbPart) -> Vec<Check> {
    let tag = omega_tag(s.omega);
    let n = s.spectrum.n;
    let odd = w.levels.as_ref().map(|l| l.odd_levels().len()).unwrap_or(0);
    vec![
        Check::new(
            format!("wkb_count_{tag}"),
            "|⌊ωΦ(0)/π⌋ − N(ω)| ≤ 1",
            w.count.abs_diff(n) <= 1,
            [w.count, n],
            1,
        )
        .with_detail(format!("semiclassical count {}, Dirichlet solver count {n}", w.count)),
        Check::new(
            format!("wkb_odd_levels_{tag}"),
            "#{j even : Φ(η_j) = (j − ½)π/ω} within 1 of N(ω)",
            odd.abs_diff(n) <= 1,
            [odd, n],
            1,
        ),
    ]
}
