use std::fs;
use std::path::PathBuf;

use serde::Serialize;
use speclab_gl::{primitive_error, reconstruct_q, GlParameters, PointFlag, PrimitiveError, ProfilePoint};
use speclab_spectral::{Potential, Spectrum};

use super::spectrum::solve;
use super::{Env, Produced};
use crate::cli::ReconstructArgs;
use crate::config::{GridSpec, Resolver};
use crate::output::{fmt_f64, fmt_opt, Artifacts};
use crate::summary::Check;
use crate::CliError;

pub fn uniform_grid(x_max: f64, intervals: usize) -> Result<Vec<f64>, CliError> {
    if !(x_max.is_finite() && x_max > 0.0) {
        return Err(CliError::Usage(format!("x_max must be > 0, got {x_max}")));
    }
    if intervals < 2 || !intervals.is_multiple_of(2) {
        return Err(CliError::Usage(format!("intervals must be even and >= 2, got {intervals}")));
    }
    Ok((0..=intervals).map(|i| x_max * i as f64 / intervals as f64).collect())
}

pub(crate) fn grid_spec(res: &Resolver, x_max: Option<f64>, intervals: Option<usize>) -> Result<GridSpec, CliError> {
    Ok(GridSpec { x_max: res.or("x-max", x_max, 2.0)?, intervals: res.or("intervals", intervals, 400)? })
}

/// Q⁰_ω on the grid; an empty spectrum gives Q⁰ = 0.
pub fn profile(sp: &Spectrum, grid: &[f64]) -> Result<Vec<ProfilePoint>, CliError> {
    if sp.n == 0 {
        return Ok(grid
            .iter()
            .map(|&x| ProfilePoint {
                x,
                logdet: 0.0,
                d1: Some(0.0),
                d2: Some(0.0),
                q_reconstructed: Some(0.0),
                flag: PointFlag::Ok,
            })
            .collect());
    }
    let params = GlParameters::from_spectrum(sp)?;
    Ok(reconstruct_q(&params, sp.omega, grid)?)
}

pub const PROFILE_HEADER: &[&str] = &["x", "logdet", "d1", "d2", "q_reconstructed", "flag"];

pub fn profile_rows(p: &[ProfilePoint]) -> Vec<Vec<String>> {
    p.iter()
        .map(|pt| {
            let flag = match pt.flag {
                PointFlag::Ok => "ok",
                PointFlag::IllConditioned => "illconditioned",
                PointFlag::Singular => "singular",
            };
            vec![fmt_f64(pt.x), fmt_f64(pt.logdet), fmt_opt(pt.d1), fmt_opt(pt.d2), fmt_opt(pt.q_reconstructed), flag.into()]
        })
        .collect()
}

#[derive(Serialize)]
struct PrimitiveReport {
    omega: f64,
    n: usize,
    x_max: f64,
    seed: u64,
    error: PrimitiveError,
}

pub(crate) fn run(args: &ReconstructArgs, env: &mut Env) -> Result<Produced, CliError> {
    let res = env.res;
    let potential: Option<Potential> = res.potential(args.potential.clone())?;
    let from_file: Option<PathBuf> = res.get("spectrum", args.spectrum.clone())?;
    let grid = grid_spec(res, args.x_max, args.intervals)?;
    let xs = uniform_grid(grid.x_max, grid.intervals)?;

    let sp = match &from_file {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.clone(), source })?;
            let sp: Spectrum = serde_json::from_str(&text).map_err(|source| CliError::Json { path: path.clone(), source })?;
            if sp.xi.len() != sp.n || sp.c.len() != sp.n {
                return Err(CliError::Usage(format!("{}: N does not match the lengths of xi and C", path.display())));
            }
            sp
        }
        None => {
            let p = potential.as_ref().ok_or_else(|| CliError::Usage("missing --potential (or --spectrum)".into()))?;
            let omega: f64 = res.req("omega", args.omega)?;
            env.timed("solve", || solve(p, omega, None))?.spectrum
        }
    };
    env.cfg.potential = potential.clone();
    env.cfg.omega = vec![sp.omega];
    env.cfg.grid = Some(grid.clone());
    env.cfg.param("spectrum_file", from_file.as_ref().map(|p| p.display().to_string()));
    env.cfg.validate()?;

    let prof = env.timed("reconstruct", || profile(&sp, &xs))?;
    let mut artifacts = Artifacts::default();
    artifacts.csv("reconstruction.csv", PROFILE_HEADER, &profile_rows(&prof))?;

    let singular = prof.iter().filter(|p| p.flag == PointFlag::Singular).count();
    let bad_ok = prof
        .iter()
        .filter(|p| p.flag == PointFlag::Ok && !p.q_reconstructed.is_some_and(f64::is_finite))
        .count();
    let mut checks = vec![
        Check::new(
            "not_all_singular",
            "det W(x) ≠ 0 somewhere on the grid",
            singular < prof.len(),
            singular,
            prof.len(),
        ),
        Check::new(
            "finite_off_flagged",
            "Q⁰_ω = (2/ω²)(ln det W)″ finite wherever W is well conditioned",
            bad_ok == 0,
            bad_ok,
            0,
        ),
    ];
    if let Some(p) = &potential {
        let err = primitive_error(p, &prof, grid.x_max)?;
        checks.push(
            Check::new(
                "primitive_error_finite",
                "sup_{[0,X]} |∫₀ˣ Q − ∫₀ˣ Q⁰_ω| < ∞",
                err.single.is_finite() && err.doubled.is_finite(),
                [err.single, err.doubled],
                serde_json::Value::Null,
            )
            .with_detail("measured is [single, doubled]"),
        );
        artifacts.json(
            "primitive_error.json",
            &PrimitiveReport { omega: sp.omega, n: sp.n, x_max: grid.x_max, seed: env.cfg.seed, error: err },
        )?;
    }
    Ok(Produced { checks, artifacts })
}
