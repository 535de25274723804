use argmin::core::{CostFunction, Error as ArgminError, Executor, State};
use argmin::solver::neldermead::NelderMead;
use nalgebra::{DMatrix, DVector};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use speclab_counting::exp_sum_distance_floor;
use speclab_holder_bump::{eval_g, norm_constant_m, HolderClass};

use super::{Env, Produced};
use crate::cli::ExpsumArgs;
use crate::config::HolderSpec;
use crate::output::{fmt_f64, Artifacts};
use crate::summary::Check;
use crate::CliError;

/// Exponents are kept in [−ZETA_MAX, ZETA_MAX].
const ZETA_MAX: f64 = 200.0;

/// ε_i g_l(nt − i + 1)/(M_l n^l) on [(i−1)/n, i/n], ε_i = +1 for even i.
pub fn alternating_bump(h: &HolderClass, n: usize, t: f64) -> f64 {
    let nf = n as f64;
    let i = ((nf * t).floor() as usize + 1).min(n);
    let y = (nf * t - (i - 1) as f64).clamp(0.0, 1.0);
    let eps = if i.is_multiple_of(2) { 1.0 } else { -1.0 };
    eps * eval_g(h, &[y]).unwrap_or(0.0) / (norm_constant_m(h) * nf.powf(h.l))
}

/// Σ c_j e^{ζ_j t} with c the least-squares optimum for the given ζ.
pub fn project(zeta: &[f64], ts: &[f64], f: &DVector<f64>) -> Option<(DVector<f64>, f64)> {
    if zeta.iter().any(|z| !z.is_finite() || z.abs() > ZETA_MAX) {
        return None;
    }
    let a = DMatrix::from_fn(ts.len(), zeta.len(), |i, j| (zeta[j] * ts[i]).exp());
    let svd = a.clone().svd(true, true);
    let top = svd.singular_values.max();
    let c = svd.solve(f, 1e-13 * top).ok()?;
    let r = f - &a * &c;
    let ss = r.norm_squared();
    ss.is_finite().then_some((c, ss))
}

/// Projected residual relative to ‖f‖².
struct Residual<'a> {
    ts: &'a [f64],
    f: &'a DVector<f64>,
    scale: f64,
}

impl CostFunction for Residual<'_> {
    type Param = Vec<f64>;
    type Output = f64;

    fn cost(&self, zeta: &Self::Param) -> Result<f64, ArgminError> {
        Ok(project(zeta, self.ts, self.f).map(|p| p.1 / self.scale).unwrap_or(f64::MAX))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Fit {
    pub restart: usize,
    pub converged: bool,
    pub zeta: Vec<f64>,
    pub c: Vec<f64>,
    pub l2_residual: f64,
    pub uniform_error: f64,
    pub iterations: u64,
}

fn fit_once(restart: usize, start: Vec<f64>, ts: &[f64], f: &DVector<f64>, check_ts: &[f64], target: &[f64], max_iters: u64) -> Fit {
    let failed = |iterations| Fit {
        restart,
        converged: false,
        zeta: vec![],
        c: vec![],
        l2_residual: f64::NAN,
        uniform_error: f64::INFINITY,
        iterations,
    };
    let mut simplex = vec![start.clone()];
    for j in 0..start.len() {
        let mut v = start.clone();
        v[j] += 1.0;
        simplex.push(v);
    }
    let Ok(solver) = NelderMead::new(simplex).with_sd_tolerance(1e-12) else {
        return failed(0);
    };
    let problem = Residual { ts, f, scale: f.norm_squared().max(f64::MIN_POSITIVE) };
    let run = Executor::new(problem, solver).configure(|s| s.max_iters(max_iters)).timer(false).run();
    let Ok(run) = run else {
        return failed(0);
    };
    let state = run.state();
    let iterations = state.get_iter();
    let Some(zeta) = state.get_best_param().cloned() else {
        return failed(iterations);
    };
    let Some((c, ss)) = project(&zeta, ts, f) else {
        return failed(iterations);
    };
    let uniform_error = check_ts
        .iter()
        .zip(target)
        .map(|(&t, &y)| (y - zeta.iter().zip(c.iter()).map(|(z, cj)| cj * (z * t).exp()).sum::<f64>()).abs())
        .fold(0.0, f64::max);
    Fit { restart, converged: uniform_error.is_finite(), zeta, c: c.iter().copied().collect(), l2_residual: ss, uniform_error, iterations }
}

#[derive(Serialize)]
struct Report {
    seed: u64,
    n: usize,
    l: f64,
    floor: f64,
    target_sup: f64,
    best: Option<Fit>,
    failed_restarts: usize,
}

pub(crate) fn run(args: &ExpsumArgs, env: &mut Env) -> Result<Produced, CliError> {
    let res = env.res;
    let n: usize = res.req("n", args.n)?;
    let l: f64 = res.req("l", args.l)?;
    let restarts: usize = res.or("restarts", args.restarts, 20)?;
    let samples: usize = res.or("samples", args.samples, 2001)?;
    let max_iters: u64 = res.or("max-iters", args.max_iters, 4000)?;
    if n == 0 || restarts == 0 || samples < 2 * n + 1 {
        return Err(CliError::Usage("need n >= 1, restarts >= 1 and samples >= 2n + 1".into()));
    }
    let h = HolderClass::new(l, 1).map_err(|e| CliError::Usage(e.to_string()))?;
    env.cfg.holder = Some(HolderSpec { l, s: 1 });
    env.cfg.param("n", n);
    env.cfg.param("restarts", restarts);
    env.cfg.param("samples", samples);
    env.cfg.param("max_iters", max_iters);
    env.cfg.validate()?;

    let ts: Vec<f64> = (0..samples).map(|i| i as f64 / (samples - 1) as f64).collect();
    let f = DVector::from_iterator(samples, ts.iter().map(|&t| alternating_bump(&h, n, t)));
    let dense = 8 * (samples - 1) + 1;
    let check_ts: Vec<f64> = (0..dense).map(|i| i as f64 / (dense - 1) as f64).collect();
    let target: Vec<f64> = check_ts.iter().map(|&t| alternating_bump(&h, n, t)).collect();
    let target_sup = target.iter().fold(0.0f64, |m, v| m.max(v.abs()));

    let mut rng = ChaCha8Rng::seed_from_u64(env.cfg.seed);
    let span = 4.0 * n as f64;
    let starts: Vec<Vec<f64>> =
        (0..restarts).map(|_| (0..n).map(|_| rng.random_range(-span..span)).collect()).collect();
    let fits: Vec<Fit> = env.timed("fit", || {
        starts
            .into_par_iter()
            .enumerate()
            .map(|(k, s)| fit_once(k, s, &ts, &f, &check_ts, &target, max_iters))
            .collect()
    });
    let floor = exp_sum_distance_floor(n as u64, &vec![0; n], &h)?;
    let best = fits.iter().filter(|f| f.converged).min_by(|a, b| a.uniform_error.total_cmp(&b.uniform_error)).cloned();
    let failed_restarts = fits.iter().filter(|f| !f.converged).count();
    // ψ = 0 is always available
    let best_error = best.as_ref().map_or(target_sup, |b| b.uniform_error.min(target_sup));

    let mut artifacts = Artifacts::default();
    let rows: Vec<Vec<String>> = fits
        .iter()
        .map(|f| {
            vec![
                f.restart.to_string(),
                f.converged.to_string(),
                f.iterations.to_string(),
                fmt_f64(f.l2_residual),
                fmt_f64(f.uniform_error),
                f.zeta.iter().map(|z| fmt_f64(*z)).collect::<Vec<_>>().join(" "),
                f.c.iter().map(|z| fmt_f64(*z)).collect::<Vec<_>>().join(" "),
            ]
        })
        .collect();
    artifacts.csv("fits.csv", &["restart", "converged", "iterations", "l2_residual", "uniform_error", "zeta", "c"], &rows)?;
    artifacts.json("expsum.json", &Report { seed: env.cfg.seed, n, l, floor, target_sup, best, failed_restarts })?;

    let mut check = Check::new(
        "uniform_error_floor",
        "inf_ζ ‖f_ε − Σ_j c_j e^{ζ_j t}‖∞ ≥ C_l/(n + Σ_j p_j)^l",
        best_error >= floor,
        best_error,
        floor,
    );
    if failed_restarts == restarts {
        check = check.with_detail("every restart failed; measured is the error of the zero function");
    }
    Ok(Produced { checks: vec![check], artifacts })
}
