use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use speclab_holder_bump::{
    eval_f_eps, norm_constant_m, sup_norm_on_grid, verify_holder_membership, BumpSpec, HolderClass,
};

use super::{rel_err, Env, Produced};
use crate::cli::BumpArgs;
use crate::config::HolderSpec;
use crate::output::{fmt_f64, Artifacts};
use crate::summary::Check;
use crate::CliError;

const SUP_REL_TOL: f64 = 1e-10;

pub(crate) fn run(args: &BumpArgs, env: &mut Env) -> Result<Produced, CliError> {
    let res = env.res;
    let l: f64 = res.req("l", args.l)?;
    let s: usize = res.or("s", args.s, 1)?;
    let r: usize = res.or("r", args.r, 1)?;
    let holder = HolderClass::new(l, s).map_err(|e| CliError::Usage(e.to_string()))?;
    if r == 0 {
        return Err(CliError::Usage("--r must be >= 1".into()));
    }
    let grid_step: f64 = res.or("grid-step", args.grid_step, 0.05 / r as f64)?;
    let pairs: usize = res.or("pairs", args.pairs, 500)?;
    let tol: f64 = res.or("tol", args.tol, 1e-3)?;
    let per_cell: usize = res.or("per-cell", args.per_cell, 21)?;
    if per_cell == 0 {
        return Err(CliError::Usage("--per-cell must be >= 1".into()));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(env.cfg.seed);
    let cells = r.pow(s as u32);
    let eps: Vec<i8> = match res.get("eps", args.eps.clone())? {
        Some(e) => e,
        None => (0..cells).map(|_| if rng.random_bool(0.5) { 1 } else { -1 }).collect(),
    };
    let bump = BumpSpec::new(holder, r, eps.clone()).map_err(|e| CliError::Usage(e.to_string()))?;

    env.cfg.holder = Some(HolderSpec { l, s });
    for (k, v) in [("r", r as f64), ("grid_step", grid_step), ("tol", tol)] {
        env.cfg.param(k, v);
    }
    env.cfg.param("pairs", pairs);
    env.cfg.param("per_cell", per_cell);
    env.cfg.param("eps", &eps);
    env.cfg.validate()?;

    let report = env.timed("membership", || verify_holder_membership(&bump, grid_step, pairs, tol, &mut rng))?;
    let sup = env.timed("sup_norm", || sup_norm_on_grid(&bump, per_cell));
    let p = holder.bump_power() as f64;
    let closed = 1.0 / (2.0 * norm_constant_m(&holder) * 4f64.powf(s as f64 * p) * (r as f64).powf(l));

    let per_axis = r * per_cell;
    let coords: Vec<f64> = (0..per_axis).map(|i| (i as f64 + 0.5) / per_axis as f64).collect();
    let total = per_axis.pow(s as u32);
    let mut rows = Vec::with_capacity(total);
    let mut x = vec![0.0; s];
    for flat in 0..total {
        let mut rem = flat;
        for slot in x.iter_mut().rev() {
            *slot = coords[rem % per_axis];
            rem /= per_axis;
        }
        let f = eval_f_eps(&bump, &x)?;
        let mut row: Vec<String> = x.iter().map(|&v| fmt_f64(v)).collect();
        row.push(fmt_f64(f));
        rows.push(row);
    }
    let mut header: Vec<String> = (1..=s).map(|j| format!("x{j}")).collect();
    header.push("f".into());

    let mut artifacts = Artifacts::default();
    artifacts.csv("samples.csv", &header.iter().map(String::as_str).collect::<Vec<_>>(), &rows)?;
    artifacts.json("membership.json", &report)?;

    let checks = vec![
        Check::new(
            "membership",
            "sup|∂^k f_ε| ≤ 1 for |k| ≤ m and |∂^k f_ε(x) − ∂^k f_ε(y)| ≤ |x − y|^α for |k| = m",
            report.pass,
            [report.max_derivative_sup, report.max_holder_quotient],
            1.0 + tol,
        ),
        Check::new(
            "sup_norm",
            "‖f_ε‖∞ = 1/(2 M_{l,s} 4^{s(⌊l⌋+1)} r^l)",
            rel_err(sup, closed) <= SUP_REL_TOL,
            sup,
            closed,
        )
        .with_detail(format!("relative tolerance {SUP_REL_TOL:e}")),
    ];
    Ok(Produced { checks, artifacts })
}
