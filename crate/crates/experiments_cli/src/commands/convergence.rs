use rayon::prelude::*;
use serde::Serialize;
use speclab_gl::primitive_error;

use super::reconstruct::{grid_spec, profile, uniform_grid};
use super::spectrum::solve;
use super::{Env, Produced};
use crate::cli::ConvergenceArgs;
use crate::output::{fmt_f64, Artifacts};
use crate::summary::Check;
use crate::CliError;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Row {
    pub omega: f64,
    pub n: usize,
    pub single: f64,
    pub doubled: f64,
    pub excluded: usize,
    /// ln ω / √ω.
    pub reference: f64,
}

#[derive(Serialize)]
struct Table {
    seed: u64,
    x_max: f64,
    rows: Vec<Row>,
    slope_single: Option<f64>,
    slope_doubled: Option<f64>,
    slope_reference: Option<f64>,
}

/// Least-squares slope of ln y against ln x over the positive finite pairs.
pub fn log_log_slope(x: &[f64], y: &[f64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = x
        .iter()
        .zip(y)
        .filter(|(a, b)| **a > 0.0 && **b > 0.0 && a.is_finite() && b.is_finite())
        .map(|(a, b)| (a.ln(), b.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

pub(crate) fn run(args: &ConvergenceArgs, env: &mut Env) -> Result<Produced, CliError> {
    let res = env.res;
    let potential = res.potential(args.potential.clone())?.ok_or_else(|| CliError::Usage("missing --potential".into()))?;
    let omegas = res.list("omega", args.omega.clone())?.ok_or_else(|| CliError::Usage("missing --omega".into()))?;
    if omegas.len() < 3 {
        return Err(CliError::Usage(format!("convergence needs at least 3 omega values, got {}", omegas.len())));
    }
    let grid = grid_spec(res, args.x_max, args.intervals)?;
    let xs = uniform_grid(grid.x_max, grid.intervals)?;
    env.cfg.potential = Some(potential.clone());
    env.cfg.omega = omegas.clone();
    env.cfg.grid = Some(grid.clone());
    env.cfg.validate()?;

    let rows: Vec<Row> = env.timed("sweep", || {
        omegas
            .par_iter()
            .map(|&w| {
                let sp = solve(&potential, w, None)?.spectrum;
                let prof = profile(&sp, &xs)?;
                let e = primitive_error(&potential, &prof, grid.x_max)?;
                Ok(Row {
                    omega: w,
                    n: sp.n,
                    single: e.single,
                    doubled: e.doubled,
                    excluded: e.excluded,
                    reference: w.ln() / w.sqrt(),
                })
            })
            .collect::<Result<_, CliError>>()
    })?;

    let om: Vec<f64> = rows.iter().map(|r| r.omega).collect();
    let col = |f: fn(&Row) -> f64| rows.iter().map(f).collect::<Vec<f64>>();
    let slope_single = log_log_slope(&om, &col(|r| r.single));
    let slope_doubled = log_log_slope(&om, &col(|r| r.doubled));
    let slope_reference = log_log_slope(&om, &col(|r| r.reference));

    let mut artifacts = Artifacts::default();
    let csv_rows: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                fmt_f64(r.omega),
                r.n.to_string(),
                fmt_f64(r.single),
                fmt_f64(r.doubled),
                r.excluded.to_string(),
                fmt_f64(r.reference),
            ]
        })
        .collect();
    artifacts.csv(
        "convergence.csv",
        &["omega", "N", "error_single", "error_doubled", "excluded", "reference"],
        &csv_rows,
    )?;

    let (first, last) = (&rows[0], &rows[rows.len() - 1]);
    let decreases = last.single < first.single || last.doubled < first.doubled;
    let checks = vec![
        Check::new(
            "error_decreases",
            "sup_{[0,X]} |∫₀ˣ (Q − Q⁰_ω)| = O(ln ω/√ω)",
            decreases,
            [last.single, last.doubled],
            [first.single, first.doubled],
        )
        .with_detail(format!("[single, doubled] at omega {} against omega {}", last.omega, first.omega)),
        Check::new(
            "slope_finite",
            "least-squares slope of ln error against ln ω",
            slope_single.is_some_and(f64::is_finite) || slope_doubled.is_some_and(f64::is_finite),
            [slope_single, slope_doubled],
            slope_reference,
        ),
    ];
    artifacts.json(
        "convergence.json",
        &Table { seed: env.cfg.seed, x_max: grid.x_max, rows, slope_single, slope_doubled, slope_reference },
    )?;
    Ok(Produced { checks, artifacts })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_power_law() {
        let x = [4.0, 8.0, 16.0];
        let y: Vec<f64> = x.iter().map(|v: &f64| 3.0 * v.powf(-0.5)).collect();
        assert!((log_log_slope(&x, &y).unwrap() + 0.5).abs() < 1e-14);
        assert_eq!(log_log_slope(&[1.0], &[1.0]), None);
        assert_eq!(log_log_slope(&[1.0, 2.0], &[f64::NAN, 1.0]), None);
    }
}
