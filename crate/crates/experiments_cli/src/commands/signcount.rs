use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use speclab_counting::{
    count_exp_sum_zeros, enumerate_sign_vectors_1d, find_unattained_sequence, random_exp_sum, random_system,
    sample_sign_vectors, warren_component_bound, warren_thresholds, PolySystem,
};

use super::{Env, Produced};
use crate::cli::{SignMode, SigncountArgs};
use crate::output::{fmt_f64, Artifacts};
use crate::summary::Check;
use crate::CliError;

const RESOLUTION: usize = 256;

fn signs(v: &[i8]) -> String {
    v.iter().map(|&s| if s > 0 { '+' } else { '-' }).collect()
}

pub(crate) fn run(args: &SigncountArgs, env: &mut Env) -> Result<Produced, CliError> {
    let res = env.res;
    let mode: String = res.or("mode", args.mode.map(mode_key), "exact".to_string())?;
    let instances: usize = res.or("instances", args.instances, 100)?;
    env.cfg.param("mode", &mode);
    env.cfg.param("instances", instances);
    let mut rng = ChaCha8Rng::seed_from_u64(env.cfg.seed);
    match mode.as_str() {
        "exact" | "sampling" => {
            let n: usize = res.or("n", args.n, 1)?;
            let q: usize = res.or("q", args.q, 3)?;
            let d: usize = res.or("d", args.d, 4)?;
            if n == 0 || q == 0 || d == 0 {
                return Err(CliError::Usage("n, q and d must be >= 1".into()));
            }
            if mode == "exact" && n != 1 {
                return Err(CliError::Usage(format!("exact mode needs n = 1, got {n}")));
            }
            for (k, v) in [("n", n), ("q", q), ("d", d)] {
                env.cfg.param(k, v);
            }
            let bound = warren_component_bound(n as u64, d as u64, q as u64)?.value();
            let systems: Vec<PolySystem> = (0..instances).map(|_| random_system(n, q, d, &mut rng)).collect();
            if mode == "exact" {
                env.cfg.validate()?;
                exact(env, &systems, bound)
            } else {
                let samples: usize = res.or("samples", args.samples, 20_000)?;
                let half_width: f64 = res.or("half-width", args.half_width, 10.0)?;
                env.cfg.param("samples", samples);
                env.cfg.param("half_width", half_width);
                env.cfg.validate()?;
                sampling(env, &systems, bound, samples, half_width, &mut rng)
            }
        }
        "expsum" => {
            env.cfg.validate()?;
            expsums(env, instances, &mut rng)
        }
        other => Err(CliError::Usage(format!("mode must be exact, sampling or expsum, got {other}"))),
    }
}

fn mode_key(m: SignMode) -> String {
    match m {
        SignMode::Exact => "exact",
        SignMode::Sampling => "sampling",
        SignMode::Expsum => "expsum",
    }
    .to_string()
}

struct ExactRow {
    attained: usize,
    roots: usize,
    warnings: usize,
    unattained: Option<Option<Vec<i8>>>,
}

fn exact(env: &mut Env, systems: &[PolySystem], bound: f64) -> Result<Produced, CliError> {
    let threshold = systems.first().and_then(|s| warren_thresholds(1, s.d as u64).ok()).map(|t| t.0);
    let rows: Vec<ExactRow> = env.timed("enumerate", || {
        systems
            .par_iter()
            .map(|sys| {
                let e = enumerate_sign_vectors_1d(sys, RESOLUTION)?;
                let search = threshold.is_some_and(|t| sys.q() as u64 >= t);
                let unattained = if search { Some(find_unattained_sequence(sys, RESOLUTION)?) } else { None };
                Ok(ExactRow { attained: e.vectors.len(), roots: e.distinct_roots, warnings: e.warnings.len(), unattained })
            })
            .collect::<Result<_, CliError>>()
    })?;
    let csv_rows: Vec<Vec<String>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            vec![
                i.to_string(),
                r.attained.to_string(),
                r.roots.to_string(),
                fmt_f64(bound),
                (r.attained as f64 <= bound).to_string(),
                match &r.unattained {
                    None => "not searched".into(),
                    Some(None) => "none".into(),
                    Some(Some(v)) => signs(v),
                },
                r.warnings.to_string(),
            ]
        })
        .collect();
    let mut artifacts = Artifacts::default();
    artifacts.csv(
        "signcount.csv",
        &["instance", "attained", "distinct_roots", "bound", "pass", "unattained", "warnings"],
        &csv_rows,
    )?;
    let worst = rows.iter().map(|r| r.attained).max().unwrap_or(0);
    let searched: Vec<&ExactRow> = rows.iter().filter(|r| r.unattained.is_some()).collect();
    let found = searched.iter().filter(|r| matches!(r.unattained, Some(Some(_)))).count();
    let checks = vec![
        Check::new("attained_within_bound", "#{attained sign vectors} ≤ (4edq/n)^n", worst as f64 <= bound, worst, bound),
        Check::new(
            "unattained_above_threshold",
            "q ≥ ⌈8n log₂d⌉ leaves some ε ∈ {±1}^q unattained",
            found == searched.len(),
            found,
            searched.len(),
        )
        .with_detail(match threshold {
            Some(t) => format!("threshold q = {t}; {} instances at or above it", searched.len()),
            None => "no threshold for d = 1".into(),
        }),
    ];
    Ok(Produced { checks, artifacts })
}

fn sampling(
    env: &mut Env,
    systems: &[PolySystem],
    bound: f64,
    samples: usize,
    half_width: f64,
    rng: &mut ChaCha8Rng,
) -> Result<Produced, CliError> {
    let seeds: Vec<u64> = systems.iter().map(|_| rand::RngExt::random(rng)).collect();
    let rows: Vec<(usize, bool)> = env.timed("sample", || {
        systems
            .par_iter()
            .zip(&seeds)
            .map(|(sys, &seed)| {
                let mut local = ChaCha8Rng::seed_from_u64(seed);
                let got = sample_sign_vectors(sys, samples, half_width, &mut local)?;
                let nonzero: std::collections::BTreeSet<Vec<i8>> =
                    got.into_iter().filter(|v| !v.contains(&0)).collect();
                let subset = if sys.n == 1 {
                    let exact = enumerate_sign_vectors_1d(sys, RESOLUTION)?.vectors;
                    nonzero.is_subset(&exact)
                } else {
                    nonzero.iter().all(|v| v.len() == sys.q())
                };
                Ok((nonzero.len(), subset))
            })
            .collect::<Result<_, CliError>>()
    })?;
    let csv_rows: Vec<Vec<String>> = rows
        .iter()
        .enumerate()
        .map(|(i, (c, sub))| vec![i.to_string(), c.to_string(), fmt_f64(bound), (*c as f64 <= bound).to_string(), sub.to_string()])
        .collect();
    let mut artifacts = Artifacts::default();
    artifacts.csv("signcount.csv", &["instance", "sampled", "bound", "pass", "subset"], &csv_rows)?;
    let worst = rows.iter().map(|r| r.0).max().unwrap_or(0);
    let subsets = rows.iter().filter(|r| r.1).count();
    let checks = vec![
        Check::new("sampled_within_bound", "#{attained sign vectors} ≤ (4edq/n)^n", worst as f64 <= bound, worst, bound),
        Check::new(
            "sampled_subset",
            "sampled sign vectors lie in the attained set",
            subsets == rows.len(),
            subsets,
            rows.len(),
        ),
    ];
    Ok(Produced { checks, artifacts })
}

fn expsums(env: &mut Env, instances: usize, rng: &mut ChaCha8Rng) -> Result<Produced, CliError> {
    let sums: Vec<_> = (0..instances).map(|i| random_exp_sum(1 + i % 4, rng)).collect();
    let counts: Vec<usize> = env.timed("zeros", || {
        sums.par_iter().map(|s| Ok(count_exp_sum_zeros(s, 4000)?.count)).collect::<Result<_, CliError>>()
    })?;
    let csv_rows: Vec<Vec<String>> = sums
        .iter()
        .zip(&counts)
        .enumerate()
        .map(|(i, (s, &z))| vec![i.to_string(), s.terms.len().to_string(), z.to_string(), (z < s.terms.len()).to_string()])
        .collect();
    let mut artifacts = Artifacts::default();
    artifacts.csv("expsum_zeros.csv", &["instance", "terms", "zeros", "pass"], &csv_rows)?;
    let bad = sums.iter().zip(&counts).filter(|(s, &z)| z >= s.terms.len()).count();
    let checks = vec![Check::new(
        "descartes_zeros",
        "Σ_{j≤n} c_j e^{ζ_j t} has at most n − 1 real zeros",
        bad == 0,
        bad,
        0,
    )];
    Ok(Produced { checks, artifacts })
}
