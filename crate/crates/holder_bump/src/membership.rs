use rand::{Rng, RngExt};
use serde::{Deserialize, Serialize};

use crate::{central_weights, BumpSpec, HolderError};

/// Numerical certificate that f_ε sits in the unit ball of Λ_{l,s}.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MembershipReport {
    /// max over |k| ≤ m of the grid sup of |∂^k f|.
    pub max_derivative_sup: f64,
    pub worst_multi_index: Vec<usize>,
    /// max of |∂^k f(x) − ∂^k f(y)| / ‖x − y‖^α over sampled pairs, |k| = m.
    pub max_holder_quotient: f64,
    pub grid_points: usize,
    pub pairs: usize,
    pub tol: f64,
    pub pass: bool,
}

const FD_LOCAL_STEP: f64 = 1e-3;

fn multi_indices(s: usize, max_total: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..s {
        let mut next = Vec::new();
        for k in &out {
            let used: usize = k.iter().sum();
            for kj in 0..=(max_total - used) {
                let mut k2 = k.clone();
                k2.push(kj);
                next.push(k2);
            }
        }
        out = next;
    }
    out
}

struct Differ<'a> {
    bump: &'a BumpSpec,
    amp: f64,
    h: f64,
    stencils: Vec<Vec<f64>>,
}

impl Differ<'_> {
    fn derivative(&self, k: &[usize], x: &[f64]) -> f64 {
        let s = x.len();
        let ws: Vec<&Vec<f64>> = k.iter().map(|&kj| &self.stencils[kj]).collect();
        let lens: Vec<usize> = ws.iter().map(|w| w.len()).collect();
        let total: usize = lens.iter().product();
        let mut y = vec![0.0; s];
        let mut acc = 0.0;
        for flat in 0..total {
            let mut rem = flat;
            let mut weight = 1.0;
            for j in (0..s).rev() {
                let idx = rem % lens[j];
                rem /= lens[j];
                let half = (lens[j] / 2) as f64;
                weight *= ws[j][idx];
                y[j] = x[j] + (idx as f64 - half) * self.h;
            }
            if weight != 0.0 {
                acc += weight * self.bump.eval_extended(&y, self.amp);
            }
        }
        let order: usize = k.iter().sum();
        acc / self.h.powi(order as i32)
    }
}

/// Sup norms of all derivatives up to order m on a grid plus sampled Hölder
/// quotients of the order-m derivatives.
pub fn verify_holder_membership<R: Rng + ?Sized>(
    bump: &BumpSpec,
    grid_step: f64,
    pair_samples: usize,
    tol: f64,
    rng: &mut R,
) -> Result<MembershipReport, HolderError> {
    let h = &bump.holder;
    let r = bump.r as f64;
    if !(grid_step > 0.0 && r * grid_step < 0.1) {
        return Err(HolderError::GridStep(grid_step));
    }
    let s = h.s;
    let differ = Differ {
        bump,
        amp: bump.amplitude(),
        h: FD_LOCAL_STEP / r,
        stencils: (0..=h.m).map(central_weights).collect(),
    };

    let per_axis = (1.0 / grid_step).ceil() as usize + 1;
    let coords: Vec<f64> = (0..per_axis).map(|i| (i as f64 / (per_axis - 1) as f64).min(1.0)).collect();
    let grid_points = per_axis.pow(s as u32);
    let mut max_sup = 0.0f64;
    let mut worst = vec![0; s];
    let mut x = vec![0.0; s];
    for k in multi_indices(s, h.m) {
        for flat in 0..grid_points {
            let mut rem = flat;
            for slot in x.iter_mut().rev() {
                *slot = coords[rem % per_axis];
                rem /= per_axis;
            }
            let v = differ.derivative(&k, &x).abs();
            if v > max_sup {
                max_sup = v;
                worst = k.clone();
            }
        }
    }

    let top: Vec<Vec<usize>> = multi_indices(s, h.m).into_iter().filter(|k| k.iter().sum::<usize>() == h.m).collect();
    let mut pairs: Vec<(Vec<f64>, Vec<f64>)> = Vec::new();
    for _ in 0..pair_samples {
        let a: Vec<f64> = (0..s).map(|_| rng.random::<f64>()).collect();
        let b: Vec<f64> = (0..s).map(|_| rng.random::<f64>()).collect();
        pairs.push((a, b));
    }
    for _ in 0..pair_samples {
        let a: Vec<f64> = (0..s).map(|_| rng.random::<f64>()).collect();
        let scale = 10f64.powf(rng.random_range(-3.0..0.0)) / r;
        let b: Vec<f64> = a.iter().map(|&v| (v + scale * rng.random_range(-1.0..1.0)).clamp(0.0, 1.0)).collect();
        pairs.push((a, b));
    }
    let centers: Vec<Vec<f64>> = (0..bump.cells())
        .map(|i| {
            let mut c = vec![0.0; s];
            let mut rem = i;
            for slot in c.iter_mut().rev() {
                *slot = ((rem % bump.r) as f64 + 0.5) / r;
                rem /= bump.r;
            }
            c
        })
        .collect();
    for i in 0..centers.len() {
        for j in i + 1..centers.len() {
            pairs.push((centers[i].clone(), centers[j].clone()));
        }
    }

    let mut max_q = 0.0f64;
    for (a, b) in &pairs {
        let dist = a.iter().zip(b).map(|(p, q)| (p - q) * (p - q)).sum::<f64>().sqrt();
        if dist == 0.0 {
            continue;
        }
        for k in &top {
            let q = (differ.derivative(k, a) - differ.derivative(k, b)).abs() / dist.powf(h.alpha);
            max_q = max_q.max(q);
        }
    }

    let pass = max_sup <= 1.0 + tol && max_q <= 1.0 + tol;
    Ok(MembershipReport {
        max_derivative_sup: max_sup,
        worst_multi_index: worst,
        max_holder_quotient: max_q,
        grid_points,
        pairs: pairs.len(),
        tol,
        pass,
    })
}
