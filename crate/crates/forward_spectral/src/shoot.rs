use std::f64::consts::{FRAC_PI_2, PI};

use crate::grid::{seg_max_q, Segment};
use crate::{Potential, SpectralError};

const RENORM_EVERY: usize = 100;

/// Flattened grid: segment boundaries are shared points.
pub(crate) struct Grid {
    pub segs: Vec<Segment>,
    pub start: Vec<usize>,
    pub xs: Vec<f64>,
}

impl Grid {
    pub fn new(segs: Vec<Segment>) -> Self {
        let mut start = Vec::with_capacity(segs.len());
        let mut xs = vec![segs[0].a];
        for s in &segs {
            start.push(xs.len() - 1);
            xs.extend((1..=s.steps).map(|i| s.x(i)));
        }
        Grid { segs, start, xs }
    }

    pub fn last(&self) -> usize {
        self.xs.len() - 1
    }

    /// Segment owning the step that ends at point `i` (i ≥ 1).
    fn seg_of_step(&self, i: usize) -> usize {
        self.start.partition_point(|&s| s < i) - 1
    }
}

/// Decay rate beyond the cut, on the outer branch.
pub(crate) fn kappa_at(potential: &Potential, omega: f64, xi: f64, l: f64) -> f64 {
    (xi * xi - omega * omega * potential.eval_branch(l, l + 1.0)).max(0.0).sqrt()
}

/// Nodes of the Dirichlet solution on (0, ∞) at energy −ξ², from the scaled
/// Prüfer phase on [0, l] plus the exponential continuation beyond l.
pub(crate) fn prufer_count(potential: &Potential, omega: f64, xi: f64, grid: &Grid) -> Result<usize, SpectralError> {
    let omega2 = omega * omega;
    let xi2 = xi * xi;
    let mut theta = 0.0f64;
    let mut s_prev: Option<f64> = None;
    for seg in &grid.segs {
        let mut s = xi2.max(seg_max_q(potential, omega2, seg.a, seg.b)).sqrt();
        if s == 0.0 {
            s = 1.0 / seg.b;
        }
        if let Some(sp) = s_prev {
            if sp != s {
                let n = (theta / PI).floor();
                let phi = theta - n * PI;
                theta = n * PI + phi.sin().atan2((sp / s) * phi.cos());
            }
        }
        s_prev = Some(s);
        let mid = seg.mid();
        let h = seg.h();
        let rhs = |x: f64, t: f64| {
            let k = omega2 * potential.eval_branch(x, mid) - xi2;
            let (sn, cs) = t.sin_cos();
            s * cs * cs + (k / s) * sn * sn
        };
        for i in 0..seg.steps {
            let x = seg.x(i);
            let k1 = rhs(x, theta);
            let k2 = rhs(x + 0.5 * h, theta + 0.5 * h * k1);
            let k3 = rhs(x + 0.5 * h, theta + 0.5 * h * k2);
            let k4 = rhs(x + h, theta + h * k3);
            let d = h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            if !(d.abs() <= FRAC_PI_2) {
                return Err(SpectralError::Resolution { x, jump: d.abs() });
            }
            theta += d;
        }
    }
    let n = (theta / PI).floor();
    let phi = theta - n * PI;
    let mut count = n as usize;
    let l = grid.xs[grid.last()];
    let kappa = kappa_at(potential, omega, xi, l);
    let s = s_prev.unwrap_or(1.0);
    let (sn, cs) = phi.sin_cos();
    if sn * cs < 0.0 && (s * cs).abs() > kappa * sn.abs() {
        count += 1;
    }
    Ok(count)
}

/// Samples of a linear shot: ψ and ψ′ as mantissas times e^{ln_scale}.
pub(crate) struct Shot {
    pub psi: Vec<f64>,
    pub dpsi: Vec<f64>,
    pub ln_scale: Vec<f64>,
}

fn rk4_linear(potential: &Potential, omega2: f64, xi2: f64, mid: f64, x: f64, h: f64, y: (f64, f64)) -> (f64, f64) {
    let f = |x: f64, p: f64, dp: f64| (dp, (xi2 - omega2 * potential.eval_branch(x, mid)) * p);
    let (a1, b1) = f(x, y.0, y.1);
    let (a2, b2) = f(x + 0.5 * h, y.0 + 0.5 * h * a1, y.1 + 0.5 * h * b1);
    let (a3, b3) = f(x + 0.5 * h, y.0 + 0.5 * h * a2, y.1 + 0.5 * h * b2);
    let (a4, b4) = f(x + h, y.0 + h * a3, y.1 + h * b3);
    (
        y.0 + h / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4),
        y.1 + h / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4),
    )
}

/// Integrates (ψ, ψ′) between points `from` and `to` of the grid, either direction.
pub(crate) fn linear_shot(
    potential: &Potential,
    omega: f64,
    xi: f64,
    grid: &Grid,
    from: usize,
    to: usize,
    init: (f64, f64),
) -> Shot {
    let omega2 = omega * omega;
    let xi2 = xi * xi;
    let n = from.abs_diff(to) + 1;
    let mut shot = Shot { psi: Vec::with_capacity(n), dpsi: Vec::with_capacity(n), ln_scale: Vec::with_capacity(n) };
    let mut y = init;
    let mut ln = 0.0;
    shot.psi.push(y.0);
    shot.dpsi.push(y.1);
    shot.ln_scale.push(ln);
    let forward = to >= from;
    let mut i = from;
    let mut since = 0;
    while i != to {
        let (j, seg) = if forward {
            (i + 1, &grid.segs[grid.seg_of_step(i + 1)])
        } else {
            (i - 1, &grid.segs[grid.seg_of_step(i)])
        };
        let x = grid.xs[i];
        let h = grid.xs[j] - x;
        y = rk4_linear(potential, omega2, xi2, seg.mid(), x, h, y);
        since += 1;
        if since == RENORM_EVERY {
            let m = y.0.abs().max(y.1.abs());
            if m > 0.0 && m.is_finite() {
                y = (y.0 / m, y.1 / m);
                ln += m.ln();
            }
            since = 0;
        }
        shot.psi.push(y.0);
        shot.dpsi.push(y.1);
        shot.ln_scale.push(ln);
        i = j;
    }
    shot
}
