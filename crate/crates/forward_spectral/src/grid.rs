use crate::Potential;

/// One RK4 segment: [a, b] with an even number of equal steps; Q evaluated on
/// the branch containing the segment midpoint.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Segment {
    pub a: f64,
    pub b: f64,
    pub steps: usize,
}

impl Segment {
    pub fn h(&self) -> f64 {
        (self.b - self.a) / self.steps as f64
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.a + self.b)
    }

    pub fn x(&self, i: usize) -> f64 {
        if i == self.steps {
            self.b
        } else {
            self.a + i as f64 * self.h()
        }
    }
}

/// Largest ω²Q on a segment, sampled; exact for monotone pieces.
pub(crate) fn seg_max_q(potential: &Potential, omega2: f64, a: f64, b: f64) -> f64 {
    let mid = 0.5 * (a + b);
    (0..=8)
        .map(|i| omega2 * potential.eval_branch(a + (b - a) * i as f64 / 8.0, mid))
        .fold(0.0, f64::max)
}

/// Smallest x beyond which ω²Q stays below tail_tol·max(ξ², 1/x²), capped.
pub(crate) fn cut_point(potential: &Potential, omega: f64, xi: f64, tail_tol: f64, cap: f64) -> f64 {
    if let Some(end) = potential.support_end() {
        return end.min(cap);
    }
    let omega2 = omega * omega;
    let ok = |x: f64| omega2 * potential.eval(x) <= tail_tol * (xi * xi).max(1.0 / (x * x));
    let mut hi: f64 = 1.0;
    if let Potential::Tabulated { knots, .. } = potential {
        hi = hi.max(*knots.last().unwrap());
    }
    while !ok(hi) {
        hi *= 2.0;
        if hi >= cap {
            return cap;
        }
    }
    let mut lo = if hi > 1.0 { hi / 2.0 } else { 0.0 };
    if lo > 0.0 && ok(lo) {
        return lo;
    }
    for _ in 0..60 {
        let m = 0.5 * (lo + hi);
        if ok(m) {
            hi = m;
        } else {
            lo = m;
        }
        if hi - lo < 1e-6 * hi {
            break;
        }
    }
    hi
}

/// Graded segments on [0, l]: breakpoints, then octaves [2^k, 2^{k+1}] past 1.
/// Step ≤ grid_step·max(1, x) and ≤ 0.05 over the local decay/oscillation rate.
pub(crate) fn build_grid(potential: &Potential, omega: f64, xi: f64, l: f64, grid_step: f64) -> Vec<Segment> {
    let omega2 = omega * omega;
    let mut edges = vec![0.0];
    let mut x = 1.0;
    while x < l {
        edges.push(x);
        x *= 2.0;
    }
    edges.extend(potential.breakpoints().into_iter().filter(|&b| b > 0.0 && b < l));
    edges.push(l);
    edges.sort_by(|a, b| a.partial_cmp(b).unwrap());
    edges.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * b.abs().max(1.0));
    edges
        .windows(2)
        .map(|w| {
            let (a, b) = (w[0], w[1]);
            let rate = (xi * xi).max(seg_max_q(potential, omega2, a, b)).sqrt();
            let mut h = grid_step * a.max(1.0);
            if rate > 0.0 {
                h = h.min(0.05 / rate);
            }
            let mut steps = ((b - a) / h).ceil().max(2.0) as usize;
            steps += steps % 2;
            Segment { a, b, steps }
        })
        .collect()
}
