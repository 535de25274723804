//! Adaptive Gauss–Kronrod (7/15) quadrature and composite Simpson.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadError {
    #[error("integrand returned a non-finite value at x = {x}")]
    NonFinite { x: f64 },
    #[error("no convergence after {intervals} subintervals (estimate {estimate}, error {error})")]
    NoConvergence { intervals: usize, estimate: f64, error: f64 },
    #[error("simpson needs an even number of panels, got {0}")]
    OddPanels(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub intervals: usize,
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Result<(f64, f64), QuadError> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    if !fc.is_finite() {
        return Err(QuadError::NonFinite { x: c });
    }
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (j, &xk) in XGK.iter().take(7).enumerate() {
        let (x1, x2) = (c - h * xk, c + h * xk);
        let (f1, f2) = (f(x1), f(x2));
        if !f1.is_finite() {
            return Err(QuadError::NonFinite { x: x1 });
        }
        if !f2.is_finite() {
            return Err(QuadError::NonFinite { x: x2 });
        }
        kron += WGK[j] * (f1 + f2);
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    Ok((kron * h, ((kron - gauss) * h).abs()))
}

/// Globally adaptive GK15 on `[a, b]`.
///
/// Stops when the summed error estimate is below `max(abs_tol, rel_tol*|I|)`.
pub fn integrate<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_intervals: usize,
) -> Result<QuadResult, QuadError> {
    if a == b {
        return Ok(QuadResult { value: 0.0, error: 0.0, intervals: 0 });
    }
    let (v, e) = gk15(&mut f, a, b)?;
    let mut pieces = vec![(a, b, v, e)];
    loop {
        let value: f64 = pieces.iter().map(|p| p.2).sum();
        let error: f64 = pieces.iter().map(|p| p.3).sum();
        if error <= abs_tol.max(rel_tol * value.abs()) {
            return Ok(QuadResult { value, error, intervals: pieces.len() });
        }
        if pieces.len() >= max_intervals {
            return Err(QuadError::NoConvergence { intervals: pieces.len(), estimate: value, error });
        }
        let worst = pieces
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let (lo, hi, _, _) = pieces.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = gk15(&mut f, lo, mid)?;
        let (v2, e2) = gk15(&mut f, mid, hi)?;
        pieces.push((lo, mid, v1, e1));
        pieces.push((mid, hi, v2, e2));
    }
}

/// Composite Simpson over equally spaced samples (`values.len()` odd).
pub fn simpson(values: &[f64], h: f64) -> Result<f64, QuadError> {
    let panels = values.len().saturating_sub(1);
    if !panels.is_multiple_of(2) {
        return Err(QuadError::OddPanels(panels));
    }
    if panels == 0 {
        return Ok(0.0);
    }
    let mut s = values[0] + values[panels];
    for (i, v) in values.iter().enumerate().take(panels).skip(1) {
        s += if i % 2 == 1 { 4.0 * v } else { 2.0 * v };
    }
    Ok(s * h / 3.0)
}

/// Running Simpson primitive at every even sample, trapezoid-corrected at odd ones.
///
/// Returns `P[i] ≈ ∫_{x_0}^{x_i}`. Even indices are Simpson-exact for cubics;
/// odd indices use the quadratic through the neighbouring triple.
pub fn cumulative_simpson(values: &[f64], h: f64) -> Vec<f64> {
    let n = values.len();
    let mut out = vec![0.0; n];
    let mut i = 0;
    while i + 2 < n {
        let (f0, f1, f2) = (values[i], values[i + 1], values[i + 2]);
        out[i + 1] = out[i] + h * (5.0 * f0 + 8.0 * f1 - f2) / 12.0;
        out[i + 2] = out[i] + h * (f0 + 4.0 * f1 + f2) / 3.0;
        i += 2;
    }
    if i + 1 < n {
        out[i + 1] = out[i] + 0.5 * h * (values[i] + values[i + 1]);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gk_integrates_smooth_function() {
        let r = integrate(|x: f64| x.cos(), 0.0, 2.0, 1e-13, 1e-13, 100).unwrap();
        assert!((r.value - 2f64.sin()).abs() < 1e-13);
    }

    #[test]
    fn gk_adapts_to_sqrt_endpoint() {
        let r = integrate(|x: f64| x.sqrt(), 0.0, 1.0, 1e-11, 1e-11, 500).unwrap();
        assert!((r.value - 2.0 / 3.0).abs() < 1e-10);
    }

    #[test]
    fn gk_reports_nonfinite() {
        let r = integrate(|x: f64| 1.0 / x, 0.0, 1.0, 1e-10, 0.0, 10);
        assert!(matches!(r, Err(QuadError::NonFinite { .. }) | Err(QuadError::NoConvergence { .. })));
    }

    #[test]
    fn simpson_exact_on_cubic() {
        let h = 0.25;
        let v: Vec<f64> = (0..9).map(|i| (i as f64 * h).powi(3)).collect();
        assert!((simpson(&v, h).unwrap() - 4.0).abs() < 1e-14);
        assert_eq!(simpson(&v[..4], h), Err(QuadError::OddPanels(3)));
    }

    #[test]
    fn cumulative_matches_endpoint() {
        let h = 0.01;
        let v: Vec<f64> = (0..201).map(|i| (i as f64 * h).exp()).collect();
        let p = cumulative_simpson(&v, h);
        assert!((p[200] - (2f64.exp() - 1.0)).abs() < 1e-9);
        assert!((p[101] - (1.01f64.exp() - 1.0)).abs() < 1e-7);
    }
}
