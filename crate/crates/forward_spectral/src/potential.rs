use serde::{Deserialize, Serialize};
use speclab_numerics::integrate;

use crate::SpectralError;

/// Q ≥ 0 on [0, ∞).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", content = "parameters")]
pub enum Potential {
    /// scale / (1 + x²)^exponent.
    RationalDecay { scale: f64, exponent: f64 },
    /// 1 on [0, 1], 0 beyond.
    SquareWell,
    /// Piecewise linear through the knots, then values.last · (x_last/x)^decay_exponent.
    Tabulated {
        knots: Vec<f64>,
        values: Vec<f64>,
        decay_exponent: f64,
        #[serde(default)]
        monotone: bool,
    },
}

impl Potential {
    /// Q₁(x) = 1/(1+x²)².
    pub fn q1() -> Self {
        Potential::RationalDecay { scale: 1.0, exponent: 2.0 }
    }

    pub fn validate(&self) -> Result<(), SpectralError> {
        match self {
            Potential::RationalDecay { scale, exponent } => {
                if !(scale.is_finite() && *scale > 0.0) {
                    return Err(SpectralError::Potential(format!("scale must be > 0, got {scale}")));
                }
                if !(exponent.is_finite() && *exponent > 0.5) {
                    return Err(SpectralError::Potential(format!("exponent must exceed 1/2, got {exponent}")));
                }
            }
            Potential::SquareWell => {}
            Potential::Tabulated { knots, values, decay_exponent, monotone } => {
                if knots.len() < 2 || knots.len() != values.len() {
                    return Err(SpectralError::Potential("need >= 2 knots with one value each".into()));
                }
                if knots[0] != 0.0 || knots.windows(2).any(|w| w[1] <= w[0]) {
                    return Err(SpectralError::Potential("knots must start at 0 and increase".into()));
                }
                if values.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
                    return Err(SpectralError::Potential("values must be finite and >= 0".into()));
                }
                if !(*decay_exponent > 1.0) {
                    return Err(SpectralError::Potential(format!("decay exponent must exceed 1, got {decay_exponent}")));
                }
                if *monotone && values.windows(2).any(|w| w[1] >= w[0]) {
                    return Err(SpectralError::Potential("flagged monotone but values do not strictly decrease".into()));
                }
            }
        }
        Ok(())
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Potential::RationalDecay { scale, exponent } => scale / (1.0 + x * x).powf(*exponent),
            Potential::SquareWell => {
                if x <= 1.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Potential::Tabulated { knots, values, decay_exponent, .. } => {
                let last = knots.len() - 1;
                if x >= knots[last] {
                    return values[last] * (knots[last] / x).powf(*decay_exponent);
                }
                if x <= 0.0 {
                    return values[0];
                }
                let i = knots.partition_point(|&k| k <= x) - 1;
                let t = (x - knots[i]) / (knots[i + 1] - knots[i]);
                values[i] + t * (values[i + 1] - values[i])
            }
        }
    }

    /// Q on the side of a breakpoint containing `mid`.
    pub fn eval_branch(&self, x: f64, mid: f64) -> f64 {
        match self {
            Potential::SquareWell => {
                if mid < 1.0 {
                    1.0
                } else {
                    0.0
                }
            }
            _ => self.eval(x),
        }
    }

    /// Points where Q or Q′ may jump.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            Potential::RationalDecay { .. } => vec![],
            Potential::SquareWell => vec![1.0],
            Potential::Tabulated { knots, .. } => {
                if knots.len() <= 200 {
                    knots[1..].to_vec()
                } else {
                    vec![*knots.last().unwrap()]
                }
            }
        }
    }

    pub fn sup(&self) -> f64 {
        match self {
            Potential::RationalDecay { scale, .. } => *scale,
            Potential::SquareWell => 1.0,
            Potential::Tabulated { values, .. } => values.iter().cloned().fold(0.0, f64::max),
        }
    }

    /// Q(0); the evenly extended potential peaks here when it decreases.
    pub fn at_origin(&self) -> f64 {
        self.eval(0.0)
    }

    /// β with Q(x) ~ x^{−β}; `None` for compact support.
    pub fn decay_exponent(&self) -> Option<f64> {
        match self {
            Potential::RationalDecay { exponent, .. } => Some(2.0 * exponent),
            Potential::SquareWell => None,
            Potential::Tabulated { decay_exponent, .. } => Some(*decay_exponent),
        }
    }

    /// Right end of the support when it is compact.
    pub fn support_end(&self) -> Option<f64> {
        match self {
            Potential::SquareWell => Some(1.0),
            _ => None,
        }
    }

    /// Strictly decreasing on (0, ∞); tabulated data only when flagged.
    pub fn is_decreasing(&self) -> bool {
        match self {
            Potential::RationalDecay { .. } => true,
            Potential::SquareWell => false,
            Potential::Tabulated { monotone, .. } => *monotone,
        }
    }

    /// ∫₀^∞ √Q, `None` when it diverges.
    pub fn integral_sqrt(&self) -> Result<Option<f64>, SpectralError> {
        if let Some(end) = self.support_end() {
            let r = integrate(|x| self.eval_branch(x, 0.5 * end).sqrt(), 0.0, end, 1e-12, 1e-12, 200)?;
            return Ok(Some(r.value));
        }
        let beta = self.decay_exponent().unwrap_or(0.0);
        if beta <= 2.0 {
            return Ok(None);
        }
        let x_far = match self {
            Potential::Tabulated { knots, .. } => knots.last().copied().unwrap_or(1.0).max(1.0),
            _ => 1.0,
        } * 1e4;
        let mut total = 0.0;
        let mut a = 0.0;
        let mut edges: Vec<f64> = self.breakpoints().into_iter().filter(|&b| b < x_far).collect();
        let mut e = 1.0;
        while e < x_far {
            edges.push(e);
            e *= 4.0;
        }
        edges.push(x_far);
        edges.sort_by(|a, b| a.partial_cmp(b).unwrap());
        edges.dedup();
        for b in edges {
            total += integrate(|x| self.eval(x).sqrt(), a, b, 1e-13, 1e-12, 400)?.value;
            a = b;
        }
        let tail = self.eval(x_far).sqrt() * x_far / (beta / 2.0 - 1.0);
        Ok(Some(total + tail))
    }
}
