use serde::{Deserialize, Serialize};

use crate::{Potential, SpectralError};

/// Bound states −ξ_j² with C_j = ψ_j′(0)², ξ ascending.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub omega: f64,
    pub xi: Vec<f64>,
    #[serde(rename = "C")]
    pub c: Vec<f64>,
    #[serde(rename = "N")]
    pub n: usize,
}

impl Spectrum {
    pub fn empty(omega: f64) -> Self {
        Spectrum { omega, xi: vec![], c: vec![], n: 0 }
    }

    /// ⌈(2/π) ω ∫₀^∞ √Q⌉, when the integral converges.
    pub fn calogero_bound(potential: &Potential, omega: f64) -> Result<Option<usize>, SpectralError> {
        Ok(potential
            .integral_sqrt()?
            .map(|i| (2.0 / std::f64::consts::PI * omega * i).ceil() as usize))
    }

    /// Ordering, positivity, ξ_N ≤ ω sup √Q and the Calogero bound.
    pub fn check_invariants(&self, potential: &Potential) -> Result<(), String> {
        if self.xi.len() != self.n || self.c.len() != self.n {
            return Err(format!("length mismatch: N = {}, |xi| = {}, |C| = {}", self.n, self.xi.len(), self.c.len()));
        }
        if self.xi.iter().any(|&x| !(x > 0.0)) {
            return Err("xi must be positive".into());
        }
        if self.xi.windows(2).any(|w| w[1] <= w[0]) {
            return Err("xi must strictly increase".into());
        }
        if self.c.iter().any(|&c| !(c > 0.0 && c.is_finite())) {
            return Err("C must be positive and finite".into());
        }
        let top = self.omega * potential.sup().sqrt();
        if let Some(&last) = self.xi.last() {
            if last > top * (1.0 + 1e-12) {
                return Err(format!("xi_N = {last} exceeds omega sup sqrt Q = {top}"));
            }
        }
        if let Ok(Some(bound)) = Self::calogero_bound(potential, self.omega) {
            if self.n > bound {
                return Err(format!("N = {} exceeds the Calogero bound {bound}", self.n));
            }
        }
        Ok(())
    }
}
