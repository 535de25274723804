use std::f64::consts::{E, LN_2};

use serde::{Deserialize, Serialize};

use crate::{HolderClass, HolderError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormCase {
    Uniform,
    L1,
}

/// Growth envelope ‖f(·,ζ)‖ ≤ A e^{uN^v} e^{bN^t‖ζ‖₁^d} on the box |ζ_j| ≤ B N^r.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntireFamilyParams {
    #[serde(rename = "A")]
    pub a: f64,
    pub u: f64,
    pub v: f64,
    pub b: f64,
    pub t: f64,
    pub d: f64,
    #[serde(rename = "B")]
    pub big_b: f64,
    pub r: f64,
    #[serde(rename = "N")]
    pub n: u64,
}

impl EntireFamilyParams {
    pub fn new(a: f64, u: f64, v: f64, b: f64, t: f64, d: f64, big_b: f64, r: f64, n: u64) -> Result<Self, HolderError> {
        let p = Self { a, u, v, b, t, d, big_b, r, n };
        p.validate()?;
        Ok(p)
    }

    /// Every real parameter equal to 1, with the given N.
    pub fn all_ones(n: u64) -> Self {
        Self { a: 1.0, u: 1.0, v: 1.0, b: 1.0, t: 1.0, d: 1.0, big_b: 1.0, r: 1.0, n }
    }

    pub fn validate(&self) -> Result<(), HolderError> {
        let named = [
            ("A", self.a),
            ("u", self.u),
            ("v", self.v),
            ("b", self.b),
            ("t", self.t),
            ("d", self.d),
            ("B", self.big_b),
            ("r", self.r),
            ("N", self.n as f64),
        ];
        for (name, value) in named {
            if !(value.is_finite() && value >= 1.0) {
                return Err(HolderError::FamilyParam { name, value });
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyConstants {
    pub c_inf: f64,
    pub c_l1: f64,
    pub c_prime_inf: f64,
    pub c_prime_l1: f64,
}

fn ln_factorial(n: u32) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// ln of the common denominator K with C = 4/K and C′ = 3/(K ...).
fn ln_base(case: NormCase, h: &HolderClass) -> f64 {
    let p = h.bump_power();
    let pf = p as f64;
    let s = h.s as f64;
    let ls = h.l / s;
    let shared = 0.5 * s.ln() + pf * pf.ln();
    match case {
        NormCase::Uniform => {
            shared + (h.l + 3.0) * LN_2 + ls * 8f64.ln() + s * pf * (4.0 * (1.0 + E)).ln()
        }
        NormCase::L1 => {
            shared + 5f64.ln() + (h.l + 4.0) * LN_2 + ls * 18f64.ln() + s * ln_factorial(2 * p + 1)
                + s * pf * (1.0 + E).ln()
                - 2.0 * s * ln_factorial(p)
        }
    }
}

/// C∞(l,s) or C_{L¹}(l,s).
pub fn lower_bound_constant(case: NormCase, holder: &HolderClass) -> f64 {
    (4f64.ln() - ln_base(case, holder)).exp()
}

/// C′∞ or C′_{L¹}; logarithms inside are binary.
pub fn analytic_floor_constant(
    case: NormCase,
    holder: &HolderClass,
    params: &EntireFamilyParams,
) -> Result<f64, HolderError> {
    params.validate()?;
    let ls = holder.l / holder.s as f64;
    let base = ln_base(case, holder);
    let inner = (params.a.ln() + base) / LN_2;
    let outer_ln = (2.0 * E * params.b * params.u * params.d).ln()
        + (4.0 * E + 1.0) * params.d * LN_2
        + params.d * params.big_b.ln()
        + 2.0 * (1.0 + ls).ln()
        + inner.ln();
    let outer = outer_ln / LN_2;
    let depth = params.d * (params.r + 1.0) + params.v + params.t;
    Ok((3f64.ln() - base - ls * depth.ln() - ls * outer.ln()).exp())
}

pub fn family_constants(holder: &HolderClass, params: &EntireFamilyParams) -> Result<FamilyConstants, HolderError> {
    Ok(FamilyConstants {
        c_inf: lower_bound_constant(NormCase::Uniform, holder),
        c_l1: lower_bound_constant(NormCase::L1, holder),
        c_prime_inf: analytic_floor_constant(NormCase::Uniform, holder, params)?,
        c_prime_l1: analytic_floor_constant(NormCase::L1, holder, params)?,
    })
}
