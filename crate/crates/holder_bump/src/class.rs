use serde::{Deserialize, Serialize};

use crate::HolderError;

/// Λ_{l,s}: smoothness `l`, dimension `s`, with `l = m + alpha`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HolderClass {
    pub l: f64,
    pub s: usize,
    pub m: usize,
    pub alpha: f64,
}

impl HolderClass {
    pub fn new(l: f64, s: usize) -> Result<Self, HolderError> {
        if !(l.is_finite() && l > 0.0) {
            return Err(HolderError::Smoothness(l));
        }
        if s == 0 {
            return Err(HolderError::Dimension);
        }
        let m = (-((-l).floor()) - 1.0) as usize;
        Ok(Self { l, s, m, alpha: l - m as f64 })
    }

    /// ⌊l⌋ + 1, the vanishing order of the bump on cell faces.
    pub fn bump_power(&self) -> u32 {
        self.l.floor() as u32 + 1
    }

    pub(crate) fn check_point(&self, x: &[f64]) -> Result<(), HolderError> {
        if x.len() != self.s {
            return Err(HolderError::PointDimension { expected: self.s, got: x.len() });
        }
        for (index, &value) in x.iter().enumerate() {
            if !(0.0..=1.0).contains(&value) {
                return Err(HolderError::OutOfDomain { index, value });
            }
        }
        Ok(())
    }
}

/// Cells per axis plus one sign per cell, row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BumpSpec {
    pub holder: HolderClass,
    pub r: usize,
    pub eps: Vec<i8>,
}

impl BumpSpec {
    pub fn new(holder: HolderClass, r: usize, eps: Vec<i8>) -> Result<Self, HolderError> {
        if r == 0 {
            return Err(HolderError::CellCount);
        }
        let expected = r.pow(holder.s as u32);
        if eps.len() != expected {
            return Err(HolderError::SignLength { expected, got: eps.len() });
        }
        if let Some((index, &value)) = eps.iter().enumerate().find(|(_, &e)| e != 1 && e != -1) {
            return Err(HolderError::SignValue { index, value });
        }
        Ok(Self { holder, r, eps })
    }

    pub fn cells(&self) -> usize {
        self.eps.len()
    }

    /// Row-major cell index and per-axis cell coordinates of `x`.
    pub fn locate(&self, x: &[f64]) -> (usize, Vec<usize>) {
        let mut index = 0;
        let cells: Vec<usize> = x
            .iter()
            .map(|&xj| ((self.r as f64 * xj).floor().max(0.0) as usize).min(self.r - 1))
            .collect();
        for &c in &cells {
            index = index * self.r + c;
        }
        (index, cells)
    }

    /// Value predicted at every cell centre, `1/(2 M 4^{s(⌊l⌋+1)} r^l)`.
    pub fn center_magnitude(&self) -> f64 {
        let h = &self.holder;
        let p = h.bump_power() as f64;
        1.0 / (2.0 * norm_constant_m(h) * 4f64.powf(h.s as f64 * p) * (self.r as f64).powf(h.l))
    }

    /// f_ε extended by zero outside the cube; used by difference stencils.
    pub(crate) fn eval_extended(&self, x: &[f64], scale: f64) -> f64 {
        if x.iter().any(|v| !(0.0..=1.0).contains(v)) {
            return 0.0;
        }
        let (i, cells) = self.locate(x);
        let p = self.holder.bump_power() as i32;
        let r = self.r as f64;
        let mut g = 1.0;
        for (&xj, &c) in x.iter().zip(&cells) {
            let y = r * xj - c as f64;
            g *= (y * (1.0 - y)).powi(p);
        }
        self.eps[i] as f64 * g * scale
    }

    pub(crate) fn amplitude(&self) -> f64 {
        1.0 / (2.0 * (self.r as f64).powf(self.holder.l) * norm_constant_m(&self.holder))
    }
}

/// g_{l,s}(x) = ∏_j (x_j (1 − x_j))^{⌊l⌋+1}.
pub fn eval_g(holder: &HolderClass, x: &[f64]) -> Result<f64, HolderError> {
    holder.check_point(x)?;
    let p = holder.bump_power() as i32;
    Ok(x.iter().map(|&v| (v * (1.0 - v)).powi(p)).product())
}

/// M_{l,s} = √s (1+e)^{s(⌊l⌋+1)} (⌊l⌋+1)^{⌊l⌋+1}.
pub fn norm_constant_m(holder: &HolderClass) -> f64 {
    let p = holder.bump_power() as f64;
    let s = holder.s as f64;
    s.sqrt() * (1.0 + std::f64::consts::E).powf(s * p) * p.powf(p)
}

/// f_ε(x) = ε_i g(r y) / (2 r^l M) on the cell K_i containing x.
pub fn eval_f_eps(bump: &BumpSpec, x: &[f64]) -> Result<f64, HolderError> {
    bump.holder.check_point(x)?;
    Ok(bump.eval_extended(x, bump.amplitude()))
}

/// max |f_ε| over a tensor grid with `per_cell` points per cell and axis.
///
/// `per_cell` odd puts a sample exactly on every cell centre.
pub fn sup_norm_on_grid(bump: &BumpSpec, per_cell: usize) -> f64 {
    let s = bump.holder.s;
    let per_axis = bump.r * per_cell;
    let coords: Vec<f64> = (0..per_axis).map(|i| (i as f64 + 0.5) / per_axis as f64).collect();
    let amp = bump.amplitude();
    let total = per_axis.pow(s as u32);
    let mut point = vec![0.0; s];
    let mut best: f64 = 0.0;
    for flat in 0..total {
        let mut rem = flat;
        for slot in point.iter_mut().rev() {
            *slot = coords[rem % per_axis];
            rem /= per_axis;
        }
        best = best.max(bump.eval_extended(&point, amp).abs());
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_l_has_alpha_one() {
        let h = HolderClass::new(2.0, 1).unwrap();
        assert_eq!((h.m, h.alpha), (1, 1.0));
        let h = HolderClass::new(1.5, 3).unwrap();
        assert_eq!((h.m, h.alpha), (1, 0.5));
        let h = HolderClass::new(0.25, 1).unwrap();
        assert_eq!((h.m, h.alpha), (0, 0.25));
    }

    #[test]
    fn rejects_bad_classes() {
        assert_eq!(HolderClass::new(0.0, 1), Err(HolderError::Smoothness(0.0)));
        assert_eq!(HolderClass::new(1.0, 0), Err(HolderError::Dimension));
    }

    #[test]
    fn g_examples() {
        let h = HolderClass::new(1.5, 2).unwrap();
        assert_eq!(eval_g(&h, &[0.0, 0.3]).unwrap(), 0.0);
        assert_eq!(eval_g(&h, &[0.5, 0.5]).unwrap(), 1.0 / 256.0);
        let h = HolderClass::new(2.0, 1).unwrap();
        assert_eq!(eval_g(&h, &[0.5]).unwrap(), 1.0 / 64.0);
        assert!(matches!(eval_g(&h, &[1.2]), Err(HolderError::OutOfDomain { .. })));
        assert!(matches!(eval_g(&h, &[0.1, 0.2]), Err(HolderError::PointDimension { .. })));
    }

    #[test]
    fn f_eps_two_cell_example() {
        let h = HolderClass::new(1.0, 1).unwrap();
        let b = BumpSpec::new(h, 2, vec![1, -1]).unwrap();
        let m = 4.0 * (1.0 + std::f64::consts::E).powi(2);
        let expected = -(1.0 / 16.0) / (2.0 * 2.0 * m);
        let got = eval_f_eps(&b, &[0.75]).unwrap();
        assert!((got - expected).abs() < 1e-16);
        assert_eq!(eval_f_eps(&b, &[0.5]).unwrap(), 0.0);
    }

    #[test]
    fn row_major_cells() {
        let h = HolderClass::new(1.0, 2).unwrap();
        let b = BumpSpec::new(h, 3, vec![1; 9]).unwrap();
        assert_eq!(b.locate(&[0.1, 0.9]).0, 2);
        assert_eq!(b.locate(&[0.9, 0.1]).0, 6);
        assert_eq!(b.locate(&[1.0, 1.0]).0, 8);
    }

    #[test]
    fn bump_spec_validation() {
        let h = HolderClass::new(1.0, 2).unwrap();
        assert_eq!(BumpSpec::new(h, 2, vec![1; 3]), Err(HolderError::SignLength { expected: 4, got: 3 }));
        assert_eq!(BumpSpec::new(h, 1, vec![0]), Err(HolderError::SignValue { index: 0, value: 0 }));
        assert_eq!(BumpSpec::new(h, 0, vec![]), Err(HolderError::CellCount));
    }
}
