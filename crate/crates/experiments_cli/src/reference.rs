//! 256-bit re-evaluations of the closed-form bounds, for the cross-check flags.

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use serde::{Deserialize, Serialize};
use speclab_holder_bump::{EntireFamilyParams, NormCase};

use crate::CliError;

const P: usize = 256;
const RM: RoundingMode = RoundingMode::ToEven;
pub const REL_TOL: f64 = 1e-12;

/// A computed value beside its high-precision reference.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrossCheck {
    pub value: f64,
    pub reference: f64,
    /// Reference printed to 50 significant digits.
    pub reference_digits: String,
    pub agrees: bool,
}

pub struct Big {
    cc: Consts,
}

impl Big {
    pub fn new() -> Result<Self, CliError> {
        Ok(Big { cc: Consts::new().map_err(|e| CliError::Reference(format!("{e:?}")))? })
    }

    fn n(&self, v: f64) -> BigFloat {
        BigFloat::from_f64(v, P)
    }

    fn e(&mut self) -> BigFloat {
        self.cc.e(P, RM)
    }

    fn mul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, P, RM)
    }

    fn div(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.div(b, P, RM)
    }

    fn pow(&mut self, b: &BigFloat, x: f64) -> BigFloat {
        b.pow(&self.n(x), P, RM, &mut self.cc)
    }

    fn log2(&mut self, x: &BigFloat) -> BigFloat {
        x.log2(P, RM, &mut self.cc)
    }

    fn fact(&self, k: u32) -> BigFloat {
        (1..=k).fold(self.n(1.0), |acc, j| acc.mul(&self.n(j as f64), P, RM))
    }

    fn format(&mut self, x: &BigFloat) -> Result<String, CliError> {
        x.format(Radix::Dec, RM, &mut self.cc).map_err(|e| CliError::Reference(format!("{e:?}")))
    }

    /// Compares `value` to `x` in relative terms.
    pub fn check(&mut self, value: f64, x: &BigFloat) -> Result<CrossCheck, CliError> {
        let full = self.format(x)?;
        let reference: f64 = full.parse().map_err(|_| CliError::Reference(format!("unparsable {full}")))?;
        let agrees = if reference == 0.0 {
            value == 0.0
        } else {
            ((value - reference) / reference).abs() <= REL_TOL
        };
        Ok(CrossCheck { value, reference, reference_digits: fifty_digits(&full), agrees })
    }

    /// log2 (4edq/n)^n.
    pub fn warren_log2(&mut self, n: u64, d: u64, q: u64) -> BigFloat {
        let e = self.e();
        let inner = self.div(&self.mul(&e, &self.n((4 * d * q) as f64)), &self.n(n as f64));
        let l = self.log2(&inner);
        self.mul(&l, &self.n(n as f64))
    }

    /// log2 of 2^{k(k−1)/2} d^{n+k} n^{n+2k}.
    pub fn khovanskii_cell_log2(&mut self, n: u64, k: u64, d: u64) -> BigFloat {
        let (nf, kf) = (n as f64, k as f64);
        let ld = self.log2(&self.n(d as f64));
        let ln = self.log2(&self.n(nf));
        let a = self.mul(&ld, &self.n(nf + kf));
        let b = self.mul(&ln, &self.n(nf + 2.0 * kf));
        self.n(kf * (kf - 1.0) / 2.0).add(&a, P, RM).add(&b, P, RM)
    }

    /// log2 of 2^{k(k−1)/2} (4emdn)^{n+2k}.
    pub fn khovanskii_complement_log2(&mut self, n: u64, k: u64, d: u64, m: u64) -> BigFloat {
        let (nf, kf) = (n as f64, k as f64);
        let e = self.e();
        let base = self.mul(&e, &self.n((4 * m * d * n) as f64));
        let lb = self.log2(&base);
        self.n(kf * (kf - 1.0) / 2.0).add(&self.mul(&lb, &self.n(nf + 2.0 * kf)), P, RM)
    }

    fn sp_terms(&mut self, l: f64, s: usize) -> (BigFloat, BigFloat, f64) {
        let p = l.floor() + 1.0;
        let sq = self.n(s as f64).sqrt(P, RM);
        let pp = self.pow(&self.n(p), p);
        (sq, pp, p)
    }

    /// C/(k² n log₂n log₂d)^{l/s}, n and d promoted to at least 2.
    pub fn khovanskii_floor(&mut self, n: u64, k: u64, d: u64, l: f64, s: usize) -> BigFloat {
        let ls = l / s as f64;
        let (sq, pp, p) = self.sp_terms(l, s);
        let one_e = self.e().add(&self.n(1.0), P, RM);
        let four = self.mul(&one_e, &self.n(4.0));
        let tail = self.pow(&four, s as f64 * p);
        let two = self.pow(&self.n(2.0), l + 1.0);
        let t38 = self.pow(&self.n(38.0), ls);
        let den_c = [two, t38, pp, tail].iter().fold(sq, |acc, x| self.mul(&acc, x));
        let (nn, dd) = (self.n(n.max(2) as f64), self.n(d.max(2) as f64));
        let lgn = self.log2(&nn);
        let lgd = self.log2(&dd);
        let inner = self.mul(&self.mul(&self.mul(&self.n((k * k) as f64), &nn), &lgn), &lgd);
        let ip = self.pow(&inner, ls);
        let den = self.mul(&den_c, &ip);
        self.div(&self.n(1.0), &den)
    }

    /// K with C = 4/K.
    fn k_base(&mut self, case: NormCase, l: f64, s: usize) -> BigFloat {
        let sf = s as f64;
        let ls = l / sf;
        let (sq, pp, p) = self.sp_terms(l, s);
        let one_e = self.e().add(&self.n(1.0), P, RM);
        let parts = match case {
            NormCase::Uniform => {
                let four = self.mul(&one_e, &self.n(4.0));
                vec![self.pow(&self.n(2.0), l + 3.0), self.pow(&self.n(8.0), ls), self.pow(&four, sf * p)]
            }
            NormCase::L1 => {
                let pi = p as u32;
                let num = self.pow(&self.fact(2 * pi + 1), sf);
                let den = self.pow(&self.fact(pi), 2.0 * sf);
                vec![
                    self.n(5.0),
                    self.pow(&self.n(2.0), l + 4.0),
                    self.pow(&self.n(18.0), ls),
                    self.div(&num, &den),
                    self.pow(&one_e, sf * p),
                ]
            }
        };
        parts.iter().fold(self.mul(&sq, &pp), |acc, x| self.mul(&acc, x))
    }

    pub fn lower_bound_constant(&mut self, case: NormCase, l: f64, s: usize) -> BigFloat {
        let k = self.k_base(case, l, s);
        self.div(&self.n(4.0), &k)
    }

    /// C′ = 3/(K (d(r+1)+v+t)^{l/s} log₂(2ebud 2^{(4e+1)d} B^d (1+l/s)² log₂(AK))^{l/s}).
    pub fn floor_constant(&mut self, case: NormCase, l: f64, s: usize, p: &EntireFamilyParams) -> BigFloat {
        let ls = l / s as f64;
        let k = self.k_base(case, l, s);
        let e = self.e();
        let ak = self.mul(&self.n(p.a), &k);
        let inner = self.log2(&ak);
        let expo = self.mul(&e.mul(&self.n(4.0), P, RM).add(&self.n(1.0), P, RM), &self.n(p.d));
        let two_pow = self.n(2.0).pow(&expo, P, RM, &mut self.cc);
        let parts = [
            self.mul(&e, &self.n(2.0 * p.b * p.u * p.d)),
            two_pow,
            self.pow(&self.n(p.big_b), p.d),
            self.pow(&self.n(1.0 + ls), 2.0),
            inner,
        ];
        let arg = parts.iter().skip(1).fold(parts[0].clone(), |acc, x| self.mul(&acc, x));
        let outer = self.log2(&arg);
        let depth = self.n(p.d * (p.r + 1.0) + p.v + p.t);
        let dp = self.pow(&depth, ls);
        let op = self.pow(&outer, ls);
        let den = self.mul(&self.mul(&k, &dp), &op);
        self.div(&self.n(3.0), &den)
    }

    /// C′/(N log₂N)^{l/s}.
    pub fn floor_value(&mut self, case: NormCase, l: f64, s: usize, p: &EntireFamilyParams) -> BigFloat {
        let c = self.floor_constant(case, l, s, p);
        let nn = self.n(p.n as f64);
        let lg = self.log2(&nn);
        let den = self.pow(&self.mul(&nn, &lg), l / s as f64);
        self.div(&c, &den)
    }
}

/// Keeps the sign, 50 significant digits and the exponent of a decimal rendering.
fn fifty_digits(full: &str) -> String {
    let (mant, exp) = match full.find(['e', 'E']) {
        Some(i) => (&full[..i], &full[i..]),
        None => (full, ""),
    };
    let neg = mant.starts_with('-');
    let body = mant.trim_start_matches(['-', '+']);
    let mut digits = 0;
    let mut out = String::new();
    for ch in body.chars() {
        if ch.is_ascii_digit() {
            if digits == 50 {
                break;
            }
            digits += 1;
        }
        out.push(ch);
    }
    format!("{}{out}{exp}", if neg { "-" } else { "" })
}
