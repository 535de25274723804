//! Dense real polynomials: univariate with root isolation, and a small
//! multivariate evaluator.

use serde::{Deserialize, Serialize};

/// Coefficients in ascending order, trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Poly1 {
    pub coeffs: Vec<f64>,
}

/// Roots found for one polynomial plus anything suspicious seen on the way.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RootIsolation {
    pub roots: Vec<f64>,
    pub warnings: Vec<String>,
}

const BISECT_TOL: f64 = 1e-12;
const GCD_TOL: f64 = 1e-10;

impl Poly1 {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        Poly1 { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Poly1 {
        Poly1::new(self.coeffs.iter().enumerate().skip(1).map(|(k, &c)| k as f64 * c).collect())
    }

    fn scale(&self) -> f64 {
        self.coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()))
    }

    fn normalized(&self) -> Poly1 {
        let s = self.scale();
        if s == 0.0 {
            return self.clone();
        }
        Poly1::new(self.coeffs.iter().map(|c| c / s).collect())
    }

    /// Long division `self = q * rhs + r`.
    pub fn div_rem(&self, rhs: &Poly1) -> (Poly1, Poly1) {
        assert!(!rhs.is_zero(), "division by zero polynomial");
        let mut r = self.coeffs.clone();
        let dr = rhs.degree();
        let lead = rhs.coeffs[dr];
        if self.degree() < dr || self.is_zero() {
            return (Poly1::new(vec![]), self.clone());
        }
        let mut q = vec![0.0; self.degree() - dr + 1];
        for k in (0..q.len()).rev() {
            let f = r[k + dr] / lead;
            q[k] = f;
            for (j, &c) in rhs.coeffs.iter().enumerate() {
                r[k + j] -= f * c;
            }
            r[k + dr] = 0.0;
        }
        r.truncate(dr);
        (Poly1::new(q), Poly1::new(r))
    }

    /// Remainder with coefficients below `tol` (relative to the divisor's
    /// scale) treated as zero.
    fn rem_tol(&self, rhs: &Poly1, tol: f64) -> Poly1 {
        let (_, r) = self.div_rem(rhs);
        if r.scale() <= tol * rhs.scale().max(self.scale()) {
            Poly1::new(vec![])
        } else {
            r
        }
    }

    /// Approximate gcd by Euclid with relative tolerance.
    pub fn gcd_approx(&self, other: &Poly1, tol: f64) -> Poly1 {
        let (mut a, mut b) = (self.normalized(), other.normalized());
        while !b.is_zero() {
            let r = a.rem_tol(&b, tol).normalized();
            a = b;
            b = r;
        }
        a
    }

    /// p / gcd(p, p′): same real roots, all simple.
    pub fn squarefree(&self) -> Poly1 {
        if self.degree() <= 1 {
            return self.clone();
        }
        let g = self.gcd_approx(&self.derivative(), GCD_TOL);
        if g.degree() == 0 {
            self.clone()
        } else {
            self.div_rem(&g).0
        }
    }

    pub fn sturm_sequence(&self) -> Vec<Poly1> {
        let mut seq = vec![self.normalized()];
        if self.degree() == 0 {
            return seq;
        }
        seq.push(self.derivative().normalized());
        loop {
            let n = seq.len();
            let r = seq[n - 2].rem_tol(&seq[n - 1], 1e-13);
            if r.is_zero() {
                break;
            }
            seq.push(Poly1::new(r.normalized().coeffs.iter().map(|c| -c).collect()));
        }
        seq
    }

    /// Upper bound on |root|: 1 + max |a_k / a_n|.
    pub fn cauchy_bound(&self) -> f64 {
        let d = self.degree();
        let lead = self.coeffs[d].abs();
        1.0 + self.coeffs[..d].iter().fold(0.0f64, |m, c| m.max(c.abs() / lead))
    }

    /// All real roots of the square-free part, located on a `resolution`-cell
    /// grid over the Cauchy disc, certified per cell by Sturm counts, refined by
    /// bisection to 1e-12.
    pub fn real_roots(&self, resolution: usize) -> RootIsolation {
        let mut out = RootIsolation::default();
        if self.degree() == 0 {
            return out;
        }
        let sf = self.squarefree();
        if sf.degree() < self.degree() {
            out.warnings.push(format!(
                "repeated roots: square-free part has degree {} of {}",
                sf.degree(),
                self.degree()
            ));
        }
        let seq = sf.sturm_sequence();
        let rad = sf.cauchy_bound();
        let cells = resolution.max(1);
        let h = 2.0 * rad / cells as f64;
        let mut isolator = Isolator { p: &sf, seq: &seq, out: &mut out };
        for k in 0..cells {
            let a = -rad + k as f64 * h;
            let b = if k + 1 == cells { rad } else { -rad + (k + 1) as f64 * h };
            isolator.cell(a, b, 0);
        }
        let expected = variations(&seq, -rad) as i64 - variations(&seq, rad) as i64;
        if expected != out.roots.len() as i64 {
            out.warnings.push(format!("Sturm count {expected} differs from {} isolated roots", out.roots.len()));
        }
        out.roots.sort_by(f64::total_cmp);
        out
    }
}

fn variations(seq: &[Poly1], x: f64) -> usize {
    let mut count = 0;
    let mut last = 0.0f64;
    for p in seq {
        let v = p.eval(x);
        if v == 0.0 {
            continue;
        }
        if last != 0.0 && v.signum() != last.signum() {
            count += 1;
        }
        last = v;
    }
    count
}

struct Isolator<'a> {
    p: &'a Poly1,
    seq: &'a [Poly1],
    out: &'a mut RootIsolation,
}

impl Isolator<'_> {
    /// Roots in (a, b].
    fn cell(&mut self, a: f64, b: f64, depth: usize) {
        let count = variations(self.seq, a) as i64 - variations(self.seq, b) as i64;
        if count <= 0 {
            return;
        }
        let (fa, fb) = (self.p.eval(a), self.p.eval(b));
        if count == 1 {
            if fb == 0.0 {
                self.out.roots.push(b);
                return;
            }
            if fa != 0.0 && fa.signum() != fb.signum() {
                if let Ok(x) = speclab_numerics::bisect(|x| self.p.eval(x), a, b, BISECT_TOL) {
                    self.out.roots.push(x);
                    return;
                }
            }
        }
        if b - a < BISECT_TOL || depth > 200 {
            self.out.warnings.push(format!("{count} roots unresolved below width {:.3e} near {}", b - a, 0.5 * (a + b)));
            for _ in 0..count {
                self.out.roots.push(0.5 * (a + b));
            }
            return;
        }
        let m = 0.5 * (a + b);
        self.cell(a, m, depth + 1);
        self.cell(m, b, depth + 1);
    }
}

/// Sparse-by-monomial multivariate polynomial of total degree ≤ d.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyN {
    pub n: usize,
    pub terms: Vec<(Vec<u32>, f64)>,
}

impl PolyN {
    pub fn new(n: usize, terms: Vec<(Vec<u32>, f64)>) -> Self {
        PolyN { n, terms }
    }

    /// Every monomial of total degree ≤ d in n variables, in graded order.
    pub fn monomials(n: usize, d: usize) -> Vec<Vec<u32>> {
        let mut out: Vec<Vec<u32>> = vec![vec![]];
        for _ in 0..n {
            let mut next = Vec::new();
            for m in &out {
                let used: u32 = m.iter().sum();
                for e in 0..=(d as u32 - used) {
                    let mut m2 = m.clone();
                    m2.push(e);
                    next.push(m2);
                }
            }
            out = next;
        }
        out.sort_by_key(|m| (m.iter().sum::<u32>(), std::cmp::Reverse(m.clone())));
        out
    }

    pub fn degree(&self) -> usize {
        self.terms
            .iter()
            .filter(|(_, c)| *c != 0.0)
            .map(|(m, _)| m.iter().sum::<u32>() as usize)
            .max()
            .unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|(_, c)| *c == 0.0)
    }

    pub fn eval(&self, z: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| c * m.iter().zip(z).map(|(&e, &x)| x.powi(e as i32)).product::<f64>())
            .sum()
    }

    pub fn to_univariate(&self) -> Option<Poly1> {
        if self.n != 1 {
            return None;
        }
        let mut c = vec![0.0; self.degree() + 1];
        for (m, v) in &self.terms {
            c[m[0] as usize] += v;
        }
        Some(Poly1::new(c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn division_and_gcd() {
        let p = Poly1::new(vec![-1.0, 0.0, 1.0]);
        let (q, r) = p.div_rem(&Poly1::new(vec![-1.0, 1.0]));
        assert_eq!(q.coeffs, vec![1.0, 1.0]);
        assert!(r.is_zero());
        let sq = Poly1::new(vec![1.0, -2.0, 1.0]);
        assert_eq!(sq.squarefree().degree(), 1);
    }

    #[test]
    fn roots_of_cubic() {
        let p = Poly1::new(vec![6.0, -11.0, 6.0, -1.0]);
        let r = p.real_roots(64);
        assert!(r.warnings.is_empty(), "{:?}", r.warnings);
        assert_eq!(r.roots.len(), 3);
        for (x, want) in r.roots.iter().zip([1.0, 2.0, 3.0]) {
            assert!((x - want).abs() < 1e-11);
        }
    }

    #[test]
    fn root_on_grid_point_and_double_root() {
        let r = Poly1::new(vec![0.0, 1.0]).real_roots(10);
        assert_eq!(r.roots, vec![0.0]);
        let r = Poly1::new(vec![1.0, -2.0, 1.0]).real_roots(7);
        assert_eq!(r.roots.len(), 1);
        assert!((r.roots[0] - 1.0).abs() < 1e-11);
        assert!(!r.warnings.is_empty());
    }

    #[test]
    fn close_roots_resolved_by_sturm_split() {
        let p = Poly1::new(vec![1.0 - 1e-8, -2.0, 1.0]);
        let r = p.real_roots(3);
        assert_eq!(r.roots.len(), 2, "{:?}", r);
    }

    #[test]
    fn no_real_roots() {
        let r = Poly1::new(vec![1.0, 0.0, 1.0]).real_roots(16);
        assert!(r.roots.is_empty());
    }

    #[test]
    fn multivariate_eval() {
        let p = PolyN::new(2, vec![(vec![2, 0], 1.0), (vec![0, 2], 1.0), (vec![0, 0], 1.0)]);
        assert_eq!(p.eval(&[1.0, 2.0]), 6.0);
        assert_eq!(p.degree(), 2);
        assert_eq!(PolyN::monomials(2, 2).len(), 6);
    }
}
