use std::collections::BTreeSet;

use rand::{Rng, RngExt};
use serde::{Deserialize, Serialize};

use crate::{CountingError, PolyN};

/// q polynomials in n variables, each of degree ≤ d.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolySystem {
    pub n: usize,
    pub d: usize,
    pub polys: Vec<PolyN>,
}

impl PolySystem {
    pub fn new(n: usize, d: usize, polys: Vec<PolyN>) -> Result<Self, CountingError> {
        if n == 0 {
            return Err(CountingError::TooSmall { what: "n", min: 1, got: 0 });
        }
        if d == 0 {
            return Err(CountingError::TooSmall { what: "d", min: 1, got: 0 });
        }
        for (index, p) in polys.iter().enumerate() {
            if p.n != n {
                return Err(CountingError::Arity { expected: n, got: p.n });
            }
            if p.is_zero() {
                return Err(CountingError::ZeroPolynomial(index));
            }
            if p.degree() > d {
                return Err(CountingError::DegreeAbove { index, degree: p.degree(), d });
            }
        }
        Ok(PolySystem { n, d, polys })
    }

    pub fn q(&self) -> usize {
        self.polys.len()
    }

    pub fn sign_vector(&self, z: &[f64]) -> Vec<i8> {
        self.polys.iter().map(|p| sgn(p.eval(z))).collect()
    }
}

fn sgn(v: f64) -> i8 {
    if v > 0.0 {
        1
    } else if v < 0.0 {
        -1
    } else {
        0
    }
}

/// Dense random system, coefficients uniform in [-1, 1].
pub fn random_system<R: Rng + ?Sized>(n: usize, q: usize, d: usize, rng: &mut R) -> PolySystem {
    let monos = PolyN::monomials(n, d);
    let polys = (0..q)
        .map(|_| PolyN::new(n, monos.iter().map(|m| (m.clone(), rng.random_range(-1.0..=1.0))).collect()))
        .collect();
    PolySystem { n, d, polys }
}

/// Exact attained set for n = 1 over the open intervals between roots.
#[derive(Clone, Debug, PartialEq)]
pub struct SignEnumeration {
    pub vectors: BTreeSet<Vec<i8>>,
    pub distinct_roots: usize,
    pub warnings: Vec<String>,
}

const MERGE_TOL: f64 = 1e-11;

pub fn enumerate_sign_vectors_1d(system: &PolySystem, resolution: usize) -> Result<SignEnumeration, CountingError> {
    if system.n != 1 {
        return Err(CountingError::NotUnivariate(system.n));
    }
    let mut roots = Vec::new();
    let mut warnings = Vec::new();
    let unis: Vec<_> = system.polys.iter().map(|p| p.to_univariate().expect("n = 1")).collect();
    for (i, p) in unis.iter().enumerate() {
        let iso = p.real_roots(resolution);
        roots.extend(iso.roots);
        warnings.extend(iso.warnings.into_iter().map(|w| format!("poly {i}: {w}")));
    }
    roots.sort_by(f64::total_cmp);
    let mut distinct: Vec<f64> = Vec::new();
    for r in roots {
        match distinct.last() {
            Some(&last) if r - last < MERGE_TOL => {
                warnings.push(format!("roots of different polynomials closer than {MERGE_TOL:e} near {r}"));
            }
            _ => distinct.push(r),
        }
    }
    let mut probes = Vec::with_capacity(distinct.len() + 1);
    match (distinct.first(), distinct.last()) {
        (Some(&lo), Some(&hi)) => {
            probes.push(lo - 1.0);
            probes.extend(distinct.windows(2).map(|w| 0.5 * (w[0] + w[1])));
            probes.push(hi + 1.0);
        }
        _ => probes.push(0.0),
    }
    let mut vectors = BTreeSet::new();
    for x in probes {
        let v: Vec<i8> = unis.iter().map(|p| sgn(p.eval(x))).collect();
        if v.contains(&0) {
            warnings.push(format!("polynomial vanishes at interval probe {x}"));
        }
        vectors.insert(v);
    }
    Ok(SignEnumeration { vectors, distinct_roots: distinct.len(), warnings })
}

/// Lower estimate of the attained set from uniform samples in [-box, box]^n.
pub fn sample_sign_vectors<R: Rng + ?Sized>(
    system: &PolySystem,
    samples: usize,
    half_width: f64,
    rng: &mut R,
) -> Result<BTreeSet<Vec<i8>>, CountingError> {
    if samples == 0 {
        return Err(CountingError::TooSmall { what: "samples", min: 1, got: 0 });
    }
    let mut z = vec![0.0; system.n];
    let mut out = BTreeSet::new();
    for _ in 0..samples {
        for zi in z.iter_mut() {
            *zi = rng.random_range(-half_width..=half_width);
        }
        out.insert(system.sign_vector(&z));
    }
    Ok(out)
}

/// First ε ∈ {±1}^q (lexicographic, −1 before +1) absent from the attained set.
pub fn find_unattained_sequence(system: &PolySystem, resolution: usize) -> Result<Option<Vec<i8>>, CountingError> {
    let attained = enumerate_sign_vectors_1d(system, resolution)?.vectors;
    let q = system.q();
    if q >= 63 {
        return Err(CountingError::TooSmall { what: "63 > q", min: 63, got: q as u64 });
    }
    for bits in 0u64..(1u64 << q) {
        let eps: Vec<i8> = (0..q).map(|j| if (bits >> (q - 1 - j)) & 1 == 1 { 1 } else { -1 }).collect();
        if !attained.contains(&eps) {
            return Ok(Some(eps));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn lin(c0: f64, c1: f64) -> PolyN {
        PolyN::new(1, vec![(vec![0], c0), (vec![1], c1)])
    }

    #[test]
    fn identity_polynomial_attains_both_signs() {
        let sys = PolySystem::new(1, 1, vec![lin(0.0, 1.0)]).unwrap();
        let e = enumerate_sign_vectors_1d(&sys, 16).unwrap();
        assert_eq!(e.vectors, BTreeSet::from([vec![-1], vec![1]]));
        assert_eq!(find_unattained_sequence(&sys, 16).unwrap(), None);
    }

    #[test]
    fn two_lines() {
        let sys = PolySystem::new(1, 1, vec![lin(0.0, 1.0), lin(-1.0, 1.0)]).unwrap();
        let e = enumerate_sign_vectors_1d(&sys, 16).unwrap();
        assert_eq!(e.vectors, BTreeSet::from([vec![-1, -1], vec![1, -1], vec![1, 1]]));
        assert_eq!(find_unattained_sequence(&sys, 16).unwrap(), Some(vec![-1, 1]));
    }

    #[test]
    fn validation() {
        assert_eq!(
            PolySystem::new(1, 1, vec![lin(0.0, 0.0)]),
            Err(CountingError::ZeroPolynomial(0))
        );
        let quad = PolyN::new(1, vec![(vec![2], 1.0)]);
        assert!(matches!(PolySystem::new(1, 1, vec![quad]), Err(CountingError::DegreeAbove { .. })));
    }

    #[test]
    fn positive_definite_single_vector() {
        let p = PolyN::new(2, vec![(vec![2, 0], 1.0), (vec![0, 2], 1.0), (vec![0, 0], 1.0)]);
        let sys = PolySystem::new(2, 2, vec![p]).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0);
        let got = sample_sign_vectors(&sys, 200, 5.0, &mut rng).unwrap();
        assert_eq!(got, BTreeSet::from([vec![1]]));
        assert_eq!(sample_sign_vectors(&sys, 1, 5.0, &mut rng).unwrap().len(), 1);
    }
}
