use std::f64::consts::PI;

use speclab_spectral::*;

fn cfg(q: &Potential, omega: f64) -> ShootingConfig {
    ShootingConfig::for_problem(q, omega)
}

/// Zero-energy solution of Q₁: √(1+x²) sin(μ arctan x), μ = √(1+ω²); its nodes on (0, ∞).
fn q1_dirichlet_count(omega: f64) -> usize {
    let mu = (1.0 + omega * omega).sqrt();
    (1..).take_while(|&n| (n as f64) < mu / 2.0).count()
}

#[test]
fn square_well_shooting_matches_closed_form() {
    for omega in [6.0, 10.0] {
        let q = Potential::SquareWell;
        let sp = solve_spectrum(&q, omega, &cfg(&q, omega)).unwrap();
        let oracle = square_well_spectrum(omega).unwrap().spectrum;
        assert_eq!(sp.n, oracle.n);
        for j in 0..sp.n {
            assert!((sp.xi[j] - oracle.xi[j]).abs() / oracle.xi[j] < 1e-6, "omega {omega} mode {j}");
            assert!((sp.c[j] - oracle.c[j]).abs() / oracle.c[j] < 1e-4);
        }
        sp.check_invariants(&q).unwrap();
    }
}

#[test]
fn square_well_count_matches_root_count() {
    let q = Potential::SquareWell;
    for omega in [2.0, 6.0, 10.0, 17.5] {
        let n = count_eigenvalues(&q, omega, &cfg(&q, omega)).unwrap();
        assert_eq!(n, square_well_spectrum(omega).unwrap().spectrum.n, "omega {omega}");
    }
}

#[test]
fn shallow_wells_have_no_bound_states() {
    let q = Potential::q1();
    assert_eq!(count_eigenvalues(&q, 0.05, &cfg(&q, 0.05)).unwrap(), 0);
    let q = Potential::SquareWell;
    assert_eq!(count_eigenvalues(&q, 1.0, &cfg(&q, 1.0)).unwrap(), 0);
    assert_eq!(solve_spectrum(&q, 1.0, &cfg(&q, 1.0)).unwrap(), Spectrum::empty(1.0));
}

#[test]
fn q1_count_matches_zero_energy_solution() {
    let q = Potential::q1();
    for omega in [1.0, 2.5, 5.0, 8.0, 10.0, 13.0, 20.0] {
        let n = count_eigenvalues(&q, omega, &cfg(&q, omega)).unwrap();
        assert_eq!(n, q1_dirichlet_count(omega), "omega {omega}");
    }
}

#[test]
fn q1_omega_ten_spacing_and_floor() {
    let q = Potential::q1();
    let omega = 10.0;
    let modes = solve_modes(&q, omega, &cfg(&q, omega)).unwrap();
    let sp = solve_spectrum(&q, omega, &cfg(&q, omega)).unwrap();
    sp.check_invariants(&q).unwrap();
    assert!(sp.xi[0] >= PI * PI / (256.0 * omega));
    assert!(sp.xi.windows(2).all(|w| w[1] - w[0] >= 1.0 / (5.0 * omega)));
    for m in &modes {
        assert!((m.norm_check - 1.0).abs() <= 1e-8, "mode {} norm {}", m.index, m.norm_check);
    }
}

#[test]
fn halving_the_grid_step_is_stable() {
    for (q, omega) in [(Potential::SquareWell, 10.0), (Potential::q1(), 8.0)] {
        let c = cfg(&q, omega);
        let mut fine = c.clone();
        fine.grid_step /= 2.0;
        let a = solve_spectrum(&q, omega, &c).unwrap();
        let b = solve_spectrum(&q, omega, &fine).unwrap();
        for (x, y) in a.xi.iter().zip(&b.xi) {
            assert!((x - y).abs() / x < 10.0 * c.eig_tol, "{x} vs {y}");
        }
    }
}

#[test]
fn coarse_grid_rejected_by_config() {
    let q = Potential::q1();
    let mut c = cfg(&q, 10.0);
    c.grid_step = 0.01;
    assert!(matches!(count_eigenvalues(&q, 10.0, &c), Err(SpectralError::Config(_))));
}

#[test]
fn zero_potential_jost_is_one() {
    let ks = [Complex64::new(1.0, 0.0), Complex64::new(0.3, 2.0), Complex64::new(0.0, 0.5)];
    for v in jost_function(&Potential::q1(), 0.0, &ks, 10, Some(5.0)).unwrap() {
        assert!((v.f - 1.0).norm() < 1e-14);
    }
}

#[test]
fn jost_tends_to_one_for_large_real_k() {
    let omega: f64 = 4.0;
    let int_q = PI / 4.0;
    let ks: Vec<Complex64> = [25.0, 50.0, 100.0, 200.0].iter().map(|&k| Complex64::new(k, 0.0)).collect();
    let vals = jost_function(&Potential::q1(), omega, &ks, 60, Some(200.0)).unwrap();
    let dev: Vec<f64> = vals.iter().map(|v| (v.f - 1.0).norm()).collect();
    for (v, d) in vals.iter().zip(&dev) {
        let bound = (omega * omega * int_q / v.k.re).exp() - 1.0;
        assert!(*d <= bound, "k {}: {d} > {bound}", v.k);
    }
    assert!(dev.windows(2).all(|w| w[1] < w[0]));
    assert!(vals.iter().all(|v| v.f.norm() >= 0.5));
}

#[test]
fn jost_vanishes_at_eigenvalues() {
    for (q, omega) in [(Potential::SquareWell, 10.0), (Potential::q1(), 8.0)] {
        let sp = solve_spectrum(&q, omega, &cfg(&q, omega)).unwrap();
        let top = omega * q.sup().sqrt();
        let probe: Vec<Complex64> = (1..=200).map(|i| Complex64::new(0.0, top * i as f64 / 200.0)).collect();
        let max_f = jost_function(&q, omega, &probe, 60, None).unwrap().iter().map(|v| v.f.norm()).fold(0.0, f64::max);
        let at: Vec<Complex64> = sp.xi.iter().map(|&x| Complex64::new(0.0, x)).collect();
        for v in jost_function(&q, omega, &at, 60, None).unwrap() {
            assert!(v.f.norm() < 1e-4 * max_f, "F({}) = {}", v.k, v.f);
            assert!(v.picard_ratio < 1e-10);
        }
    }
}

#[test]
fn identity_square_well() {
    let q = Potential::SquareWell;
    let sp = square_well_spectrum(10.0).unwrap().spectrum;
    let rep = characteristic_identity_check(&sp, &q, 10.0, &cfg(&q, 10.0), &SSource::AsymptoticFit).unwrap();
    assert!(rep.pass);
    assert!(rep.modes.iter().all(|m| m.residual.unwrap() < 0.05));
}

#[test]
fn identity_q1_smoke() {
    let q = Potential::q1();
    let c = cfg(&q, 8.0);
    let sp = solve_spectrum(&q, 8.0, &c).unwrap();
    let rep = characteristic_identity_check(&sp, &q, 8.0, &c, &SSource::AsymptoticFit).unwrap();
    assert_eq!(rep.modes.len(), sp.n);
    for m in &rep.modes {
        assert!(m.lhs.is_finite() && m.rhs.unwrap().is_finite() && m.residual.unwrap().is_finite());
    }
}

#[test]
fn identity_empty_spectrum() {
    let q = Potential::SquareWell;
    let rep = characteristic_identity_check(&Spectrum::empty(1.0), &q, 1.0, &cfg(&q, 1.0), &SSource::AsymptoticFit).unwrap();
    assert!(rep.modes.is_empty() && rep.median_residual.is_none());
}

#[test]
fn square_well_example_bounds() {
    let sw = square_well_spectrum(10.0).unwrap();
    assert!(sw.phase_ok);
    assert!(sw.double_root_suspects.is_empty());
    let omega2 = 100.0;
    for (&x, &c) in sw.spectrum.xi.iter().zip(&sw.spectrum.c) {
        assert!(x >= 0.1);
        let r = 4.0 * x * x / c;
        assert!(r >= 1.0 / (5.0 * omega2) && r <= 220.0 * omega2);
    }
    assert!(sw.residuals.iter().all(|&r| r < 1e-9));
}

#[test]
fn spectrum_json_shape() {
    let sp = Spectrum { omega: 2.0, xi: vec![1.0], c: vec![3.0], n: 1 };
    let s = serde_json::to_string(&sp).unwrap();
    assert_eq!(s, r#"{"omega":2.0,"xi":[1.0],"C":[3.0],"N":1}"#);
}
