mod common;

use common::*;
use muxsynth_core::linalg::Mat;
use muxsynth_core::matcore::{csd, haar_random_unitary, is_unitary, normalize_det, qubits_for_dim};
use muxsynth_core::Error;
use proptest::prelude::*;

fn phase_diag(n: usize, a: f64) -> Mat {
    Mat::identity(n).scale(cis(a))
}

#[test]
fn is_unitary_examples() {
    assert!(is_unitary(&Mat::identity(4), 1e-12));
    assert!(!is_unitary(&Mat::identity(2).scale(c(2.0, 0.0)), 1e-12));
    let q = qr_unitary(8, &mut TestRng::new(3));
    assert!(is_unitary(&q, 1e-10));
    assert!(!is_unitary(&Mat::zeros(2, 3), 1.0));
}

#[test]
fn qubits_for_dim_accepts_powers_of_two_only() {
    assert_eq!(qubits_for_dim(2), Some(1));
    assert_eq!(qubits_for_dim(256), Some(8));
    assert_eq!(qubits_for_dim(1), None);
    assert_eq!(qubits_for_dim(6), None);
}

#[test]
fn normalize_det_examples() {
    let (un, ph) = normalize_det(&phase_diag(2, std::f64::consts::FRAC_PI_4));
    assert!(un.dist(&Mat::identity(2)) < 1e-15);
    assert!((ph - std::f64::consts::FRAC_PI_4).abs() < 1e-15);

    // det = 1 already: [[0, 1], [−1, 0]].
    let u = Mat::from_vec(2, 2, vec![c(0.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0)]);
    let (un, ph) = normalize_det(&u);
    assert_eq!(ph, 0.0);
    assert!(un.dist(&u) < 1e-15);

    let u = qr_unitary(4, &mut TestRng::new(11));
    let (un, ph) = normalize_det(&u);
    assert!((un.det() - c(1.0, 0.0)).norm() <= 1e-12);
    assert!(un.scale(cis(ph)).dist(&u) < 1e-14);
}

#[test]
fn normalize_det_uses_principal_root() {
    // det(e^{i·3}·I₂) = e^{6i}, whose principal angle is 6 − 2π.
    let (_, ph) = normalize_det(&phase_diag(2, 3.0));
    assert!((ph - (6.0 - 2.0 * std::f64::consts::PI) / 2.0).abs() < 1e-14);
}

#[test]
fn haar_examples() {
    assert!(is_unitary(&haar_random_unitary(1, 0).unwrap(), 1e-12));
    let a = haar_random_unitary(3, 7).unwrap();
    let b = haar_random_unitary(3, 7).unwrap();
    assert_eq!(a, b);
    let d = haar_random_unitary(2, 1).unwrap().dist(&haar_random_unitary(2, 2).unwrap());
    assert!(d > 1e-6);
}

#[test]
fn haar_rejects_out_of_range() {
    assert!(matches!(haar_random_unitary(0, 0), Err(Error::QubitCount(0))));
    assert!(matches!(haar_random_unitary(11, 0), Err(Error::QubitCount(11))));
    assert!(is_unitary(&haar_random_unitary(10, 0).unwrap(), 1e-12 * 1024.0));
}

#[test]
fn haar_first_moment_is_small() {
    // E[U₀₀] = 0 and E[|U₀₀|²] = 1/N for Haar measure.
    let n = 400;
    let (mut m1, mut m2) = (c(0.0, 0.0), 0.0);
    for s in 0..n {
        let u = haar_random_unitary(2, s).unwrap();
        m1 += u[(0, 0)];
        m2 += u[(0, 0)].norm_sqr();
    }
    assert!((m1 / n as f64).norm() < 0.1);
    assert!((m2 / n as f64 - 0.25).abs() < 0.05);
}

#[test]
fn csd_of_identity_is_canonical() {
    for n in [2, 4, 8] {
        let f = csd(&Mat::identity(n)).unwrap();
        let h = n / 2;
        for m in [&f.l0, &f.l1, &f.r0, &f.r1] {
            assert!(m.dist(&Mat::identity(h)) < 1e-14);
        }
        assert!(f.thetas.iter().all(|&t| t == 0.0));
    }
}

fn forward_d(thetas: &[f64]) -> Mat {
    let h = thetas.len();
    let mut d = Mat::zeros(2 * h, 2 * h);
    for (k, t) in thetas.iter().enumerate() {
        d[(k, k)] = c(t.cos(), 0.0);
        d[(k, k + h)] = c(t.sin(), 0.0);
        d[(k + h, k)] = c(-t.sin(), 0.0);
        d[(k + h, k + h)] = c(t.cos(), 0.0);
    }
    d
}

#[test]
fn csd_recovers_forward_middle_factor() {
    let d = forward_d(&[0.3, 0.7]);
    let f = csd(&d).unwrap();
    let mut th = f.thetas.clone();
    th.sort_by(f64::total_cmp);
    assert!((th[0] - 0.3).abs() < 1e-12 && (th[1] - 0.7).abs() < 1e-12);
    assert!(f.reconstruct().dist(&d) < 1e-12);
    // Outer factors are permutations with unit-modulus entries.
    for m in [&f.l0, &f.l1, &f.r0, &f.r1] {
        for r in 0..2 {
            let big = (0..2).filter(|&k| (m[(r, k)].norm() - 1.0).abs() < 1e-10).count();
            assert_eq!(big, 1);
        }
    }
}

fn check_csd(u: &Mat) {
    let n = u.rows();
    let f = csd(u).unwrap();
    let err = f.reconstruct().dist(u);
    assert!(err <= 1e-10 * n as f64, "n={n} err={err}");
    for m in [&f.l0, &f.l1, &f.r0, &f.r1] {
        assert!(is_unitary(m, 1e-10));
    }
    for &t in &f.thetas {
        assert!((0.0..=std::f64::consts::FRAC_PI_2 + 1e-15).contains(&t));
    }
}

#[test]
fn csd_random_reconstruction() {
    for nb in 1..=5 {
        for s in 0..4 {
            check_csd(&haar_random_unitary(nb, 100 + s).unwrap());
        }
    }
    check_csd(&haar_random_unitary(4, 16).unwrap());
}

#[test]
fn csd_large_dimensions() {
    check_csd(&haar_random_unitary(7, 1).unwrap());
    check_csd(&haar_random_unitary(8, 1).unwrap());
}

/// `(A ⊕ B)·D·(C ⊕ E)` with random unitary blocks and prescribed angles.
fn planted(thetas: &[f64], rng: &mut TestRng) -> Mat {
    let h = thetas.len();
    let l = Mat::direct_sum(&qr_unitary(h, rng), &qr_unitary(h, rng));
    let r = Mat::direct_sum(&qr_unitary(h, rng), &qr_unitary(h, rng));
    &(&l * &forward_d(thetas)) * &r
}

#[test]
fn csd_degenerate_angles() {
    let mut rng = TestRng::new(5);
    let h = std::f64::consts::FRAC_PI_2;
    for thetas in [
        vec![0.0, 0.0, 0.0, 0.0],
        vec![h, h, h, h],
        vec![0.0, h, 0.0, h],
        vec![0.0, 0.4, h, 1e-10],
        vec![h - 1e-10, 0.2, 0.2, 0.0],
    ] {
        let u = planted(&thetas, &mut rng);
        check_csd(&u);
        let mut got = csd(&u).unwrap().thetas;
        let mut want = thetas.clone();
        got.sort_by(f64::total_cmp);
        want.sort_by(f64::total_cmp);
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).abs() < 1e-7, "{got:?} vs {want:?}");
        }
    }
    // Pure swap of halves: all angles π/2.
    let mut swap = Mat::zeros(4, 4);
    swap[(0, 2)] = c(1.0, 0.0);
    swap[(1, 3)] = c(1.0, 0.0);
    swap[(2, 0)] = c(1.0, 0.0);
    swap[(3, 1)] = c(1.0, 0.0);
    check_csd(&swap);
}

#[test]
fn csd_is_deterministic() {
    let u = haar_random_unitary(3, 9).unwrap();
    let (a, b) = (csd(&u).unwrap(), csd(&u).unwrap());
    assert_eq!(a.thetas, b.thetas);
    assert_eq!(a.l0, b.l0);
    assert_eq!(a.r1, b.r1);
}

#[test]
fn csd_errors() {
    let mut m = Mat::identity(4);
    m[(0, 1)] = c(0.5, 0.0);
    assert!(matches!(csd(&m), Err(Error::NotUnitary { residual }) if residual > 0.1));
    assert!(matches!(csd(&Mat::identity(3)), Err(Error::BadDimension(3))));
    assert!(csd(&Mat::identity(1)).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn prop_csd_reconstructs(nb in 1usize..=6, seed in any::<u64>()) {
        let u = haar_random_unitary(nb, seed).unwrap();
        let n = u.rows();
        let f = csd(&u).unwrap();
        prop_assert!(f.reconstruct().dist(&u) <= 1e-10 * n as f64);
        for m in [&f.l0, &f.l1, &f.r0, &f.r1] {
            prop_assert!(is_unitary(m, 1e-10));
        }
    }

    #[test]
    fn prop_normalize_det_roundtrip(nb in 1usize..=4, seed in any::<u64>()) {
        let u = haar_random_unitary(nb, seed).unwrap();
        let (un, ph) = normalize_det(&u);
        prop_assert!((un.det() - c(1.0, 0.0)).norm() < 1e-12);
        prop_assert!(un.scale(cis(ph)).dist(&u) < 1e-13);
        prop_assert!(ph.abs() <= std::f64::consts::PI / u.rows() as f64 + 1e-15);
    }

    #[test]
    fn prop_haar_unitary(nb in 1usize..=6, seed in any::<u64>()) {
        let u = haar_random_unitary(nb, seed).unwrap();
        prop_assert!(is_unitary(&u, 1e-12 * u.rows() as f64));
    }
}
