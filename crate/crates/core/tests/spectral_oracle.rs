mod common;

use common::{random_params, rng, worst_relative_error};
use num::complex::Complex64;
use ptdirac::params::{classify_phase, derive_coeffs, level_energy, Branch, PhaseVerdict, PhysParams, Valley};
use ptdirac::spectral::{
    build_truncated, classify_spectrum, eigensolve, scramble, ClassifyOptions, Spectrum, TruncatedRep,
    CERTIFICATE_TOL,
};

fn solve(rep: &TruncatedRep) -> Spectrum {
    eigensolve(&rep.matrix, CERTIFICATE_TOL).unwrap()
}

fn ladder(p: &PhysParams, levels: usize, branch: Branch) -> Vec<Complex64> {
    (0..levels)
        .flat_map(|n| {
            let (a, b) = level_energy(p, n, branch);
            [a, b]
        })
        .collect()
}

#[test]
fn scrambled_reference_point_reproduces_lowest_ten_pairs() {
    let p = PhysParams::reference(0.5);
    let rep = build_truncated(&derive_coeffs(&p), 40, Branch::I, Valley::Primary).unwrap();
    let s = solve(&scramble(&rep, 17).unwrap());
    let err = worst_relative_error(&s.values, &ladder(&p, 10, Branch::I));
    assert!(err <= 1e-8, "{err:e}");
}

#[test]
fn similarity_invariance_across_seeds() {
    let p = PhysParams::reference(1.8);
    let rep = build_truncated(&derive_coeffs(&p), 30, Branch::I, Valley::Primary).unwrap();
    let reference = solve(&rep);
    let retained = |s: &Spectrum| {
        classify_spectrum(s, &ClassifyOptions::for_rep(&rep)).unwrap().retained
    };
    let base = retained(&reference);
    for seed in [1, 2, 3] {
        let other = retained(&solve(&scramble(&rep, seed).unwrap()));
        assert!(worst_relative_error(&other, &base) <= 1e-9);
        assert!(worst_relative_error(&base, &other) <= 1e-9);
    }
}

#[test]
fn random_draws_agree_with_closed_form() {
    let mut r = rng(2024);
    let mut worst: f64 = 0.0;
    for i in 0..100 {
        let p = random_params(&mut r);
        let branch = if i % 2 == 0 { Branch::I } else { Branch::II };
        let valley = if i % 3 == 0 { Valley::TimeReversed } else { Valley::Primary };
        let rep = build_truncated(&derive_coeffs(&p), 40, branch, valley).unwrap();
        let scrambled = scramble(&rep, i).unwrap();
        let s = solve(&scrambled);
        let report = classify_spectrum(&s, &ClassifyOptions::for_rep(&rep)).unwrap();
        // retained levels are n = 0..=n_tr−3
        let expected = ladder(&p, 38, branch);
        assert_eq!(report.retained.len(), expected.len());
        worst = worst.max(worst_relative_error(&report.retained, &expected));
        assert_eq!(report.verdict, classify_phase(&p, branch, p.default_tolerance()), "{p:?}");
        assert!(report.unpaired.is_empty());
    }
    println!("worst relative error over 100 draws: {worst:e}");
    assert!(worst <= 1e-8, "{worst:e}");
}

#[test]
fn broken_phase_gives_conjugate_imaginary_pairs() {
    let p = PhysParams::reference(1.8);
    let rep = build_truncated(&derive_coeffs(&p), 40, Branch::I, Valley::Primary).unwrap();
    let report = classify_spectrum(&solve(&scramble(&rep, 5).unwrap()), &ClassifyOptions::for_rep(&rep)).unwrap();
    assert_eq!(report.verdict, PhaseVerdict::Broken);
    assert_eq!(report.pairs.len(), 38);
    for (plus, minus) in &report.pairs {
        assert!((plus + minus).norm() <= 1e-8 * rep.scale);
        assert!(plus.re.abs() <= 1e-8 * rep.scale && plus.im > 0.0);
    }
}

#[test]
fn retained_levels_are_exact_for_every_truncation() {
    // The ladder splits into independent 2×2 blocks, so cutting it only
    // moves the top level to zero; nothing below it is contaminated.
    let p = PhysParams::reference(0.5);
    for n_tr in [10, 20, 40, 80] {
        let rep = build_truncated(&derive_coeffs(&p), n_tr, Branch::I, Valley::Primary).unwrap();
        let s = solve(&rep);
        let report = classify_spectrum(&s, &ClassifyOptions::for_rep(&rep)).unwrap();
        let err = worst_relative_error(&report.retained, &ladder(&p, n_tr - 2, Branch::I));
        assert!(err <= 1e-12, "n_tr = {n_tr}: {err:e}");
        let zeros = s.values.iter().filter(|e| e.norm() <= 1e-12 * rep.scale).count();
        assert_eq!(zeros, 2, "n_tr = {n_tr}");
    }
}
