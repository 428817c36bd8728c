//! Closed-form eigenstates, lowest Landau levels, the ladder pair
//! `Q₁, Q₂†` and the Jaynes–Cummings factorization.
//!
//! The analytic states come in two shapes. Holomorphic states
//! `(z^n, i r z^{n+1})` solve branch I of `H` and branch II of `H̃`;
//! anti-holomorphic states `(γ z̄^{n+1}, i z̄^n)` solve branch II of `H` and
//! branch I of `H̃`. The first-order equation fixes the relative weights:
//! `r = E/((n+1)Xħ)` and `γ = −E/((n+1)Xħ)` with `X = A` or `B` depending on
//! which block carries the derivative. Both stay finite at `E = 0`.

use super::operator::{OperatorExpr, ScalarOp, SpinMatrix};
use super::poly::{SpinorFunction, WeightedPolynomial};
use super::scalar::Scalar;
use super::{build_hamiltonian, lowering_block, raising_block, Couplings, OpalgError};
use crate::params::{Branch, Valley};

enum Shape {
    Holomorphic,
    AntiHolomorphic,
}

/// Energy `+√((n+1)K)` for branch I, `+√(−(n+1)K)` for branch II, in either valley.
pub fn state_energy<S: Scalar>(coeffs: &Couplings<S>, branch: Branch, n: usize) -> S {
    let levels = S::from_i64(n as i64 + 1) * coeffs.k();
    match branch {
        Branch::I => levels.sqrt_real(),
        Branch::II => (-levels).sqrt_real(),
    }
}

/// The `n`-th analytic eigenstate of the given branch and valley, scaled by
/// `a_n`, with its energy attached.
pub fn analytic_state<S: Scalar>(
    branch: Branch,
    valley: Valley,
    n: usize,
    coeffs: &Couplings<S>,
    a_n: S,
) -> Result<SpinorFunction<S>, OpalgError> {
    let d = coeffs.envelope(branch)?;
    let energy = state_energy(coeffs, branch, n);
    let (shape, derivative_coef) = match (branch, valley) {
        (Branch::I, Valley::Primary) => (Shape::Holomorphic, &coeffs.a),
        (Branch::II, Valley::TimeReversed) => (Shape::Holomorphic, &coeffs.b),
        (Branch::II, Valley::Primary) => (Shape::AntiHolomorphic, &coeffs.b),
        (Branch::I, Valley::TimeReversed) => (Shape::AntiHolomorphic, &coeffs.a),
    };
    let ratio = energy.clone() / (S::from_i64(n as i64 + 1) * derivative_coef.clone() * coeffs.hbar.clone());
    let n = n as u32;
    let i = S::imag_unit();
    let (upper, lower) = match shape {
        Shape::Holomorphic => (
            WeightedPolynomial::monomial(n, 0, a_n.clone(), d.clone()),
            WeightedPolynomial::monomial(n + 1, 0, i * ratio * a_n, d),
        ),
        Shape::AntiHolomorphic => (
            WeightedPolynomial::monomial(0, n + 1, -(ratio * a_n.clone()), d.clone()),
            WeightedPolynomial::monomial(0, n, i * a_n, d),
        ),
    };
    Ok(SpinorFunction::new(upper, lower)?.with_energy(energy))
}

/// `max |coeff(Hs − Es)|`.
pub fn eigen_residual<S: Scalar>(h: &OperatorExpr<S>, s: &SpinorFunction<S>, e: &S) -> f64 {
    h.apply(s).sub(&s.scale(e)).max_abs()
}

/// `max |coeff((H² − E²)s)|`: the second-order (reduced) equations.
pub fn reduced_equation_residual<S: Scalar>(h: &OperatorExpr<S>, s: &SpinorFunction<S>, e: &S) -> f64 {
    let e2 = e.clone() * e.clone();
    h.apply(&h.apply(s)).sub(&s.scale(&e2)).max_abs()
}

/// The block that annihilates the lowest Landau level: `AΠ_z + iC₁z̄` for
/// `H`, `BΠ_z + iC₂z̄` for `H̃`.
pub fn annihilator<S: Scalar>(coeffs: &Couplings<S>, valley: Valley) -> ScalarOp<S> {
    lowering_block(&coeffs.for_valley(valley))
}

/// `z̄^l e^{(C₁/Aħ) z z̄}` (primary) or `z̄^l e^{(C₂/Bħ) z z̄}` (time-reversed).
pub fn lll_state<S: Scalar>(l: u32, coeffs: &Couplings<S>, valley: Valley) -> Result<WeightedPolynomial<S>, OpalgError> {
    let branch = match valley {
        Valley::Primary => Branch::I,
        Valley::TimeReversed => Branch::II,
    };
    let d = coeffs.envelope(branch)?;
    Ok(WeightedPolynomial::monomial(0, l, S::one(), d))
}

pub fn lll_annihilation_residual<S: Scalar>(l: u32, coeffs: &Couplings<S>, valley: Valley) -> Result<f64, OpalgError> {
    let chi = lll_state(l, coeffs, valley)?;
    Ok(annihilator(coeffs, valley).apply(&chi).max_abs())
}

fn inverse_sqrt_k<S: Scalar>(coeffs: &Couplings<S>) -> Result<(S, S), OpalgError> {
    let k = coeffs.k();
    if k.is_zero() {
        return Err(OpalgError::ZeroK);
    }
    let root = k.sqrt_real();
    Ok((root.clone(), S::one() / root))
}

/// `(Q₁, Q₂†)` with `Q₁ = (AΠ_z + iC₁z̄)/√K`, `Q₂† = (BΠ_z̄ + iC₂z)/√K` and
/// `√K` on the principal branch (`+i√|K|` for `K < 0`).
pub fn ladder_operators<S: Scalar>(coeffs: &Couplings<S>, valley: Valley) -> Result<(ScalarOp<S>, ScalarOp<S>), OpalgError> {
    let (_, inv) = inverse_sqrt_k(&coeffs.for_valley(valley))?;
    let k = coeffs.for_valley(valley);
    Ok((lowering_block(&k).scale(&inv), raising_block(&k).scale(&inv)))
}

/// Applies `Q₂†` of the primary valley `times` times.
pub fn ladder_raise<S: Scalar>(
    s: &WeightedPolynomial<S>,
    times: usize,
    coeffs: &Couplings<S>,
) -> Result<WeightedPolynomial<S>, OpalgError> {
    let (_, q2_dag) = ladder_operators(coeffs, Valley::Primary)?;
    Ok((0..times).fold(s.clone(), |acc, _| q2_dag.apply(&acc)))
}

/// `√K (σ₊Q₁ + σ₋Q₂†)` with `σ₊ = [[0,1],[0,0]]`, `σ₋ = [[0,0],[1,0]]`.
pub fn jc_hamiltonian<S: Scalar>(coeffs: &Couplings<S>, valley: Valley) -> Result<OperatorExpr<S>, OpalgError> {
    let (root, _) = inverse_sqrt_k(&coeffs.for_valley(valley))?;
    let (q1, q2_dag) = ladder_operators(coeffs, valley)?;
    let (o, l) = (S::zero(), S::one());
    let sigma_plus: SpinMatrix<S> = [[o.clone(), l.clone()], [o.clone(), o.clone()]];
    let sigma_minus: SpinMatrix<S> = [[o.clone(), o.clone()], [l, o]];
    Ok(OperatorExpr::kron(&sigma_plus, &q1)
        .add(&OperatorExpr::kron(&sigma_minus, &q2_dag))
        .scale(&root))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JcReport {
    /// `max ‖([Q₁,Q₂†] − 1) f‖ / max(1, ‖Q₁Q₂† f‖)` over the probes.
    pub commutator_residual: f64,
    /// `max ‖(H − √K(σ₊Q₁ + σ₋Q₂†)) ψ‖ / max(1, ‖Hψ‖)` over the probes.
    pub factorization_residual: f64,
}

/// Checks the pseudo-bosonic commutator and the JC factorization of the
/// primary Hamiltonian on every monomial `z^m z̄^n` with `m + n ≤ degree`.
pub fn jc_verify<S: Scalar>(coeffs: &Couplings<S>, degree: u32) -> Result<JcReport, OpalgError> {
    let (q1, q2_dag) = ladder_operators(coeffs, Valley::Primary)?;
    let h = build_hamiltonian(coeffs, Valley::Primary);
    let jc = jc_hamiltonian(coeffs, Valley::Primary)?;
    let envelope = coeffs.envelope(Branch::I).unwrap_or_else(|_| S::zero());
    let mut report = JcReport {
        commutator_residual: 0.0,
        factorization_residual: 0.0,
    };
    for deg in 0..=degree {
        for m in 0..=deg {
            let f = WeightedPolynomial::monomial(m, deg - m, S::one(), envelope.clone());
            let forward = q1.apply(&q2_dag.apply(&f));
            let backward = q2_dag.apply(&q1.apply(&f));
            let residual = (&(&forward - &backward) - &f).max_abs() / forward.max_abs().max(1.0);
            report.commutator_residual = report.commutator_residual.max(residual);

            let zero = WeightedPolynomial::zero(envelope.clone());
            for probe in [
                SpinorFunction::new(f.clone(), zero.clone())?,
                SpinorFunction::new(zero, f.clone())?,
            ] {
                let hp = h.apply(&probe);
                let residual = hp.sub(&jc.apply(&probe)).max_abs() / hp.max_abs().max(1.0);
                report.factorization_residual = report.factorization_residual.max(residual);
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opalg::{pt_eigenfactor, Exact, PtKind};
    use crate::params::{derive_coeffs, PhysParams};
    use num::complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn couplings(lambda: f64) -> Couplings<Complex64> {
        Couplings::from(&derive_coeffs(&PhysParams::reference(lambda)))
    }

    #[test]
    fn ground_states_have_expected_shape() {
        let k = couplings(0.5);
        let d1 = k.envelope(Branch::I).unwrap();
        let s = analytic_state(Branch::I, Valley::Primary, 0, &k, c(1.0, 0.0)).unwrap();
        assert_eq!(s.upper, WeightedPolynomial::monomial(0, 0, c(1.0, 0.0), d1));
        assert_eq!(s.lower.n_terms(), 1);
        assert!(s.lower.coeff(1, 0).re.abs() < 1e-15 && s.lower.coeff(1, 0).im > 0.0);

        let s2 = analytic_state(Branch::II, Valley::Primary, 0, &k, c(1.0, 0.0)).unwrap();
        let d2 = k.envelope(Branch::II).unwrap();
        assert_eq!(s2.lower, WeightedPolynomial::monomial(0, 0, c(0.0, 1.0), d2));
        assert_eq!(s2.upper.terms().map(|(k, _)| *k).collect::<Vec<_>>(), vec![(0, 1)]);

        let t = analytic_state(Branch::I, Valley::TimeReversed, 0, &k, c(1.0, 0.0)).unwrap();
        assert_eq!(t.envelope(), &d1);
        assert_eq!(t.lower, WeightedPolynomial::monomial(0, 0, c(0.0, 1.0), d1));
        assert_eq!(t.upper.terms().map(|(k, _)| *k).collect::<Vec<_>>(), vec![(0, 1)]);
    }

    #[test]
    fn eigen_equations_hold() {
        for lambda in [0.0, 0.5, 1.8] {
            let k = couplings(lambda);
            for valley in [Valley::Primary, Valley::TimeReversed] {
                let h = build_hamiltonian(&k, valley);
                for branch in [Branch::I, Branch::II] {
                    for n in 0..=10 {
                        let s = analytic_state(branch, valley, n, &k, c(1.0, 0.0)).unwrap();
                        let e = s.energy.unwrap();
                        assert!(eigen_residual(&h, &s, &e) <= 1e-12, "{lambda} {valley:?} {branch:?} {n}");
                        assert!(reduced_equation_residual(&h, &s, &e) <= 1e-11);
                    }
                }
            }
        }
    }

    #[test]
    fn wrong_energy_leaves_residual() {
        let k = couplings(0.5);
        let h = build_hamiltonian(&k, Valley::Primary);
        let s = analytic_state(Branch::I, Valley::Primary, 0, &k, c(1.0, 0.0)).unwrap();
        let e0 = s.energy.unwrap();
        let r = eigen_residual(&h, &s, &(e0 + c(0.25, 0.0)));
        assert!((r - 0.25 * s.max_abs()).abs() < 1e-12);
    }

    #[test]
    fn negative_energy_partner() {
        let k = couplings(0.5);
        let h = build_hamiltonian(&k, Valley::Primary);
        let s = analytic_state(Branch::I, Valley::Primary, 3, &k, c(1.0, 0.0)).unwrap();
        let e = s.energy.unwrap();
        let partner = SpinorFunction::new(s.upper.clone(), s.lower.scale(&c(-1.0, 0.0))).unwrap();
        assert!(eigen_residual(&h, &partner, &(-e)) <= 1e-12);
    }

    #[test]
    fn exact_mode_gives_literal_zero() {
        let k = Couplings::<Exact>::from_params(&PhysParams::reference(0.5));
        for valley in [Valley::Primary, Valley::TimeReversed] {
            let h = build_hamiltonian(&k, valley);
            for branch in [Branch::I, Branch::II] {
                for n in 0..=4 {
                    let s = analytic_state(branch, valley, n, &k, Exact::one()).unwrap();
                    assert_eq!(eigen_residual(&h, &s, s.energy.as_ref().unwrap()), 0.0);
                }
            }
        }
    }

    #[test]
    fn critical_point_state_stays_pt_eigenstate() {
        let mut p = PhysParams::reference(0.0);
        p.b0 = 5.48;
        let mut k = Couplings::<Complex64>::from(&derive_coeffs(&p));
        // force K = 0 exactly: C₂ = B C₁ / A
        k.c2 = k.b * k.c1 / k.a;
        assert!(k.k().norm() == 0.0);
        let s = analytic_state(Branch::I, Valley::Primary, 0, &k, c(1.0, 0.0)).unwrap();
        assert!(s.lower.is_zero());
        assert_eq!(pt_eigenfactor(PtKind::P1T, &s).unwrap(), Some(c(0.0, 1.0)));
    }

    #[test]
    fn lll_is_annihilated() {
        let k = couplings(0.5);
        for valley in [Valley::Primary, Valley::TimeReversed] {
            for l in 0..=20 {
                assert!(lll_annihilation_residual(l, &k, valley).unwrap() <= 1e-15);
            }
        }
        let exact = Couplings::<Exact>::from_params(&PhysParams::reference(0.5));
        for l in 0..=20 {
            assert_eq!(lll_annihilation_residual(l, &exact, Valley::Primary).unwrap(), 0.0);
        }
    }

    #[test]
    fn raising_the_gaussian() {
        let k = couplings(0.5);
        let chi0 = lll_state(0, &k, Valley::Primary).unwrap();
        let raised = ladder_raise(&chi0, 1, &k).unwrap();
        assert_eq!(raised.terms().map(|(k, _)| *k).collect::<Vec<_>>(), vec![(1, 0)]);
        let (q1, _) = ladder_operators(&k, Valley::Primary).unwrap();
        let back = q1.apply(&raised);
        assert!((&back - &chi0).max_abs() < 1e-14);
        // degeneracy label: every monomial of Q₂†^k z̄^l has m − n = k − l
        for l in 0..6u32 {
            let chi = lll_state(l, &k, Valley::Primary).unwrap();
            for times in 1..4u32 {
                let r = ladder_raise(&chi, times as usize, &k).unwrap();
                assert!(!r.is_zero());
                assert!(r.terms().all(|(&(m, n), _)| m as i64 - n as i64 == times as i64 - l as i64));
                assert!(r.coeff(times, l).norm() > 0.0);
            }
        }
    }

    #[test]
    fn raising_reaches_branch_one_lower_components() {
        let k = couplings(0.5);
        let chi0 = lll_state(0, &k, Valley::Primary).unwrap();
        for times in 1..6usize {
            let r = ladder_raise(&chi0, times, &k).unwrap();
            let s = analytic_state(Branch::I, Valley::Primary, times - 1, &k, c(1.0, 0.0)).unwrap();
            let pattern = |p: &WeightedPolynomial<Complex64>| p.terms().map(|(k, _)| *k).collect::<Vec<_>>();
            assert_eq!(pattern(&r), pattern(&s.lower));
        }
    }

    #[test]
    fn zero_k_rejected_by_ladder() {
        let mut k = couplings(0.0);
        k.c2 = k.b * k.c1 / k.a;
        assert_eq!(ladder_raise(&WeightedPolynomial::zero(c(0.0, 0.0)), 1, &k), Err(OpalgError::ZeroK));
        assert_eq!(jc_verify(&k, 3), Err(OpalgError::ZeroK));
    }

    #[test]
    fn jc_residuals_vanish() {
        for lambda in [0.5, 1.8] {
            let report = jc_verify(&couplings(lambda), 12).unwrap();
            assert!(report.commutator_residual <= 1e-12, "{report:?}");
            assert!(report.factorization_residual <= 1e-12, "{report:?}");
        }
    }

    #[test]
    fn jc_exact() {
        let k = Couplings::<Exact>::from_params(&PhysParams::reference(0.5));
        let report = jc_verify(&k, 4).unwrap();
        assert_eq!(report.commutator_residual, 0.0);
        assert_eq!(report.factorization_residual, 0.0);
    }

    #[test]
    fn real_rashba_ladder_pair_is_adjoint() {
        // λ(σ×Π)·ẑ with a real coupling corresponds to λ → −iλ_r in the
        // compact coefficients; then Q₂† is the formal adjoint of Q₁.
        let p = PhysParams::reference(0.0);
        let lr = 0.4;
        let v = c(p.v_f, 0.0);
        let l = c(0.0, -lr);
        let field = c(p.b0 * p.e / (2.0 * p.c), 0.0);
        let kv = c(p.k1 * p.v_f, 0.0);
        let k = Couplings {
            a: (v - l) * 2.0,
            b: (v + l) * 2.0,
            c1: kv - (v - l) * field,
            c2: -kv + (v + l) * field,
            hbar: c(1.0, 0.0),
        };
        assert!(k.k().im.abs() < 1e-15 && k.k().re > 0.0);
        let (q1, q2_dag) = ladder_operators(&k, Valley::Primary).unwrap();
        assert!(q1.adjoint().distance(&q2_dag) < 1e-15);
        // standard bosonic pair: [a, a†] = 1
        let comm = q1.compose(&q2_dag).sub(&q2_dag.compose(&q1));
        assert!(comm.distance(&ScalarOp::identity()) < 1e-14);
    }
}
