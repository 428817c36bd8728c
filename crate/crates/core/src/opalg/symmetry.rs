//! Antilinear symmetries: `P₁T`, `P₂T` and time reversal `T = iσ_y K̃`.
//!
//! With `P₁ψ(x,y) = σ_y ψ(−x,y)`, `P₂ψ(x,y) = σ_x ψ(x,−y)` and complex
//! conjugation, the net action on a monomial `c z^m z̄^n` is
//!
//! | op    | coefficient          | monomial      | spin factor      |
//! |-------|----------------------|---------------|------------------|
//! | `P₁T` | `c̄ (−1)^{m+n}`       | `z^m z̄^n`     | `σ_y·iσ_y = i`   |
//! | `P₂T` | `c̄`                  | `z^m z̄^n`     | `σ_x·iσ_y = −σ_z`|
//! | `T`   | `c̄`                  | `z^n z̄^m`     | `iσ_y`           |
//!
//! Squares: `(P₁T)² = (P₂T)² = +1`, `T² = −1`.

use super::operator::{sigma_x, sigma_y, spin_mul, spin_scale, OperatorExpr, SpinMatrix};
use super::poly::{SpinorFunction, WeightedPolynomial};
use super::scalar::Scalar;
use super::OpalgError;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PtKind {
    P1T,
    P2T,
    T,
}

/// Net coordinate action of an antilinear operator after conjugation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoordinateMap {
    /// `z → −z`.
    Negate,
    Identity,
    /// `z ↔ z̄`.
    Swap,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AntilinearOp<S> {
    pub spin: SpinMatrix<S>,
    pub map: CoordinateMap,
}

impl<S: Scalar> AntilinearOp<S> {
    pub fn new(kind: PtKind) -> Self {
        let i_sigma_y = spin_scale(&sigma_y(), &S::imag_unit());
        match kind {
            PtKind::P1T => Self {
                spin: spin_mul(&sigma_y(), &i_sigma_y),
                map: CoordinateMap::Negate,
            },
            PtKind::P2T => Self {
                spin: spin_mul(&sigma_x(), &i_sigma_y),
                map: CoordinateMap::Identity,
            },
            PtKind::T => Self {
                spin: i_sigma_y,
                map: CoordinateMap::Swap,
            },
        }
    }

    fn transform_component(&self, p: &WeightedPolynomial<S>) -> WeightedPolynomial<S> {
        p.map_terms(p.envelope().conj(), |m, n, c| {
            let c = c.conj();
            match self.map {
                CoordinateMap::Negate if (m + n) % 2 == 1 => ((m, n), -c),
                CoordinateMap::Negate | CoordinateMap::Identity => ((m, n), c),
                CoordinateMap::Swap => ((n, m), c),
            }
        })
    }

    /// Antilinear action; energy metadata maps to its conjugate.
    pub fn apply(&self, s: &SpinorFunction<S>) -> SpinorFunction<S> {
        let u = self.transform_component(&s.upper);
        let l = self.transform_component(&s.lower);
        let row = |i: usize| &u.scale(&self.spin[i][0]) + &l.scale(&self.spin[i][1]);
        SpinorFunction {
            upper: row(0),
            lower: row(1),
            energy: s.energy.as_ref().map(S::conj),
        }
    }
}

pub fn pt_transform<S: Scalar>(which: PtKind, s: &SpinorFunction<S>) -> SpinorFunction<S> {
    AntilinearOp::new(which).apply(s)
}

/// The factor `c` with `PT s = c s`, or `None` when `s` is not an eigenstate.
/// Float comparison uses a relative coefficient tolerance of `1e−10`.
pub fn pt_eigenfactor<S: Scalar>(which: PtKind, s: &SpinorFunction<S>) -> Result<Option<S>, OpalgError> {
    if s.is_zero() {
        return Err(OpalgError::ZeroSpinor);
    }
    let t = pt_transform(which, s);
    if t.envelope() != s.envelope() {
        return Ok(None);
    }
    let pivot = [&s.upper, &s.lower]
        .into_iter()
        .flat_map(|p| p.terms().map(move |(&(m, n), c)| (std::ptr::eq(p, &s.upper), m, n, c.clone())))
        .max_by(|a, b| a.3.magnitude().total_cmp(&b.3.magnitude()))
        .expect("nonzero spinor");
    let (is_upper, m, n, c) = pivot;
    let image = if is_upper { t.upper.coeff(m, n) } else { t.lower.coeff(m, n) };
    let factor = image / c;
    let residual = t.sub(&s.scale(&factor)).max_abs();
    Ok((residual <= 1e-10 * s.max_abs()).then_some(factor))
}

/// `max_probe ‖(PT·H − H·PT) probe‖`.
pub fn pt_commutator_residual<S: Scalar>(h: &OperatorExpr<S>, which: PtKind, probes: &[SpinorFunction<S>]) -> f64 {
    let op = AntilinearOp::new(which);
    probes
        .iter()
        .map(|p| op.apply(&h.apply(p)).sub(&h.apply(&op.apply(p))).max_abs())
        .fold(0.0, f64::max)
}

/// `T H T⁻¹` computed symbolically: conjugate every coefficient, swap
/// `z ↔ z̄`, then conjugate the spin structure by `iσ_y`.
pub fn time_reversal_conjugate<S: Scalar>(h: &OperatorExpr<S>) -> OperatorExpr<S> {
    let i_sigma_y = spin_scale(&sigma_y(), &S::imag_unit());
    h.complex_conjugate().spin_conjugated(&i_sigma_y)
}

/// Probe set for operator identities: every monomial `z^m z̄^n` with
/// `m + n ≤ 6` in each spin component, plus `n_random` spinors with
/// seeded random coefficients up to degree 4.
pub fn standard_probes(envelope: f64, n_random: usize, seed: u64) -> Vec<SpinorFunction<num::complex::Complex64>> {
    use num::complex::Complex64;
    let d = Complex64::new(envelope, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let mut probes = Vec::new();
    for deg in 0..=6u32 {
        for m in 0..=deg {
            let mono = WeightedPolynomial::monomial(m, deg - m, one, d);
            probes.push(SpinorFunction::new(mono.clone(), WeightedPolynomial::zero(d)).unwrap());
            probes.push(SpinorFunction::new(WeightedPolynomial::zero(d), mono).unwrap());
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let random_poly = |rng: &mut ChaCha8Rng| {
        let mut p = WeightedPolynomial::zero(d);
        for m in 0..=4u32 {
            for n in 0..=(4 - m) {
                p.add_term(m, n, Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
            }
        }
        p
    };
    for _ in 0..n_random {
        let u = random_poly(&mut rng);
        let l = random_poly(&mut rng);
        probes.push(SpinorFunction::new(u, l).unwrap());
    }
    probes
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opalg::{build_hamiltonian, hamiltonian, Couplings, Primitive, ScalarOp};
    use crate::params::{derive_coeffs, PhysParams, Valley};
    use num::complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn spin_factors_are_literal_products() {
        let p1 = AntilinearOp::<Complex64>::new(PtKind::P1T);
        assert_eq!(p1.spin, [[c(0.0, 1.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.0, 1.0)]]);
        let p2 = AntilinearOp::<Complex64>::new(PtKind::P2T);
        assert_eq!(p2.spin, [[c(-1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]]);
    }

    #[test]
    fn squares_of_antilinear_maps() {
        let probes = standard_probes(-0.2, 10, 7);
        for (kind, sign) in [(PtKind::P1T, 1.0), (PtKind::P2T, 1.0), (PtKind::T, -1.0)] {
            for p in &probes {
                let twice = pt_transform(kind, &pt_transform(kind, p));
                assert!(twice.sub(&p.scale(&c(sign, 0.0))).max_abs() == 0.0, "{kind:?}");
            }
        }
    }

    #[test]
    fn antilinearity() {
        let probes = standard_probes(-0.2, 4, 11);
        let (a, b) = (c(0.3, -1.2), c(-0.7, 0.4));
        let (x, y) = (&probes[probes.len() - 1], &probes[probes.len() - 2]);
        for kind in [PtKind::P1T, PtKind::P2T, PtKind::T] {
            let lhs = pt_transform(kind, &x.scale(&a).try_add(&y.scale(&b)).unwrap());
            let rhs = pt_transform(kind, x)
                .scale(&a.conj())
                .try_add(&pt_transform(kind, y).scale(&b.conj()))
                .unwrap();
            assert!(lhs.sub(&rhs).max_abs() < 1e-15);
        }
    }

    #[test]
    fn hamiltonians_commute_with_both_pt() {
        let d = derive_coeffs(&PhysParams::reference(0.5));
        let probes = standard_probes(d.d1_branch_i.unwrap(), 50, 1);
        for valley in [Valley::Primary, Valley::TimeReversed] {
            let h = hamiltonian(&d, valley);
            for kind in [PtKind::P1T, PtKind::P2T] {
                assert!(pt_commutator_residual(&h, kind, &probes) <= 1e-12);
            }
            // H is not T-invariant: T maps it to the other valley
            assert!(pt_commutator_residual(&h, PtKind::T, &probes) > 1e-3);
        }
    }

    #[test]
    fn real_z_term_breaks_pt() {
        let d = derive_coeffs(&PhysParams::reference(0.5));
        let perturbation = OperatorExpr::off_diagonal(ScalarOp::prim(Primitive::Z).scale(&c(0.1, 0.0)), ScalarOp::zero());
        let h = hamiltonian(&d, Valley::Primary).add(&perturbation);
        let probes = standard_probes(-0.1, 5, 3);
        assert!(pt_commutator_residual(&h, PtKind::P1T, &probes) > 1e-3);
    }

    #[test]
    fn time_reversal_gives_other_valley() {
        let d = derive_coeffs(&PhysParams::reference(0.5));
        let h = hamiltonian(&d, Valley::Primary);
        let tilde = hamiltonian(&d, Valley::TimeReversed);
        let thti = time_reversal_conjugate(&h);
        assert!(thti.distance(&tilde) == 0.0);
        let probes = standard_probes(-0.3, 50, 5);
        for p in &probes {
            assert!(thti.apply(p).sub(&tilde.apply(p)).max_abs() <= 1e-12);
        }
    }

    #[test]
    fn time_reversal_exact() {
        let k = Couplings::<crate::opalg::Exact>::from_params(&PhysParams::reference(0.9));
        let h = build_hamiltonian(&k, Valley::Primary);
        assert_eq!(time_reversal_conjugate(&h).distance(&build_hamiltonian(&k, Valley::TimeReversed)), 0.0);
    }

    #[test]
    fn eigenfactor_of_zero_spinor_is_error() {
        let z = SpinorFunction::<Complex64>::zero(c(-1.0, 0.0));
        assert_eq!(pt_eigenfactor(PtKind::P1T, &z), Err(OpalgError::ZeroSpinor));
    }

    #[test]
    fn probe_set_shape() {
        let probes = standard_probes(-0.5, 50, 1);
        // 28 monomials of degree ≤ 6 in two components
        assert_eq!(probes.len(), 56 + 50);
        assert_eq!(standard_probes(-0.5, 50, 1), probes);
    }
}
