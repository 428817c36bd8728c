//! Exact operator algebra on polynomial × Gaussian spinors.
//!
//! The Hamiltonian of either valley is an [`OperatorExpr`] built from the
//! compact coefficients `A, B, C₁, C₂`; applying it to a [`SpinorFunction`]
//! is closed-form, so eigen-equations, symmetry relations and ladder
//! identities are checked coefficient by coefficient.
//!
//! Derivation note: the mass-like matrix `β` of the oscillator coupling is
//! `σ_z`. That is the only choice for which the component Hamiltonian
//! reduces to the off-diagonal blocks `AΠ_z + iC₁z̄` and `BΠ_z̄ + iC₂z`.
//!
//! All routines are generic over [`Scalar`]: [`num::complex::Complex64`] for
//! ordinary work and [`Exact`] when residuals must vanish identically.

pub mod operator;
pub mod poly;
pub mod scalar;
pub mod states;
pub mod symmetry;

pub use operator::{OperatorExpr, Primitive, ScalarOp, SpinMatrix};
pub use poly::{SpinorFunction, WeightedPolynomial};
pub use scalar::{Exact, Scalar};
pub use states::{
    analytic_state, annihilator, eigen_residual, jc_hamiltonian, jc_verify, ladder_operators, ladder_raise,
    lll_annihilation_residual, lll_state, reduced_equation_residual, JcReport,
};
pub use symmetry::{
    pt_commutator_residual, pt_eigenfactor, pt_transform, standard_probes, time_reversal_conjugate, AntilinearOp,
    CoordinateMap, PtKind,
};

use crate::params::{Branch, DerivedCoeffs, PhysParams, Valley};
use num::complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OpalgError {
    #[error("envelope exponents differ")]
    EnvelopeMismatch,
    #[error("Gaussian exponent of branch {0:?} is undefined ({1} = 0)")]
    UndefinedEnvelope(Branch, &'static str),
    #[error("K = 0: the ladder normalization √K is undefined")]
    ZeroK,
    #[error("zero spinor has no eigenfactor")]
    ZeroSpinor,
    #[error("parse error: {0}")]
    Parse(String),
}

/// Coefficients of the compact Hamiltonian in a chosen scalar field.
#[derive(Debug, Clone, PartialEq)]
pub struct Couplings<S> {
    pub a: S,
    pub b: S,
    pub c1: S,
    pub c2: S,
    pub hbar: S,
}

impl<S: Scalar> Couplings<S> {
    /// `K = (A C₂ − B C₁) ħ`.
    pub fn k(&self) -> S {
        (self.a.clone() * self.c2.clone() - self.b.clone() * self.c1.clone()) * self.hbar.clone()
    }

    /// Envelope exponent `C₁/(Aħ)` (branch I) or `C₂/(Bħ)` (branch II).
    pub fn envelope(&self, branch: Branch) -> Result<S, OpalgError> {
        let (num, den, name) = match branch {
            Branch::I => (&self.c1, &self.a, "A"),
            Branch::II => (&self.c2, &self.b, "B"),
        };
        if den.is_zero() {
            return Err(OpalgError::UndefinedEnvelope(branch, name));
        }
        Ok(num.clone() / (den.clone() * self.hbar.clone()))
    }

    /// `A ↔ B`, `C₁ ↔ C₂`.
    pub fn swap_valleys(&self) -> Self {
        Self {
            a: self.b.clone(),
            b: self.a.clone(),
            c1: self.c2.clone(),
            c2: self.c1.clone(),
            hbar: self.hbar.clone(),
        }
    }

    /// Couplings as seen by the given valley: the time-reversed valley is the
    /// primary form with `A ↔ B`, `C₁ ↔ C₂`.
    pub fn for_valley(&self, valley: Valley) -> Self {
        match valley {
            Valley::Primary => self.clone(),
            Valley::TimeReversed => self.swap_valleys(),
        }
    }

    /// Builds the coefficients from physical parameters inside the field `S`.
    /// With [`Exact`] every float input is taken at its exact binary value.
    pub fn from_params(p: &PhysParams) -> Self {
        let f = S::from_f64;
        let two = S::from_i64(2);
        let (v, l) = (f(p.v_f), f(p.lambda));
        let field = f(p.b0) * f(p.e) / (two.clone() * f(p.c));
        let kv = f(p.k1) * v.clone();
        Self {
            a: two.clone() * (v.clone() - l.clone()),
            b: two * (v.clone() + l.clone()),
            c1: kv.clone() - (v.clone() - l.clone()) * field.clone(),
            c2: -kv + (v + l) * field,
            hbar: f(p.hbar),
        }
    }
}

impl From<&DerivedCoeffs> for Couplings<Complex64> {
    fn from(d: &DerivedCoeffs) -> Self {
        let c = |x: f64| Complex64::new(x, 0.0);
        Self {
            a: c(d.a_coef),
            b: c(d.b_coef),
            c1: c(d.c1),
            c2: c(d.c2),
            hbar: c(d.hbar),
        }
    }
}

/// Upper-right block `AΠ_z + iC₁z̄` of the primary Hamiltonian (and, after
/// the valley swap, `BΠ_z + iC₂z̄` of `H̃`).
pub(crate) fn lowering_block<S: Scalar>(k: &Couplings<S>) -> ScalarOp<S> {
    ScalarOp::pi_z(k.hbar.clone())
        .scale(&k.a)
        .add(&ScalarOp::prim(Primitive::Zbar).scale(&(S::imag_unit() * k.c1.clone())))
}

/// Lower-left block `BΠ_z̄ + iC₂z` of the primary Hamiltonian.
pub(crate) fn raising_block<S: Scalar>(k: &Couplings<S>) -> ScalarOp<S> {
    ScalarOp::pi_zbar(k.hbar.clone())
        .scale(&k.b)
        .add(&ScalarOp::prim(Primitive::Z).scale(&(S::imag_unit() * k.c2.clone())))
}

/// `H = [[0, AΠ_z + iC₁z̄], [BΠ_z̄ + iC₂z, 0]]`, or for the time-reversed valley
/// `H̃ = [[0, BΠ_z + iC₂z̄], [AΠ_z̄ + iC₁z, 0]]`.
pub fn build_hamiltonian<S: Scalar>(coeffs: &Couplings<S>, valley: Valley) -> OperatorExpr<S> {
    let k = coeffs.for_valley(valley);
    OperatorExpr::off_diagonal(lowering_block(&k), raising_block(&k))
}

/// Convenience wrapper for float coefficients.
pub fn hamiltonian(coeffs: &DerivedCoeffs, valley: Valley) -> OperatorExpr<Complex64> {
    build_hamiltonian(&Couplings::from(coeffs), valley)
}

/// Adjoint under the flat measure.
pub fn formal_adjoint<S: Scalar>(expr: &OperatorExpr<S>) -> OperatorExpr<S> {
    expr.formal_adjoint()
}

/// `H` written from the component form, `v_f(σ·Π) − iK₁v_f(σ·r)σ_z + iλ(σ_xΠ_y − σ_yΠ_x)`,
/// with `x = (z + z̄)/2`, `y = (z − z̄)/(2i)`, `p_x = −iħ(∂_z + ∂_z̄)`,
/// `p_y = ħ(∂_z − ∂_z̄)` and the symmetric gauge. Used to confirm that the
/// compact blocks are the same operator.
pub fn component_hamiltonian<S: Scalar>(p: &PhysParams) -> OperatorExpr<S> {
    use operator::{sigma_x, sigma_y, sigma_z, spin_mul};
    let f = S::from_f64;
    let i = S::imag_unit();
    let half = S::one() / S::from_i64(2);
    let hbar = f(p.hbar);
    let z = ScalarOp::prim(Primitive::Z);
    let zb = ScalarOp::prim(Primitive::Zbar);
    let dz = ScalarOp::prim(Primitive::Dz);
    let dzb = ScalarOp::prim(Primitive::Dzbar);
    let x = z.add(&zb).scale(&half);
    let y = z.sub(&zb).scale(&(half.clone() / i.clone()));
    let px = dz.add(&dzb).scale(&(-(i.clone() * hbar.clone())));
    let py = dz.sub(&dzb).scale(&hbar);
    let field = f(p.b0) * f(p.e) / (S::from_i64(2) * f(p.c));
    let pi_x = px.sub(&y.scale(&field));
    let pi_y = py.add(&x.scale(&field));
    let kron = OperatorExpr::kron;
    let sx = sigma_x::<S>();
    let sy = sigma_y::<S>();
    let sz = sigma_z::<S>();
    let kinetic = kron(&sx, &pi_x).add(&kron(&sy, &pi_y)).scale(&f(p.v_f));
    let oscillator = kron(&spin_mul(&sx, &sz), &x)
        .add(&kron(&spin_mul(&sy, &sz), &y))
        .scale(&(-(i.clone() * f(p.k1) * f(p.v_f))));
    let rashba = kron(&sx, &pi_y).sub(&kron(&sy, &pi_x)).scale(&(i * f(p.lambda)));
    kinetic.add(&oscillator).add(&rashba).normalized()
}
