//! Closed-form analytic layer.
//!
//! Everything here is a pure function of [`PhysParams`]: the coefficients of
//! the compact complex-plane Hamiltonian, the level energies of both solution
//! branches, the mass gap, the critical Rashba coupling and magnetic field,
//! phase classification and the normalizability of the Gaussian envelope.
//!
//! Units follow the natural convention `e = 1`, `ħ = 1`, `c = 137` with the
//! Fermi velocity expressed in the same units (`v_f = 0.01 c = 1.37`).

use num::complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParamsError {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    Invalid {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error("Gaussian exponent of branch {0:?} is undefined (v_f = {1} λ)")]
    UndefinedExponent(Branch, &'static str),
    #[error("critical field undefined: v_f² = λ²")]
    DegenerateVelocity,
    #[error("critical coupling undefined: B₀·e must be positive")]
    NonPositiveField,
}

/// The seven physical inputs of the model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysParams {
    pub v_f: f64,
    pub lambda: f64,
    pub k1: f64,
    pub b0: f64,
    pub e: f64,
    pub c: f64,
    pub hbar: f64,
}

impl PhysParams {
    /// Validated constructor.
    pub fn new(
        v_f: f64,
        lambda: f64,
        k1: f64,
        b0: f64,
        e: f64,
        c: f64,
        hbar: f64,
    ) -> Result<Self, ParamsError> {
        let p = Self {
            v_f,
            lambda,
            k1,
            b0,
            e,
            c,
            hbar,
        };
        p.validate()?;
        Ok(p)
    }

    /// Parameters of the coupling sweep: `B₀ = 100`, `K₁ = 0.02`,
    /// `v_f = 0.01 c`, `e = ħ = 1`, `c = 137`, with the given Rashba strength.
    pub fn reference(lambda: f64) -> Self {
        Self {
            v_f: 1.37,
            lambda,
            k1: 0.02,
            b0: 100.0,
            e: 1.0,
            c: 137.0,
            hbar: 1.0,
        }
    }

    pub fn validate(&self) -> Result<(), ParamsError> {
        let fields = [
            ("v_f", self.v_f),
            ("lambda", self.lambda),
            ("k1", self.k1),
            ("b0", self.b0),
            ("e", self.e),
            ("c", self.c),
            ("hbar", self.hbar),
        ];
        for (name, value) in fields {
            if !value.is_finite() {
                return Err(ParamsError::Invalid {
                    name,
                    value,
                    reason: "must be finite",
                });
            }
        }
        for (name, value) in [("v_f", self.v_f), ("e", self.e), ("c", self.c), ("hbar", self.hbar)] {
            if value <= 0.0 {
                return Err(ParamsError::Invalid {
                    name,
                    value,
                    reason: "must be positive",
                });
            }
        }
        Ok(())
    }

    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda = lambda;
        self
    }

    pub fn with_b0(mut self, b0: f64) -> Self {
        self.b0 = b0;
        self
    }

    pub fn with_k1(mut self, k1: f64) -> Self {
        self.k1 = k1;
        self
    }

    /// Magnitude of the two competing terms of `K`; sets the scale of the
    /// critical band.
    pub fn k_scale(&self) -> f64 {
        let field_term = 2.0 * (self.v_f * self.v_f + self.lambda * self.lambda) * self.b0.abs() * self.e / self.c;
        let oscillator_term = 4.0 * self.k1.abs() * self.v_f * self.v_f;
        self.hbar * field_term.max(oscillator_term).max(f64::MIN_POSITIVE)
    }

    /// Default tolerance for the critical band of [`classify_phase`].
    pub fn default_tolerance(&self) -> f64 {
        1e-12 * self.k_scale()
    }
}

impl Default for PhysParams {
    fn default() -> Self {
        Self::reference(0.5)
    }
}

/// Gaussian-exponent branch of the solutions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Branch {
    /// Envelope exponent `C₁/(Aħ)`.
    I,
    /// Envelope exponent `C₂/(Bħ)`.
    II,
}

impl Branch {
    pub fn other(self) -> Self {
        match self {
            Branch::I => Branch::II,
            Branch::II => Branch::I,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Valley {
    /// The Hamiltonian `H`.
    Primary,
    /// `H̃ = T H T⁻¹`.
    TimeReversed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PhaseVerdict {
    Unbroken,
    Broken,
    Critical,
}

impl PhaseVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            PhaseVerdict::Unbroken => "unbroken",
            PhaseVerdict::Broken => "broken",
            PhaseVerdict::Critical => "critical",
        }
    }
}

impl std::fmt::Display for PhaseVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which parameter is varied when looking for the transition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Vary {
    Lambda,
    B0,
}

impl Vary {
    pub fn apply(self, p: &PhysParams, value: f64) -> PhysParams {
        match self {
            Vary::Lambda => p.with_lambda(value),
            Vary::B0 => p.with_b0(value),
        }
    }

    pub fn read(self, p: &PhysParams) -> f64 {
        match self {
            Vary::Lambda => p.lambda,
            Vary::B0 => p.b0,
        }
    }
}

/// Coefficients of the compact Hamiltonian
/// `H = [[0, AΠ_z + iC₁z̄], [BΠ_z̄ + iC₂z, 0]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedCoeffs {
    pub a_coef: f64,
    pub b_coef: f64,
    pub c1: f64,
    pub c2: f64,
    /// `K = (A C₂ − B C₁) ħ`.
    pub k_coef: f64,
    pub hbar: f64,
    /// `C₁/(Aħ)`, absent when `A = 0`.
    pub d1_branch_i: Option<f64>,
    /// `C₂/(Bħ)`, absent when `B = 0`.
    pub d1_branch_ii: Option<f64>,
}

impl DerivedCoeffs {
    pub fn d1(&self, branch: Branch) -> Option<f64> {
        match branch {
            Branch::I => self.d1_branch_i,
            Branch::II => self.d1_branch_ii,
        }
    }

    /// The relabeling `A ↔ B`, `C₁ ↔ C₂` that maps `H` onto `H̃`.
    pub fn swap_valleys(&self) -> Self {
        Self {
            a_coef: self.b_coef,
            b_coef: self.a_coef,
            c1: self.c2,
            c2: self.c1,
            k_coef: -self.k_coef,
            hbar: self.hbar,
            d1_branch_i: self.d1_branch_ii,
            d1_branch_ii: self.d1_branch_i,
        }
    }
}

pub fn derive_coeffs(p: &PhysParams) -> DerivedCoeffs {
    let a_coef = 2.0 * (p.v_f - p.lambda);
    let b_coef = 2.0 * (p.v_f + p.lambda);
    let field = p.b0 * p.e / (2.0 * p.c);
    let c1 = p.k1 * p.v_f - (p.v_f - p.lambda) * field;
    let c2 = -p.k1 * p.v_f + (p.v_f + p.lambda) * field;
    let k_coef = (a_coef * c2 - b_coef * c1) * p.hbar;
    let ratio = |num: f64, den: f64| (den != 0.0).then(|| num / (den * p.hbar));
    DerivedCoeffs {
        a_coef,
        b_coef,
        c1,
        c2,
        k_coef,
        hbar: p.hbar,
        d1_branch_i: ratio(c1, a_coef),
        d1_branch_ii: ratio(c2, b_coef),
    }
}

/// `K` written directly in the physical parameters; algebraically equal to
/// `derive_coeffs(p).k_coef`.
pub fn k_closed_form(p: &PhysParams) -> f64 {
    p.hbar * (2.0 * (p.v_f * p.v_f - p.lambda * p.lambda) * p.b0 * p.e / p.c - 4.0 * p.k1 * p.v_f * p.v_f)
}

/// Principal square root of a real radicand: `√x` for `x ≥ 0`, `+i√|x|` otherwise.
pub fn principal_sqrt(x: f64) -> Complex64 {
    if x >= 0.0 {
        Complex64::new(x.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, (-x).sqrt())
    }
}

/// Energies `(+E, −E)` of level `n`. Branch I: `E² = (n+1)K`; branch II:
/// `E² = −(n+1)K`.
pub fn level_energy(p: &PhysParams, n: usize, branch: Branch) -> (Complex64, Complex64) {
    energy_pair(derive_coeffs(p).k_coef, n, branch)
}

pub(crate) fn energy_pair(k_coef: f64, n: usize, branch: Branch) -> (Complex64, Complex64) {
    let levels = (n + 1) as f64;
    let radicand = match branch {
        Branch::I => levels * k_coef,
        Branch::II => -levels * k_coef,
    };
    let e = principal_sqrt(radicand);
    (e, -e)
}

/// Mass gap `Δ₀`, the `n = 0` positive energy of branch I.
pub fn mass_gap(p: &PhysParams) -> Complex64 {
    level_energy(p, 0, Branch::I).0
}

/// Closed-form transition point in the chosen direction. `Ok(None)` means the
/// parameters admit no real transition in that direction.
pub fn critical_point(p: &PhysParams, vary: Vary) -> Result<Option<f64>, ParamsError> {
    match vary {
        Vary::Lambda => {
            if p.b0 * p.e <= 0.0 {
                return Err(ParamsError::NonPositiveField);
            }
            let radicand = 1.0 - 2.0 * p.k1 * p.c / (p.b0 * p.e);
            Ok((radicand >= 0.0).then(|| p.v_f * radicand.sqrt()))
        }
        Vary::B0 => {
            let dv = p.v_f * p.v_f - p.lambda * p.lambda;
            if dv == 0.0 {
                return Err(ParamsError::DegenerateVelocity);
            }
            Ok(Some(2.0 * p.k1 * p.v_f * p.v_f * p.c / (dv * p.e)))
        }
    }
}

pub fn classify_phase(p: &PhysParams, branch: Branch, tol: f64) -> PhaseVerdict {
    classify_k(derive_coeffs(p).k_coef, branch, tol)
}

/// Verdict from `K` alone. Branch II is the mirror image of branch I.
pub fn classify_k(k_coef: f64, branch: Branch, tol: f64) -> PhaseVerdict {
    let signed = match branch {
        Branch::I => k_coef,
        Branch::II => -k_coef,
    };
    if signed > tol {
        PhaseVerdict::Unbroken
    } else if signed < -tol {
        PhaseVerdict::Broken
    } else {
        PhaseVerdict::Critical
    }
}

/// Whether the envelope `e^{d₁ z z̄}` of the branch is square-integrable
/// (`d₁ < 0`).
pub fn normalizability(p: &PhysParams, branch: Branch) -> Result<bool, ParamsError> {
    let coeffs = derive_coeffs(p);
    match coeffs.d1(branch) {
        Some(d1) => Ok(d1 < 0.0),
        None => Err(ParamsError::UndefinedExponent(
            branch,
            match branch {
                Branch::I => "+",
                Branch::II => "-",
            },
        )),
    }
}
