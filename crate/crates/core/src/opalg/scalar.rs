//! Coefficient fields for the operator algebra.
//!
//! [`Complex64`] is the working type. [`Exact`] is an exact field element of
//! `ℚ(i)(√D)`, enough to carry one energy `E = √((n+1)K)` next to rational
//! parameters, so that residuals of exact identities come out as literal zero.

use num::bigint::BigInt;
use num::complex::{Complex, Complex64};
use num::rational::BigRational;
use num::traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Field operations needed by polynomials, operators and spinors.
pub trait Scalar:
    Clone
    + fmt::Debug
    + PartialEq
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn imag_unit() -> Self;
    fn from_f64(x: f64) -> Self;
    fn from_i64(n: i64) -> Self;
    fn conj(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn magnitude(&self) -> f64;
    fn to_c64(&self) -> Complex64;
    /// Principal square root of a real value: `+i√|x|` for negative `x`.
    fn sqrt_real(&self) -> Self;
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn imag_unit() -> Self {
        Complex64::new(0.0, 1.0)
    }
    fn from_f64(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    fn from_i64(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }
    fn conj(&self) -> Self {
        Complex::conj(self)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn to_c64(&self) -> Complex64 {
        *self
    }
    fn sqrt_real(&self) -> Self {
        crate::params::principal_sqrt(self.re)
    }
}

type CRat = Complex<BigRational>;

fn crat_zero() -> CRat {
    Complex::new(BigRational::zero(), BigRational::zero())
}

fn crat_is_zero(c: &CRat) -> bool {
    c.re.is_zero() && c.im.is_zero()
}

fn crat_to_c64(c: &CRat) -> Complex64 {
    Complex64::new(c.re.to_f64().unwrap_or(f64::NAN), c.im.to_f64().unwrap_or(f64::NAN))
}

/// `base + surd·√radicand` with `base, surd ∈ ℚ(i)` and a rational radicand.
///
/// Elements with a nonzero surd part may only be combined when their
/// radicands agree; mixing two different surds panics. Radicands that are
/// (negated) rational squares are absorbed into `base`.
#[derive(Clone, PartialEq)]
pub struct Exact {
    base: CRat,
    surd: CRat,
    radicand: BigRational,
}

impl Exact {
    pub fn rational(r: BigRational) -> Self {
        Self::from_crat(Complex::new(r, BigRational::zero()))
    }

    fn from_crat(base: CRat) -> Self {
        Self {
            base,
            surd: crat_zero(),
            radicand: BigRational::zero(),
        }
    }

    fn normalized(mut self) -> Self {
        if crat_is_zero(&self.surd) {
            self.radicand = BigRational::zero();
        }
        self
    }

    /// Principal `√r`; exact rational (or imaginary rational) if `r` is ± a square.
    pub fn sqrt_rational(r: &BigRational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        let abs = r.abs();
        let (n, d) = (abs.numer().clone(), abs.denom().clone());
        let (sn, sd) = (n.sqrt(), d.sqrt());
        if &sn * &sn == n && &sd * &sd == d {
            let root = BigRational::new(sn, sd);
            return if r.is_positive() {
                Self::rational(root)
            } else {
                Self::from_crat(Complex::new(BigRational::zero(), root))
            };
        }
        Self {
            base: crat_zero(),
            surd: Complex::new(BigRational::one(), BigRational::zero()),
            radicand: r.clone(),
        }
    }

    /// Real rational part, if the value is a real rational.
    pub fn as_rational(&self) -> Option<BigRational> {
        (crat_is_zero(&self.surd) && self.base.im.is_zero()).then(|| self.base.re.clone())
    }

    fn joint_radicand(&self, other: &Self) -> BigRational {
        match (crat_is_zero(&self.surd), crat_is_zero(&other.surd)) {
            (true, true) => BigRational::zero(),
            (false, true) => self.radicand.clone(),
            (true, false) => other.radicand.clone(),
            (false, false) => {
                assert!(
                    self.radicand == other.radicand,
                    "cannot combine different quadratic surds"
                );
                self.radicand.clone()
            }
        }
    }

    fn crat(x: i64) -> CRat {
        Complex::new(BigRational::from_integer(BigInt::from(x)), BigRational::zero())
    }
}

impl fmt::Debug for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if crat_is_zero(&self.surd) {
            write!(f, "({} + {}i)", self.base.re, self.base.im)
        } else {
            write!(
                f,
                "({} + {}i) + ({} + {}i)·√{}",
                self.base.re, self.base.im, self.surd.re, self.surd.im, self.radicand
            )
        }
    }
}

impl Add for Exact {
    type Output = Exact;
    fn add(self, rhs: Exact) -> Exact {
        let radicand = self.joint_radicand(&rhs);
        Exact {
            base: self.base + rhs.base,
            surd: self.surd + rhs.surd,
            radicand,
        }
        .normalized()
    }
}

impl Sub for Exact {
    type Output = Exact;
    fn sub(self, rhs: Exact) -> Exact {
        self + (-rhs)
    }
}

impl Neg for Exact {
    type Output = Exact;
    fn neg(self) -> Exact {
        Exact {
            base: -self.base,
            surd: -self.surd,
            radicand: self.radicand,
        }
    }
}

impl Mul for Exact {
    type Output = Exact;
    fn mul(self, rhs: Exact) -> Exact {
        let radicand = self.joint_radicand(&rhs);
        let d = Complex::new(radicand.clone(), BigRational::zero());
        let base = self.base.clone() * rhs.base.clone() + self.surd.clone() * rhs.surd.clone() * d;
        let surd = self.base * rhs.surd + self.surd * rhs.base;
        Exact { base, surd, radicand }.normalized()
    }
}

impl Div for Exact {
    type Output = Exact;
    fn div(self, rhs: Exact) -> Exact {
        assert!(!rhs.is_zero(), "division by exact zero");
        // (p + q s)^{-1} = (p − q s) / (p² − q² D)
        let d = Complex::new(rhs.radicand.clone(), BigRational::zero());
        let norm = rhs.base.clone() * rhs.base.clone() - rhs.surd.clone() * rhs.surd.clone() * d;
        let inv = Exact {
            base: rhs.base / norm.clone(),
            surd: -rhs.surd / norm,
            radicand: rhs.radicand,
        }
        .normalized();
        self * inv
    }
}

impl Scalar for Exact {
    fn zero() -> Self {
        Self::from_crat(crat_zero())
    }
    fn one() -> Self {
        Self::from_crat(Self::crat(1))
    }
    fn imag_unit() -> Self {
        Self::from_crat(Complex::new(BigRational::zero(), BigRational::one()))
    }
    /// Exact binary value of the float.
    fn from_f64(x: f64) -> Self {
        Self::rational(BigRational::from_float(x).expect("finite float"))
    }
    fn from_i64(n: i64) -> Self {
        Self::from_crat(Self::crat(n))
    }
    fn conj(&self) -> Self {
        // √D is real for D > 0 and imaginary for D < 0.
        let surd = if self.radicand.is_negative() {
            -self.surd.conj()
        } else {
            self.surd.conj()
        };
        Exact {
            base: self.base.conj(),
            surd,
            radicand: self.radicand.clone(),
        }
    }
    fn is_zero(&self) -> bool {
        crat_is_zero(&self.base) && crat_is_zero(&self.surd)
    }
    fn magnitude(&self) -> f64 {
        self.to_c64().norm()
    }
    fn to_c64(&self) -> Complex64 {
        let root = crate::params::principal_sqrt(self.radicand.to_f64().unwrap_or(f64::NAN));
        crat_to_c64(&self.base) + crat_to_c64(&self.surd) * root
    }
    fn sqrt_real(&self) -> Self {
        let r = self
            .as_rational()
            .expect("sqrt_real needs a real rational argument");
        Self::sqrt_rational(&r)
    }
}
