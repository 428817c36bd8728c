//! Locating the PT transition by bisection on the numerical verdict.

use super::classify::{classify_spectrum, ClassifyOptions, SpectrumReport, DEFAULT_TOL};
use super::eigen::eigensolve;
use super::truncated::build_truncated;
use super::SpectralError;
use crate::params::{derive_coeffs, Branch, PhaseVerdict, PhysParams, Valley, Vary};

/// Default truncation level of the ladder.
pub const DEFAULT_N_TR: usize = 40;
/// Certificate bound passed to the eigensolver.
pub const CERTIFICATE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleOptions {
    pub n_tr: usize,
    pub branch: Branch,
    pub valley: Valley,
    /// Relative classification tolerance.
    pub tol: f64,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self {
            n_tr: DEFAULT_N_TR,
            branch: Branch::I,
            valley: Valley::Primary,
            tol: DEFAULT_TOL,
        }
    }
}

/// Builds, diagonalizes and classifies the (unscrambled) truncated matrix.
pub fn numerical_report(p: &PhysParams, opts: &OracleOptions) -> Result<SpectrumReport, SpectralError> {
    let rep = build_truncated(&derive_coeffs(p), opts.n_tr, opts.branch, opts.valley)?;
    let spectrum = eigensolve(&rep.matrix, CERTIFICATE_TOL)?;
    let classify = ClassifyOptions {
        tol: opts.tol,
        ..ClassifyOptions::for_rep(&rep)
    };
    classify_spectrum(&spectrum, &classify)
}

pub fn numerical_verdict(p: &PhysParams, opts: &OracleOptions) -> Result<PhaseVerdict, SpectralError> {
    Ok(numerical_report(p, opts)?.verdict)
}

/// Bisection with default oracle options (branch I, primary valley, `n_tr = 40`).
pub fn find_exceptional_point(p: &PhysParams, vary: Vary, lo: f64, hi: f64, tol: f64) -> Result<f64, SpectralError> {
    find_exceptional_point_with(p, vary, lo, hi, tol, &OracleOptions::default())
}

pub fn find_exceptional_point_with(
    p: &PhysParams,
    vary: Vary,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
    opts: &OracleOptions,
) -> Result<f64, SpectralError> {
    if lo.partial_cmp(&hi) != Some(std::cmp::Ordering::Less) || tol.is_nan() || tol <= 0.0 {
        return Err(SpectralError::InvalidBracket { lo, hi });
    }
    let verdict = |x: f64| numerical_verdict(&vary.apply(p, x), opts);
    // a point where the basis of the branch does not exist is nudged inward
    let robust = |x: f64, toward: f64| -> Result<(f64, PhaseVerdict), SpectralError> {
        match verdict(x) {
            Err(SpectralError::DegenerateBasis(_)) => {
                let y = x + 1e-3 * (toward - x);
                Ok((y, verdict(y)?))
            }
            other => Ok((x, other?)),
        }
    };
    let (l, v_lo) = robust(lo, hi)?;
    let (h, v_hi) = robust(hi, lo)?;
    (lo, hi) = (l, h);
    if v_lo == PhaseVerdict::Critical {
        return Ok(lo);
    }
    if v_hi == PhaseVerdict::Critical {
        return Ok(hi);
    }
    if v_lo == v_hi {
        return Err(SpectralError::NoTransition { verdict: v_lo });
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let (x, v) = robust(mid, lo)?;
        match v {
            PhaseVerdict::Critical => return Ok(x),
            v if v == v_lo => lo = x,
            _ => hi = x,
        }
    }
    Ok(0.5 * (lo + hi))
}
