//! Numerical oracle: truncated ladder matrices, a dense eigensolver,
//! spectrum classification and bisection for the exceptional point.

pub mod classify;
pub mod eigen;
pub mod exceptional;
pub mod truncated;

pub use classify::{classify_spectrum, ClassifyOptions, EdgePolicy, SpectrumReport, DEFAULT_TOL};
pub use eigen::{eigensolve, Spectrum};
pub use exceptional::{
    find_exceptional_point, find_exceptional_point_with, numerical_report, numerical_verdict, OracleOptions,
    CERTIFICATE_TOL, DEFAULT_N_TR,
};
pub use truncated::{build_truncated, dump_matrix, parse_matrix, scramble, DroppedEntry, TruncatedRep};

use crate::params::{Branch, PhaseVerdict};
use num::complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("matrix is {rows}×{cols}, not square")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension {0} exceeds the dense limit")]
    TooLarge(usize),
    #[error("matrix has non-finite entries")]
    NonFinite,
    #[error("QR iteration did not converge after {iterations} sweeps ({} eigenvalues found)", converged.len())]
    NoConvergence { iterations: usize, converged: Vec<Complex64> },
    #[error("eigenvalue {value} has certificate {residual:e} > {tol:e}")]
    Certificate { value: Complex64, residual: f64, tol: f64 },
    #[error("empty spectrum")]
    Empty,
    #[error("edge policy discards {discarded} of {total} eigenvalues, nothing left")]
    NothingRetained { total: usize, discarded: usize },
    #[error("basis of branch {0:?} is undefined (degenerate factorization)")]
    DegenerateBasis(Branch),
    #[error("truncation level {0} < 2")]
    TruncationTooSmall(usize),
    #[error("matrix entry ({row}, {col}) disagrees with the operator action by {residual:e}")]
    BuildMismatch { row: usize, col: usize, residual: f64 },
    #[error("no well-conditioned similarity after {attempts} attempts")]
    Conditioning { attempts: usize },
    #[error("no transition bracketed (both ends {verdict})")]
    NoTransition { verdict: PhaseVerdict },
    #[error("invalid bracket [{lo}, {hi}]")]
    InvalidBracket { lo: f64, hi: f64 },
    #[error("matrix parse error: {0}")]
    Parse(String),
}
