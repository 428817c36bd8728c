//! Dense complex eigensolver.
//!
//! Householder reduction to upper Hessenberg form, single-shift complex QR
//! sweeps (Wilkinson shift, exceptional shifts every tenth sweep) down to
//! Schur form `M = Z T Z*`, then eigenvectors of `T` by back-substitution.
//! Every eigenvalue comes with the certificate `‖Mv − λv‖₂ / ‖M‖_F`.

use super::SpectralError;
use nalgebra::{DMatrix, DVector};
use num::complex::Complex64;

type C = Complex64;

/// Largest accepted dimension.
pub const MAX_DIM: usize = 2000;

/// The QR iteration stops after `SWEEPS_PER_EIGENVALUE · max(n, 10)` sweeps.
pub const SWEEPS_PER_EIGENVALUE: usize = 30;

/// Eigenvalues with unit eigenvectors and residual certificates, sorted by
/// real part, then imaginary part.
#[derive(Debug, Clone, Default)]
pub struct Spectrum {
    pub values: Vec<C>,
    pub vectors: Vec<DVector<C>>,
    pub residuals: Vec<f64>,
}

impl Spectrum {
    /// A bare list of values with zero residuals, for classification of
    /// externally supplied spectra.
    pub fn from_values(values: Vec<C>) -> Self {
        let residuals = vec![0.0; values.len()];
        Self {
            values,
            vectors: Vec::new(),
            residuals,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

fn abs1(c: C) -> f64 {
    c.re.abs() + c.im.abs()
}

fn frobenius(m: &DMatrix<C>) -> f64 {
    m.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// Returns `(c, s)` with real `c` such that `[[c, s], [−s̄, c]]·[x; y] = [r; 0]`.
fn givens(x: C, y: C) -> (f64, C) {
    let (ax, ay) = (x.norm(), y.norm());
    if ay == 0.0 {
        return (1.0, C::new(0.0, 0.0));
    }
    if ax == 0.0 {
        return (0.0, C::new(1.0, 0.0));
    }
    let norm = ax.hypot(ay);
    let phase = x / ax;
    (ax / norm, phase * y.conj() / norm)
}

fn rotate_rows(h: &mut DMatrix<C>, k: usize, cols: std::ops::Range<usize>, c: f64, s: C) {
    for j in cols {
        let (a, b) = (h[(k, j)], h[(k + 1, j)]);
        h[(k, j)] = a * c + s * b;
        h[(k + 1, j)] = -s.conj() * a + b * c;
    }
}

fn rotate_cols(h: &mut DMatrix<C>, k: usize, rows: std::ops::Range<usize>, c: f64, s: C) {
    for i in rows {
        let (a, b) = (h[(i, k)], h[(i, k + 1)]);
        h[(i, k)] = a * c + b * s.conj();
        h[(i, k + 1)] = -s * a + b * c;
    }
}

/// In-place reduction `a ← Q* a Q` to upper Hessenberg form; returns `Q`.
fn hessenberg(a: &mut DMatrix<C>) -> DMatrix<C> {
    let n = a.nrows();
    let mut q = DMatrix::<C>::identity(n, n);
    for k in 0..n.saturating_sub(2) {
        let alpha = (k + 1..n).map(|i| a[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if alpha == 0.0 {
            continue;
        }
        let x0 = a[(k + 1, k)];
        let phase = if x0.norm() == 0.0 { C::new(1.0, 0.0) } else { x0 / x0.norm() };
        let mut v: Vec<C> = (k + 1..n).map(|i| a[(i, k)]).collect();
        v[0] += phase * alpha;
        let vn = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        v.iter_mut().for_each(|c| *c /= vn);

        // rows: a ← (I − 2vv*) a
        for j in 0..n {
            let dot: C = v.iter().enumerate().map(|(r, vr)| vr.conj() * a[(k + 1 + r, j)]).sum();
            for (r, vr) in v.iter().enumerate() {
                a[(k + 1 + r, j)] -= *vr * dot * 2.0;
            }
        }
        // columns: a ← a (I − 2vv*), same for q
        for m in [&mut *a, &mut q] {
            for i in 0..n {
                let dot: C = v.iter().enumerate().map(|(r, vr)| m[(i, k + 1 + r)] * vr).sum();
                for (r, vr) in v.iter().enumerate() {
                    m[(i, k + 1 + r)] -= dot * vr.conj() * 2.0;
                }
            }
        }
        for i in k + 2..n {
            a[(i, k)] = C::new(0.0, 0.0);
        }
    }
    q
}

fn wilkinson_shift(h: &DMatrix<C>, hi: usize) -> C {
    let (a, b) = (h[(hi - 1, hi - 1)], h[(hi - 1, hi)]);
    let (c, d) = (h[(hi, hi - 1)], h[(hi, hi)]);
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mean = (a + d) * 0.5;
    let (l1, l2) = (mean + disc, mean - disc);
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Shifted QR on a Hessenberg matrix, accumulating rotations into `z`.
/// On failure returns the sweep count and the index below which nothing
/// has converged yet.
fn schur(h: &mut DMatrix<C>, z: &mut DMatrix<C>) -> Result<(), (usize, usize)> {
    let n = h.nrows();
    if n < 2 {
        return Ok(());
    }
    let norm = frobenius(h).max(f64::MIN_POSITIVE);
    let cap = SWEEPS_PER_EIGENVALUE * n.max(10);
    let (mut sweeps, mut its) = (0, 0);
    let mut hi = n - 1;
    while hi > 0 {
        let mut lo = hi;
        while lo > 0 {
            let mut s = abs1(h[(lo - 1, lo - 1)]) + abs1(h[(lo, lo)]);
            if s == 0.0 {
                s = norm;
            }
            if abs1(h[(lo, lo - 1)]) <= f64::EPSILON * s {
                h[(lo, lo - 1)] = C::new(0.0, 0.0);
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            its = 0;
            continue;
        }
        if sweeps >= cap {
            return Err((sweeps, hi));
        }
        sweeps += 1;
        its += 1;
        let shift = match its % 20 {
            10 => h[(hi, hi)] + 0.75 * abs1(h[(hi, hi - 1)]),
            0 => h[(lo, lo)] + 0.75 * abs1(h[(lo + 1, lo)]),
            _ => wilkinson_shift(h, hi),
        };
        for k in lo..hi {
            let (x, y) = if k == lo {
                (h[(lo, lo)] - shift, h[(lo + 1, lo)])
            } else {
                (h[(k, k - 1)], h[(k + 1, k - 1)])
            };
            let (c, s) = givens(x, y);
            rotate_rows(h, k, if k == lo { lo } else { k - 1 }..n, c, s);
            rotate_cols(h, k, 0..(k + 3).min(hi + 1), c, s);
            rotate_cols(z, k, 0..n, c, s);
            if k > lo {
                h[(k + 1, k - 1)] = C::new(0.0, 0.0);
            }
        }
    }
    Ok(())
}

/// Eigenvector of upper-triangular `t` for the eigenvalue `t[k][k]`.
fn triangular_eigenvector(t: &DMatrix<C>, k: usize, smin: f64) -> DVector<C> {
    let n = t.nrows();
    let lam = t[(k, k)];
    let mut x = DVector::<C>::zeros(n);
    x[k] = C::new(1.0, 0.0);
    for i in (0..k).rev() {
        let sum: C = (i + 1..=k).map(|j| t[(i, j)] * x[j]).sum();
        let mut d = t[(i, i)] - lam;
        if d.norm() < smin {
            d = C::new(smin, 0.0);
        }
        x[i] = -sum / d;
        let big = x[i].norm();
        if big > 1e150 {
            for j in i..=k {
                x[j] /= big;
            }
        }
    }
    x
}

/// All eigenvalues of `m` with unit eigenvectors; fails if a certificate
/// `‖Mv − λv‖/‖M‖` exceeds `tol`.
pub fn eigensolve(m: &DMatrix<C>, tol: f64) -> Result<Spectrum, SpectralError> {
    let (rows, cols) = m.shape();
    if rows != cols {
        return Err(SpectralError::NotSquare { rows, cols });
    }
    if rows > MAX_DIM {
        return Err(SpectralError::TooLarge(rows));
    }
    if m.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err(SpectralError::NonFinite);
    }
    let n = rows;
    let mut t = m.clone();
    let mut z = hessenberg(&mut t);
    if let Err((iterations, hi)) = schur(&mut t, &mut z) {
        let converged = (hi + 1..n).map(|i| t[(i, i)]).collect();
        return Err(SpectralError::NoConvergence { iterations, converged });
    }

    let norm = frobenius(m);
    let smin = (f64::EPSILON * frobenius(&t)).max(f64::MIN_POSITIVE);
    let mut pairs = Vec::with_capacity(n);
    for k in 0..n {
        let lam = t[(k, k)];
        let mut v = &z * triangular_eigenvector(&t, k, smin);
        let vn = v.norm();
        v /= C::new(vn, 0.0);
        let residual = if norm == 0.0 {
            0.0
        } else {
            (m * &v - &v * lam).norm() / norm
        };
        if residual > tol {
            return Err(SpectralError::Certificate { value: lam, residual, tol });
        }
        pairs.push((lam, v, residual));
    }
    pairs.sort_by(|a, b| a.0.re.total_cmp(&b.0.re).then(a.0.im.total_cmp(&b.0.im)));
    let mut spectrum = Spectrum::default();
    for (value, vector, residual) in pairs {
        spectrum.values.push(value);
        spectrum.vectors.push(vector);
        spectrum.residuals.push(residual);
    }
    Ok(spectrum)
}
