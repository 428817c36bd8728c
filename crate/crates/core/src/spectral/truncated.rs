//! Truncated matrix of `H` or `H̃` on the monomial-Gaussian ladder.
//!
//! The basis is non-orthogonal, so the matrix of a Hermitian operator would
//! not be Hermitian; only the eigenvalues are used. Index `i < n_tr` is the
//! upper component `e_i`, index `n_tr + i` the lower one.
//!
//! For branch I of `H` the basis is `e_n = z^n e^{(C₁/Aħ) z z̄}` and the
//! only entries are
//!
//! ```text
//! U[n−1, n] = −i A ħ n        L[n+1, n] = i K / (A ħ)
//! ```
//!
//! Branch II uses `z̄^n e^{(C₂/Bħ) z z̄}` with `L[n−1, n] = −i B ħ n` and
//! `U[n+1, n] = −i K / (B ħ)`. The other valley is the same construction
//! with `A ↔ B`, `C₁ ↔ C₂` and the branches exchanged.

use super::SpectralError;
use crate::opalg::{build_hamiltonian, Couplings, SpinorFunction, WeightedPolynomial};
use crate::params::{Branch, DerivedCoeffs, Valley};
use nalgebra::DMatrix;
use num::complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use std::fmt::Write as _;

type C = Complex64;

/// Entry of the operator action that lands on `e_{n_tr}` and is cut.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DroppedEntry {
    /// 0 for the upper component, 1 for the lower.
    pub component: usize,
    pub from_level: usize,
    pub value: C,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedRep {
    pub n_tr: usize,
    pub matrix: DMatrix<C>,
    pub branch: Branch,
    pub valley: Valley,
    pub coeffs: DerivedCoeffs,
    pub dropped: DroppedEntry,
    /// Max-row-sum norm of the unscrambled matrix; fixes the absolute
    /// scale of classification tolerances.
    pub scale: f64,
    /// Seed of the similarity transform, if scrambled.
    pub scrambled: Option<u64>,
}

/// Holomorphic (`z^n`) or anti-holomorphic (`z̄^n`) ladder.
fn holomorphic(branch: Branch, valley: Valley) -> bool {
    matches!(
        (branch, valley),
        (Branch::I, Valley::Primary) | (Branch::II, Valley::TimeReversed)
    )
}

fn basis_element(holo: bool, n: usize, d: f64) -> WeightedPolynomial<C> {
    let (m, nb) = if holo { (n as u32, 0) } else { (0, n as u32) };
    WeightedPolynomial::monomial(m, nb, C::new(1.0, 0.0), C::new(d, 0.0))
}

pub fn build_truncated(
    coeffs: &DerivedCoeffs,
    n_tr: usize,
    branch: Branch,
    valley: Valley,
) -> Result<TruncatedRep, SpectralError> {
    if n_tr < 2 {
        return Err(SpectralError::TruncationTooSmall(n_tr));
    }
    let d = coeffs.d1(branch).ok_or(SpectralError::DegenerateBasis(branch))?;
    let local = match valley {
        Valley::Primary => *coeffs,
        Valley::TimeReversed => coeffs.swap_valleys(),
    };
    let holo = holomorphic(branch, valley);
    let hbar = local.hbar;
    let i = C::new(0.0, 1.0);
    let dim = 2 * n_tr;
    let mut m = DMatrix::<C>::zeros(dim, dim);
    // (row offset, col offset) of the lowering-by-one and raising-by-one blocks
    let (down, up) = if holo { ((0, n_tr), (n_tr, 0)) } else { ((n_tr, 0), (0, n_tr)) };
    let (down_coef, up_coef) = if holo {
        (-i * local.a_coef * hbar, i * local.k_coef / (local.a_coef * hbar))
    } else {
        (-i * local.b_coef * hbar, -i * local.k_coef / (local.b_coef * hbar))
    };
    for n in 1..n_tr {
        m[(down.0 + n - 1, down.1 + n)] = down_coef * n as f64;
    }
    for n in 0..n_tr - 1 {
        m[(up.0 + n + 1, up.1 + n)] = up_coef;
    }
    let dropped = DroppedEntry {
        component: if holo { 1 } else { 0 },
        from_level: n_tr - 1,
        value: up_coef,
    };
    let scale = m
        .row_iter()
        .map(|r| r.iter().map(|c| c.norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let rep = TruncatedRep {
        n_tr,
        matrix: m,
        branch,
        valley,
        coeffs: *coeffs,
        dropped,
        scale,
        scrambled: None,
    };
    cross_check(&rep, holo, d)?;
    Ok(rep)
}

/// Applies the symbolic Hamiltonian to every basis spinor and compares the
/// result with the closed-form columns; anything outside the span other
/// than the recorded top entry must vanish.
fn cross_check(rep: &TruncatedRep, holo: bool, d: f64) -> Result<(), SpectralError> {
    let h = build_hamiltonian(&Couplings::from(&rep.coeffs), rep.valley);
    let n_tr = rep.n_tr;
    let tol = 1e-14 * rep.scale.max(1.0);
    let zero = WeightedPolynomial::zero(C::new(d, 0.0));
    let level_of = |m: u32, n: u32| -> Option<usize> {
        match (holo, m, n) {
            (true, m, 0) => Some(m as usize),
            (false, 0, n) => Some(n as usize),
            _ => None,
        }
    };
    for col in 0..2 * n_tr {
        let (component, level) = (col / n_tr, col % n_tr);
        let e = basis_element(holo, level, d);
        let probe = if component == 0 {
            SpinorFunction::new(e, zero.clone())
        } else {
            SpinorFunction::new(zero.clone(), e)
        }
        .expect("shared envelope");
        let image = h.apply(&probe);
        let mut seen = vec![C::new(0.0, 0.0); 2 * n_tr];
        for out in 0..2 {
            for (&(m, n), c) in image.component(out).terms() {
                match level_of(m, n) {
                    Some(l) if l < n_tr => seen[out * n_tr + l] += c,
                    Some(l) if l == n_tr && out == rep.dropped.component && level == rep.dropped.from_level => {
                        let residual = (c - rep.dropped.value).norm();
                        if residual > tol {
                            return Err(SpectralError::BuildMismatch { row: 2 * n_tr, col, residual });
                        }
                    }
                    _ if c.norm() <= tol => {}
                    _ => {
                        return Err(SpectralError::BuildMismatch {
                            row: usize::MAX,
                            col,
                            residual: c.norm(),
                        })
                    }
                }
            }
        }
        for (row, c) in seen.iter().enumerate() {
            let residual = (c - rep.matrix[(row, col)]).norm();
            if residual > tol {
                return Err(SpectralError::BuildMismatch { row, col, residual });
            }
        }
    }
    Ok(())
}

/// Attempts before [`scramble`] gives up on drawing a well-conditioned `S`.
pub const SCRAMBLE_ATTEMPTS: usize = 10;
/// Largest accepted 2-norm condition number of `S`.
pub const SCRAMBLE_MAX_CONDITION: f64 = 100.0;

/// `S⁻¹ M S` with `S = I + (0.3/√dim) G`, `G` complex standard Gaussian.
pub fn scramble(rep: &TruncatedRep, seed: u64) -> Result<TruncatedRep, SpectralError> {
    let dim = rep.matrix.nrows();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let amp = 0.3 / (dim as f64).sqrt();
    for _ in 0..SCRAMBLE_ATTEMPTS {
        let mut s = DMatrix::<C>::identity(dim, dim);
        for x in s.iter_mut() {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            *x += C::new(re, im) * (amp / std::f64::consts::SQRT_2);
        }
        let sv = s.clone().svd(false, false).singular_values;
        let (smax, smin) = (sv.max(), sv.min());
        if smin == 0.0 || smax / smin > SCRAMBLE_MAX_CONDITION {
            continue;
        }
        let Some(inv) = s.clone().try_inverse() else { continue };
        return Ok(TruncatedRep {
            matrix: inv * &rep.matrix * s,
            scrambled: Some(seed),
            ..rep.clone()
        });
    }
    Err(SpectralError::Conditioning {
        attempts: SCRAMBLE_ATTEMPTS,
    })
}

/// Dimension line, then one line per row of `re im` pairs.
pub fn dump_matrix(m: &DMatrix<C>) -> String {
    let mut out = format!("{}\n", m.nrows());
    for row in m.row_iter() {
        let line: Vec<String> = row.iter().map(|c| format!("{:?} {:?}", c.re, c.im)).collect();
        let _ = writeln!(out, "{}", line.join(" "));
    }
    out
}

pub fn parse_matrix(text: &str) -> Result<DMatrix<C>, SpectralError> {
    let bad = |msg: String| SpectralError::Parse(msg);
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let n: usize = lines
        .next()
        .ok_or_else(|| bad("empty input".into()))?
        .trim()
        .parse()
        .map_err(|e| bad(format!("dimension: {e}")))?;
    let mut m = DMatrix::<C>::zeros(n, n);
    for i in 0..n {
        let line = lines.next().ok_or_else(|| bad(format!("missing row {i}")))?;
        let nums: Vec<f64> = line
            .split_whitespace()
            .map(|t| t.parse::<f64>().map_err(|e| bad(format!("row {i}: {e}"))))
            .collect::<Result<_, _>>()?;
        if nums.len() != 2 * n {
            return Err(bad(format!("row {i}: expected {} numbers, got {}", 2 * n, nums.len())));
        }
        for j in 0..n {
            m[(i, j)] = C::new(nums[2 * j], nums[2 * j + 1]);
        }
    }
    Ok(m)
}
