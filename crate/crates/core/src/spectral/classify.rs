//! Phase verdicts from a computed spectrum.

use super::eigen::Spectrum;
use super::truncated::TruncatedRep;
use super::SpectralError;
use crate::params::PhaseVerdict;
use num::complex::Complex64;

type C = Complex64;

/// Default relative classification tolerance.
pub const DEFAULT_TOL: f64 = 1e-8;

/// Eigenvalues removed before classification.
///
/// On the truncated ladder the zero-energy mode and the cut top level give
/// two eigenvalues at zero; the highest pair sits at the truncation edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgePolicy {
    /// Smallest-magnitude eigenvalues dropped.
    pub zero_modes: usize,
    /// Largest-magnitude eigenvalues dropped.
    pub top: usize,
}

impl EdgePolicy {
    pub const NONE: Self = Self { zero_modes: 0, top: 0 };
    pub const TRUNCATED: Self = Self { zero_modes: 2, top: 2 };
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassifyOptions {
    /// Relative tolerance; the absolute threshold is `tol · scale`.
    pub tol: f64,
    pub scale: f64,
    pub edge: EdgePolicy,
}

impl ClassifyOptions {
    pub fn for_rep(rep: &TruncatedRep) -> Self {
        Self {
            tol: DEFAULT_TOL,
            scale: rep.scale,
            edge: EdgePolicy::TRUNCATED,
        }
    }

    pub fn plain(tol: f64, scale: f64) -> Self {
        Self {
            tol,
            scale,
            edge: EdgePolicy::NONE,
        }
    }

    pub fn threshold(&self) -> f64 {
        self.tol * self.scale
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumReport {
    /// Everything that came in, in the input order.
    pub eigenvalues: Vec<C>,
    /// Eigenvalues left after the edge policy, by increasing magnitude.
    pub retained: Vec<C>,
    /// `(+E, −E)`; `+E` has the larger real part, or the larger imaginary
    /// part when the real parts vanish.
    pub pairs: Vec<(C, C)>,
    pub unpaired: Vec<C>,
    pub n_real: usize,
    pub n_complex_pairs: usize,
    pub verdict: PhaseVerdict,
    pub max_residual: f64,
    pub discarded_edge_levels: usize,
}

fn by_magnitude(a: &C, b: &C) -> std::cmp::Ordering {
    a.norm()
        .total_cmp(&b.norm())
        .then(a.re.total_cmp(&b.re))
        .then(a.im.total_cmp(&b.im))
}

pub fn classify_spectrum(spectrum: &Spectrum, opts: &ClassifyOptions) -> Result<SpectrumReport, SpectralError> {
    if spectrum.is_empty() {
        return Err(SpectralError::Empty);
    }
    let thr = opts.threshold();
    let mut sorted = spectrum.values.clone();
    sorted.sort_by(by_magnitude);
    let total = sorted.len();
    let discarded = (opts.edge.zero_modes + opts.edge.top).min(total);
    let end = total.saturating_sub(opts.edge.top).max(opts.edge.zero_modes.min(total));
    let retained: Vec<C> = sorted[opts.edge.zero_modes.min(total)..end].to_vec();
    if retained.is_empty() {
        return Err(SpectralError::NothingRetained { total, discarded });
    }

    let mut used = vec![false; retained.len()];
    let mut pairs = Vec::new();
    let mut unpaired = Vec::new();
    for i in 0..retained.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let partner = (i + 1..retained.len())
            .filter(|&j| !used[j])
            .min_by(|&j, &k| (retained[i] + retained[j]).norm().total_cmp(&(retained[i] + retained[k]).norm()))
            .filter(|&j| (retained[i] + retained[j]).norm() <= thr);
        match partner {
            Some(j) => {
                used[j] = true;
                let (a, b) = (retained[i], retained[j]);
                let a_first = if (a.re - b.re).abs() > thr { a.re > b.re } else { a.im >= b.im };
                pairs.push(if a_first { (a, b) } else { (b, a) });
            }
            None => unpaired.push(retained[i]),
        }
    }

    let is_real = |e: &C| e.im.abs() <= thr;
    let n_real = retained.iter().filter(|e| is_real(e)).count();
    let n_complex_pairs = pairs.iter().filter(|(a, b)| !is_real(a) || !is_real(b)).count();
    let verdict = if retained.iter().any(|e| e.norm() <= thr) {
        PhaseVerdict::Critical
    } else if n_real < retained.len() {
        PhaseVerdict::Broken
    } else {
        PhaseVerdict::Unbroken
    };
    Ok(SpectrumReport {
        eigenvalues: spectrum.values.clone(),
        retained,
        pairs,
        unpaired,
        n_real,
        n_complex_pairs,
        verdict,
        max_residual: spectrum.max_residual(),
        discarded_edge_levels: discarded,
    })
}
