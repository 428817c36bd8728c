//! Polynomials in `z, z̄` times a Gaussian envelope, and two-component spinors
//! built from them.

use super::scalar::Scalar;
use super::OpalgError;
use num::complex::Complex64;
use std::collections::BTreeMap;
use std::fmt::Write as _;

/// `p(z, z̄)·e^{d z z̄}` with `p = Σ c_{mn} z^m z̄^n`.
///
/// Zero coefficients are never stored. Sums are only defined between values
/// sharing the same envelope exponent.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedPolynomial<S> {
    terms: BTreeMap<(u32, u32), S>,
    envelope: S,
}

impl<S: Scalar> WeightedPolynomial<S> {
    pub fn zero(envelope: S) -> Self {
        Self {
            terms: BTreeMap::new(),
            envelope,
        }
    }

    pub fn monomial(m: u32, n: u32, coeff: S, envelope: S) -> Self {
        let mut p = Self::zero(envelope);
        p.add_term(m, n, coeff);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = ((u32, u32), S)>>(terms: I, envelope: S) -> Self {
        let mut p = Self::zero(envelope);
        for ((m, n), c) in terms {
            p.add_term(m, n, c);
        }
        p
    }

    pub fn envelope(&self) -> &S {
        &self.envelope
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &S)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: u32, n: u32) -> S {
        self.terms.get(&(m, n)).cloned().unwrap_or_else(S::zero)
    }

    /// Number of stored (nonzero) terms.
    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|(m, n)| m + n).max()
    }

    /// Largest coefficient magnitude; the norm used for all residuals.
    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(S::magnitude).fold(0.0, f64::max)
    }

    pub fn add_term(&mut self, m: u32, n: u32, coeff: S) {
        if coeff.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&(m, n)) {
            Some(old) => old + coeff,
            None => coeff,
        };
        if !sum.is_zero() {
            self.terms.insert((m, n), sum);
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, OpalgError> {
        if self.envelope != other.envelope {
            return Err(OpalgError::EnvelopeMismatch);
        }
        let mut out = self.clone();
        for (&(m, n), c) in &other.terms {
            out.add_term(m, n, c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero(self.envelope.clone());
        for (&(m, n), v) in &self.terms {
            out.add_term(m, n, v.clone() * c.clone());
        }
        out
    }

    pub fn mul_z(&self) -> Self {
        self.shift(1, 0)
    }

    pub fn mul_zbar(&self) -> Self {
        self.shift(0, 1)
    }

    fn shift(&self, dm: u32, dn: u32) -> Self {
        Self {
            terms: self.terms.iter().map(|(&(m, n), c)| ((m + dm, n + dn), c.clone())).collect(),
            envelope: self.envelope.clone(),
        }
    }

    /// `∂_z (p e^{dzz̄}) = (∂_z p + d z̄ p) e^{dzz̄}`.
    pub fn d_z(&self) -> Self {
        let mut out = Self::zero(self.envelope.clone());
        for (&(m, n), c) in &self.terms {
            if m > 0 {
                out.add_term(m - 1, n, c.clone() * S::from_i64(m as i64));
            }
            out.add_term(m, n + 1, c.clone() * self.envelope.clone());
        }
        out
    }

    /// `∂_z̄ (p e^{dzz̄}) = (∂_z̄ p + d z p) e^{dzz̄}`.
    pub fn d_zbar(&self) -> Self {
        let mut out = Self::zero(self.envelope.clone());
        for (&(m, n), c) in &self.terms {
            if n > 0 {
                out.add_term(m, n - 1, c.clone() * S::from_i64(n as i64));
            }
            out.add_term(m + 1, n, c.clone() * self.envelope.clone());
        }
        out
    }

    /// Coefficient-wise map used by the antilinear symmetries.
    pub(crate) fn map_terms(&self, envelope: S, f: impl Fn(u32, u32, &S) -> ((u32, u32), S)) -> Self {
        let mut out = Self::zero(envelope);
        for (&(m, n), c) in &self.terms {
            let ((m2, n2), c2) = f(m, n, c);
            out.add_term(m2, n2, c2);
        }
        out
    }

    pub fn to_c64(&self) -> WeightedPolynomial<Complex64> {
        let mut out = WeightedPolynomial::zero(self.envelope.to_c64());
        for (&(m, n), c) in &self.terms {
            out.add_term(m, n, c.to_c64());
        }
        out
    }
}

impl<S: Scalar> std::ops::Add for &WeightedPolynomial<S> {
    type Output = WeightedPolynomial<S>;
    fn add(self, rhs: Self) -> WeightedPolynomial<S> {
        self.try_add(rhs).expect("envelope mismatch in polynomial sum")
    }
}

impl<S: Scalar> std::ops::Sub for &WeightedPolynomial<S> {
    type Output = WeightedPolynomial<S>;
    fn sub(self, rhs: Self) -> WeightedPolynomial<S> {
        self + &rhs.scale(&(-S::one()))
    }
}

/// Two-component spinor `(φ, χ)`. The `i` in front of the lower component is
/// part of `lower`'s coefficients. `energy` is stationary-state metadata; the
/// time phase `e^{−iEt/ħ}` is never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinorFunction<S> {
    pub upper: WeightedPolynomial<S>,
    pub lower: WeightedPolynomial<S>,
    pub energy: Option<S>,
}

impl<S: Scalar> SpinorFunction<S> {
    pub fn new(upper: WeightedPolynomial<S>, lower: WeightedPolynomial<S>) -> Result<Self, OpalgError> {
        if upper.envelope() != lower.envelope() {
            return Err(OpalgError::EnvelopeMismatch);
        }
        Ok(Self {
            upper,
            lower,
            energy: None,
        })
    }

    pub fn with_energy(mut self, e: S) -> Self {
        self.energy = Some(e);
        self
    }

    pub fn zero(envelope: S) -> Self {
        Self {
            upper: WeightedPolynomial::zero(envelope.clone()),
            lower: WeightedPolynomial::zero(envelope),
            energy: None,
        }
    }

    pub fn envelope(&self) -> &S {
        self.upper.envelope()
    }

    pub fn component(&self, i: usize) -> &WeightedPolynomial<S> {
        match i {
            0 => &self.upper,
            1 => &self.lower,
            _ => panic!("spinor has two components"),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.upper.is_zero() && self.lower.is_zero()
    }

    pub fn max_abs(&self) -> f64 {
        self.upper.max_abs().max(self.lower.max_abs())
    }

    /// Scales the spatial part; energy metadata is kept.
    pub fn scale(&self, c: &S) -> Self {
        Self {
            upper: self.upper.scale(c),
            lower: self.lower.scale(c),
            energy: self.energy.clone(),
        }
    }

    /// Sum of the spatial parts; the result carries no energy.
    pub fn try_add(&self, other: &Self) -> Result<Self, OpalgError> {
        Ok(Self {
            upper: self.upper.try_add(&other.upper)?,
            lower: self.lower.try_add(&other.lower)?,
            energy: None,
        })
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.try_add(&other.scale(&(-S::one())))
            .expect("envelope mismatch in spinor difference")
    }

    pub fn to_c64(&self) -> SpinorFunction<Complex64> {
        SpinorFunction {
            upper: self.upper.to_c64(),
            lower: self.lower.to_c64(),
            energy: self.energy.as_ref().map(S::to_c64),
        }
    }
}

// ---------------------------------------------------------------------------
// Canonical text form
// ---------------------------------------------------------------------------

fn write_number(out: &mut String, x: f64) {
    let _ = write!(out, "{x}");
}

impl WeightedPolynomial<Complex64> {
    /// `d <value>` header followed by one `m n re im` line per coefficient in
    /// lexicographic exponent order. Floats use the shortest round-trip form.
    pub fn to_text(&self) -> String {
        let mut out = String::from("d ");
        write_number(&mut out, self.envelope.re);
        if self.envelope.im != 0.0 {
            out.push(' ');
            write_number(&mut out, self.envelope.im);
        }
        out.push('\n');
        for (&(m, n), c) in &self.terms {
            let _ = writeln!(out, "{m} {n} {} {}", c.re, c.im);
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, OpalgError> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| OpalgError::Parse("empty input".into()))?;
        let mut p = Self::zero(parse_envelope(header)?);
        for line in lines {
            let ((m, n), c) = parse_term(line)?;
            p.add_term(m, n, c);
        }
        Ok(p)
    }
}

fn parse_f64(tok: &str) -> Result<f64, OpalgError> {
    tok.parse::<f64>()
        .map_err(|_| OpalgError::Parse(format!("bad number `{tok}`")))
}

fn parse_envelope(line: &str) -> Result<Complex64, OpalgError> {
    let toks: Vec<&str> = line.split_whitespace().collect();
    match toks.as_slice() {
        ["d", re] => Ok(Complex64::new(parse_f64(re)?, 0.0)),
        ["d", re, im] => Ok(Complex64::new(parse_f64(re)?, parse_f64(im)?)),
        _ => Err(OpalgError::Parse(format!("expected `d <value>`, got `{line}`"))),
    }
}

fn parse_term(line: &str) -> Result<((u32, u32), Complex64), OpalgError> {
    let toks: Vec<&str> = line.split_whitespace().collect();
    let [m, n, re, im] = toks.as_slice() else {
        return Err(OpalgError::Parse(format!("expected `m n re im`, got `{line}`")));
    };
    let exp = |t: &str| {
        t.parse::<u32>()
            .map_err(|_| OpalgError::Parse(format!("bad exponent `{t}`")))
    };
    Ok(((exp(m)?, exp(n)?), Complex64::new(parse_f64(re)?, parse_f64(im)?)))
}

impl SpinorFunction<Complex64> {
    /// Optional `energy re im` line, then `upper` and `lower` sections each
    /// holding a polynomial in canonical text form.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Some(e) = self.energy {
            let _ = writeln!(out, "energy {} {}", e.re, e.im);
        }
        out.push_str("upper\n");
        out.push_str(&self.upper.to_text());
        out.push_str("lower\n");
        out.push_str(&self.lower.to_text());
        out
    }

    pub fn from_text(text: &str) -> Result<Self, OpalgError> {
        let mut energy = None;
        let mut sections: [Vec<&str>; 2] = [Vec::new(), Vec::new()];
        let mut current: Option<usize> = None;
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            match line {
                "upper" => current = Some(0),
                "lower" => current = Some(1),
                _ if line.starts_with("energy") && current.is_none() => {
                    let toks: Vec<&str> = line.split_whitespace().collect();
                    let [_, re, im] = toks.as_slice() else {
                        return Err(OpalgError::Parse(format!("bad energy line `{line}`")));
                    };
                    energy = Some(Complex64::new(parse_f64(re)?, parse_f64(im)?));
                }
                _ => match current {
                    Some(i) => sections[i].push(line),
                    None => return Err(OpalgError::Parse(format!("line outside a section: `{line}`"))),
                },
            }
        }
        let upper = WeightedPolynomial::from_text(&sections[0].join("\n"))?;
        let lower = WeightedPolynomial::from_text(&sections[1].join("\n"))?;
        let mut s = SpinorFunction::new(upper, lower)?;
        s.energy = energy;
        Ok(s)
    }
}
