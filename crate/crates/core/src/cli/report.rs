//! Report types emitted by the subcommands, with text and CSV renderings.
//! JSON goes through serde; floats use the shortest round-trip form in
//! every format.

use crate::params::{Branch, DerivedCoeffs, PhaseVerdict, PhysParams, Valley};
use num::complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt::{self, Write as _};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cx {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for Cx {
    fn from(c: Complex64) -> Self {
        // drop the sign of zero so that `±0` prints as `0`
        Self {
            re: c.re + 0.0,
            im: c.im + 0.0,
        }
    }
}

impl fmt::Display for Cx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im == 0.0 {
            write!(f, "{}", self.re)
        } else if self.re == 0.0 {
            write!(f, "{}i", self.im)
        } else if self.im < 0.0 {
            write!(f, "{} - {}i", self.re, -self.im)
        } else {
            write!(f, "{} + {}i", self.re, self.im)
        }
    }
}

pub fn branch_label(b: Branch) -> &'static str {
    match b {
        Branch::I => "I",
        Branch::II => "II",
    }
}

pub fn valley_label(v: Valley) -> &'static str {
    match v {
        Valley::Primary => "primary",
        Valley::TimeReversed => "time-reversed",
    }
}

fn opt<T: fmt::Display>(x: &Option<T>) -> String {
    x.as_ref().map_or_else(|| "-".into(), |v| v.to_string())
}

/// Text and CSV renderings; JSON is derived.
pub trait Render: Serialize {
    fn text(&self) -> String;
    fn csv(&self) -> String;
}

// ---------------------------------------------------------------- analytic

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelRow {
    pub n: usize,
    pub branch: String,
    pub e_plus: Cx,
    pub e_minus: Cx,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchSummary {
    pub branch: String,
    pub verdict: PhaseVerdict,
    /// `None` when the envelope exponent is undefined.
    pub normalizable: Option<bool>,
    pub envelope: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyticReport {
    pub params: PhysParams,
    pub coeffs: DerivedCoeffs,
    pub mass_gap: Cx,
    pub lambda_c: Option<f64>,
    pub b0_c: Option<f64>,
    pub branches: Vec<BranchSummary>,
    pub levels: Vec<LevelRow>,
}

impl Render for AnalyticReport {
    fn text(&self) -> String {
        let d = &self.coeffs;
        let mut s = String::new();
        let _ = writeln!(s, "A = {}  B = {}  C1 = {}  C2 = {}", d.a_coef, d.b_coef, d.c1, d.c2);
        let _ = writeln!(s, "K = {}", d.k_coef);
        let _ = writeln!(s, "mass gap = {}", self.mass_gap);
        let _ = writeln!(s, "critical lambda = {}", opt(&self.lambda_c));
        let _ = writeln!(s, "critical b0 = {}", opt(&self.b0_c));
        for b in &self.branches {
            let norm = match b.normalizable {
                Some(true) => "normalizable",
                Some(false) => "not normalizable",
                None => "envelope undefined",
            };
            let _ = writeln!(s, "branch {}: {} ({}, d1 = {})", b.branch, b.verdict, norm, opt(&b.envelope));
        }
        let _ = writeln!(s, "{:>3} {:>6}  {:<28} E-", "n", "branch", "E+");
        for r in &self.levels {
            let _ = writeln!(s, "{:>3} {:>6}  {:<28} {}", r.n, r.branch, r.e_plus.to_string(), r.e_minus);
        }
        s
    }

    fn csv(&self) -> String {
        let mut s = String::from("n,branch,re_E_plus,im_E_plus,re_E_minus,im_E_minus,verdict\n");
        for r in &self.levels {
            let verdict = self.branches.iter().find(|b| b.branch == r.branch).map(|b| b.verdict);
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{}",
                r.n,
                r.branch,
                r.e_plus.re,
                r.e_plus.im,
                r.e_minus.re,
                r.e_minus.im,
                opt(&verdict)
            );
        }
        s
    }
}

// ---------------------------------------------------------------- verify

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub threshold: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
    pub notices: Vec<String>,
    pub passed: bool,
}

impl VerifyReport {
    pub fn failing(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect()
    }
}

impl Render for VerifyReport {
    fn text(&self) -> String {
        let mut s = String::new();
        for n in &self.notices {
            let _ = writeln!(s, "note: {n}");
        }
        for c in &self.checks {
            let _ = writeln!(
                s,
                "{} {:<50} residual {:<10.3e} threshold {:.0e}",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.residual,
                c.threshold
            );
        }
        let failing = self.failing();
        if failing.is_empty() {
            let _ = writeln!(s, "all {} checks passed", self.checks.len());
        } else {
            let _ = writeln!(s, "failed: {}", failing.join(", "));
        }
        s
    }

    fn csv(&self) -> String {
        let mut s = String::from("check,residual,threshold,passed\n");
        for c in &self.checks {
            let _ = writeln!(s, "{},{},{},{}", c.name, c.residual, c.threshold, c.passed);
        }
        s
    }
}

// ---------------------------------------------------------------- spectrum

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumOut {
    pub n_tr: usize,
    pub branch: String,
    pub valley: String,
    pub scrambled: Option<u64>,
    pub verdict: PhaseVerdict,
    pub analytic_verdict: PhaseVerdict,
    pub n_real: usize,
    pub n_complex_pairs: usize,
    pub discarded_edge_levels: usize,
    pub max_residual: f64,
    /// Worst relative distance of a retained eigenvalue from `±√((n+1)K)`.
    pub oracle_error: f64,
    pub pairs: Vec<(Cx, Cx)>,
    pub unpaired: Vec<Cx>,
    pub eigenvalues: Vec<Cx>,
}

impl Render for SpectrumOut {
    fn text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "n_tr = {}  branch {}  {} valley  {}",
            self.n_tr,
            self.branch,
            self.valley,
            self.scrambled.map_or("unscrambled".into(), |seed| format!("scrambled (seed {seed})"))
        );
        let _ = writeln!(s, "verdict {} (analytic {})", self.verdict, self.analytic_verdict);
        let _ = writeln!(
            s,
            "{} real, {} complex pairs, {} edge eigenvalues discarded",
            self.n_real, self.n_complex_pairs, self.discarded_edge_levels
        );
        let _ = writeln!(s, "max certificate {:.3e}, oracle error {:.3e}", self.max_residual, self.oracle_error);
        for (i, (p, m)) in self.pairs.iter().enumerate() {
            let _ = writeln!(s, "{i:>3}  {:<28} {}", p.to_string(), m);
        }
        for u in &self.unpaired {
            let _ = writeln!(s, "unpaired {u}");
        }
        s
    }

    fn csv(&self) -> String {
        let mut s = String::from("level,re_E_plus,im_E_plus,re_E_minus,im_E_minus\n");
        for (i, (p, m)) in self.pairs.iter().enumerate() {
            let _ = writeln!(s, "{i},{},{},{},{}", p.re, p.im, m.re, m.im);
        }
        s
    }
}

// ---------------------------------------------------------------- sweep

pub const SWEEP_HEADER: &str = "param,n,branch,re_E_plus,im_E_plus,re_E_minus,im_E_minus,re_gap,im_gap,verdict";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NumericCols {
    pub e_plus: Option<Cx>,
    pub verdict: Option<PhaseVerdict>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub param: f64,
    pub n: usize,
    pub branch: String,
    pub e_plus: Cx,
    pub e_minus: Cx,
    pub gap: Cx,
    pub verdict: PhaseVerdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub numeric: Option<NumericCols>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepOut {
    pub vary: String,
    pub numeric: bool,
    pub rows: Vec<SweepRow>,
}

impl SweepOut {
    fn csv_body(&self) -> String {
        let mut s = String::from(SWEEP_HEADER);
        if self.numeric {
            s.push_str(",num_re_E_plus,num_im_E_plus,num_verdict");
        }
        s.push('\n');
        for r in &self.rows {
            let _ = write!(
                s,
                "{},{},{},{},{},{},{},{},{},{}",
                r.param, r.n, r.branch, r.e_plus.re, r.e_plus.im, r.e_minus.re, r.e_minus.im, r.gap.re, r.gap.im, r.verdict
            );
            if self.numeric {
                match &r.numeric {
                    Some(NumericCols { e_plus, verdict }) => {
                        let (re, im) = e_plus.map_or((String::new(), String::new()), |e| (e.re.to_string(), e.im.to_string()));
                        let v = verdict.map_or("undefined".to_string(), |v| v.to_string());
                        let _ = write!(s, ",{re},{im},{v}");
                    }
                    None => s.push_str(",,,"),
                }
            }
            s.push('\n');
        }
        s
    }
}

impl Render for SweepOut {
    /// The sweep is tabular; text and CSV coincide.
    fn text(&self) -> String {
        self.csv_body()
    }

    fn csv(&self) -> String {
        self.csv_body()
    }
}

// ---------------------------------------------------------------- critical

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalReport {
    pub vary: String,
    pub analytic: Option<f64>,
    pub numeric: f64,
    pub difference: Option<f64>,
    pub bracket: (f64, f64),
    pub agree: bool,
}

impl Render for CriticalReport {
    fn text(&self) -> String {
        format!(
            "{}: analytic {}  bisection {}  difference {}  bracket [{}, {}]  {}\n",
            self.vary,
            opt(&self.analytic),
            self.numeric,
            self.difference.map_or("-".into(), |d| format!("{d:.3e}")),
            self.bracket.0,
            self.bracket.1,
            if self.agree { "agree" } else { "DISAGREE" }
        )
    }

    fn csv(&self) -> String {
        format!(
            "vary,analytic,numeric,difference,lo,hi,agree\n{},{},{},{},{},{},{}\n",
            self.vary,
            self.analytic.map_or(String::new(), |x| x.to_string()),
            self.numeric,
            self.difference.map_or(String::new(), |x| x.to_string()),
            self.bracket.0,
            self.bracket.1,
            self.agree
        )
    }
}

// ---------------------------------------------------------------- lll

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LllRow {
    pub l: u32,
    pub valley: String,
    pub residual: f64,
    /// Residual in exact arithmetic; `None` if the envelope is undefined.
    pub exact_residual: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LllReport {
    pub rows: Vec<LllRow>,
    pub notices: Vec<String>,
    pub passed: bool,
}

impl Render for LllReport {
    fn text(&self) -> String {
        let mut s = String::new();
        for n in &self.notices {
            let _ = writeln!(s, "note: {n}");
        }
        let _ = writeln!(s, "{:>3} {:<14} {:<12} exact", "l", "valley", "residual");
        for r in &self.rows {
            let _ = writeln!(s, "{:>3} {:<14} {:<12.3e} {}", r.l, r.valley, r.residual, opt(&r.exact_residual));
        }
        s
    }

    fn csv(&self) -> String {
        let mut s = String::from("l,valley,residual,exact_residual\n");
        for r in &self.rows {
            let exact = r.exact_residual.map_or(String::new(), |x| x.to_string());
            let _ = writeln!(s, "{},{},{},{}", r.l, r.valley, r.residual, exact);
        }
        s
    }
}

// ---------------------------------------------------------------- jc

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JcOut {
    pub sqrt_k: Cx,
    pub degree: u32,
    pub commutator_residual: f64,
    pub factorization_residual: f64,
    pub exact_degree: u32,
    pub exact_commutator_residual: f64,
    pub exact_factorization_residual: f64,
    pub passed: bool,
}

impl Render for JcOut {
    fn text(&self) -> String {
        format!(
            "sqrt(K) = {}\n[Q1, Q2+] = 1 on degree <= {}: residual {:.3e} (exact, degree <= {}: {})\n\
             H = sqrt(K)(s+ Q1 + s- Q2+): residual {:.3e} (exact: {})\n",
            self.sqrt_k,
            self.degree,
            self.commutator_residual,
            self.exact_degree,
            self.exact_commutator_residual,
            self.factorization_residual,
            self.exact_factorization_residual
        )
    }

    fn csv(&self) -> String {
        format!(
            "degree,commutator_residual,factorization_residual,exact_commutator_residual,exact_factorization_residual\n{},{},{},{},{}\n",
            self.degree,
            self.commutator_residual,
            self.factorization_residual,
            self.exact_commutator_residual,
            self.exact_factorization_residual
        )
    }
}
