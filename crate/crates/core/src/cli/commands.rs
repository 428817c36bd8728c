//! The subcommands as plain functions from a [`RunConfig`] to a report.

use super::config::RunConfig;
use super::report::*;
use super::CliError;
use crate::opalg::operator::sigma_x;
use crate::opalg::{
    analytic_state, build_hamiltonian, component_hamiltonian, eigen_residual, jc_verify, lll_annihilation_residual,
    pt_commutator_residual, pt_eigenfactor, standard_probes, time_reversal_conjugate, Couplings, Exact,
    OpalgError, OperatorExpr, Primitive, PtKind, ScalarOp, SpinorFunction,
};
use crate::params::{
    classify_phase, critical_point, derive_coeffs, level_energy, mass_gap, normalizability, principal_sqrt, Branch,
    PhaseVerdict, PhysParams, Valley, Vary,
};
use crate::spectral::{
    build_truncated, classify_spectrum, dump_matrix, eigensolve, find_exceptional_point_with, numerical_report,
    scramble, ClassifyOptions, OracleOptions, SpectralError, CERTIFICATE_TOL,
};
use num::complex::Complex64;
use rayon::prelude::*;
use std::path::Path;

type C = Complex64;

/// Threshold of every symbolic identity check.
pub const IDENTITY_TOL: f64 = 1e-12;
/// Threshold of the matrix-oracle agreement.
pub const ORACLE_TOL: f64 = 1e-8;
/// Largest allowed gap between the analytic and bisected critical values.
pub const CRITICAL_AGREEMENT: f64 = 1e-4;

const BRANCHES: [Branch; 2] = [Branch::I, Branch::II];
const VALLEYS: [Valley; 2] = [Valley::Primary, Valley::TimeReversed];

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

fn oracle_options(cfg: &RunConfig) -> OracleOptions {
    OracleOptions {
        n_tr: cfg.n_tr,
        branch: cfg.branch,
        valley: cfg.valley,
        tol: cfg.tol,
    }
}

/// `±√((n+1)K)` (branch I) or `±√(−(n+1)K)` (branch II) for `n < levels`.
pub fn closed_form_ladder(p: &PhysParams, levels: usize, branch: Branch) -> Vec<C> {
    (0..levels)
        .flat_map(|n| {
            let (a, b) = level_energy(p, n, branch);
            [a, b]
        })
        .collect()
}

/// Worst distance from an expected value to the nearest computed one,
/// relative to `max(|expected|, floor)`.
pub fn oracle_error(computed: &[C], expected: &[C], floor: f64) -> f64 {
    expected
        .iter()
        .map(|e| computed.iter().map(|x| (x - e).norm()).fold(f64::INFINITY, f64::min) / e.norm().max(floor))
        .fold(0.0, f64::max)
}

// ---------------------------------------------------------------- analytic

pub fn analytic(cfg: &RunConfig) -> AnalyticReport {
    let p = cfg.params;
    let d = derive_coeffs(&p);
    let tol = p.default_tolerance();
    let branches = BRANCHES
        .iter()
        .map(|&b| BranchSummary {
            branch: branch_label(b).into(),
            verdict: classify_phase(&p, b, tol),
            normalizable: normalizability(&p, b).ok(),
            envelope: d.d1(b),
        })
        .collect();
    let levels = BRANCHES
        .iter()
        .flat_map(|&b| {
            (0..cfg.n_max).map(move |n| {
                let (e_plus, e_minus) = level_energy(&p, n, b);
                LevelRow {
                    n,
                    branch: branch_label(b).into(),
                    e_plus: e_plus.into(),
                    e_minus: e_minus.into(),
                }
            })
        })
        .collect();
    AnalyticReport {
        params: p,
        coeffs: d,
        mass_gap: mass_gap(&p).into(),
        lambda_c: critical_point(&p, Vary::Lambda).ok().flatten(),
        b0_c: critical_point(&p, Vary::B0).ok().flatten(),
        branches,
        levels,
    }
}

// ---------------------------------------------------------------- verify

struct Checks(Vec<Check>);

impl Checks {
    fn push(&mut self, name: impl Into<String>, residual: f64, threshold: f64) {
        let residual = if residual.is_finite() { residual } else { f64::MAX };
        self.0.push(Check {
            name: name.into(),
            residual,
            threshold,
            passed: residual <= threshold,
        });
    }
}

fn sector(branch: Branch, valley: Valley) -> String {
    format!("branch {} {}", branch_label(branch), valley_label(valley))
}

fn degenerate_notice(branch: Branch, what: &str) -> String {
    match branch {
        Branch::I => format!("degenerate A=0: branch I {what} skipped"),
        Branch::II => format!("degenerate B=0: branch II {what} skipped"),
    }
}

/// Expected `P₁T` factor of level `n`: `i(−1)ⁿ` on the holomorphic states,
/// `−i(−1)ⁿ` on the anti-holomorphic ones. `P₂T` gives `−1` on both.
pub fn expected_p1t_factor(branch: Branch, valley: Valley, n: usize) -> C {
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    match (branch, valley) {
        (Branch::I, Valley::Primary) | (Branch::II, Valley::TimeReversed) => c(0.0, sign),
        _ => c(0.0, -sign),
    }
}

fn spinor_scale(s: &SpinorFunction<C>) -> f64 {
    s.max_abs().max(1.0)
}

/// Runs every symbolic identity and the matrix oracle at the configured point.
/// `perturb` adds `ε σ_x (z + z̄)` to both Hamiltonians.
pub fn verify(cfg: &RunConfig, perturb: Option<f64>) -> VerifyReport {
    let p = cfg.params;
    let d = derive_coeffs(&p);
    let k = Couplings::from(&d);
    let mut checks = Checks(Vec::new());
    let mut notices = Vec::new();
    let op_scale = [d.a_coef * d.hbar, d.b_coef * d.hbar, d.c1, d.c2]
        .iter()
        .fold(1.0_f64, |m, x| m.max(x.abs()));

    let extra = perturb.map(|eps| {
        let x = ScalarOp::prim(Primitive::Z).add(&ScalarOp::prim(Primitive::Zbar));
        OperatorExpr::kron(&sigma_x(), &x).scale(&c(eps, 0.0))
    });
    if let Some(eps) = perturb {
        notices.push(format!("perturbation {eps} σ_x (z + z̄) added to H and H̃"));
    }
    let ham = |valley: Valley| {
        let h = build_hamiltonian(&k, valley);
        match &extra {
            Some(x) => h.add(x),
            None => h,
        }
    };
    let (h, h_tilde) = (ham(Valley::Primary), ham(Valley::TimeReversed));

    checks.push(
        "compact form = component form",
        h.distance(&component_hamiltonian::<C>(&p)) / op_scale,
        IDENTITY_TOL,
    );

    let envelope = d.d1(Branch::I).or(d.d1(Branch::II)).unwrap_or(-0.1);
    let probes = standard_probes(envelope, 50, cfg.seed);
    let probe_scale = |op: &OperatorExpr<C>| probes.iter().map(|q| spinor_scale(&op.apply(q))).fold(1.0, f64::max);
    for (name, op) in [("H", &h), ("H~", &h_tilde)] {
        for kind in [PtKind::P1T, PtKind::P2T] {
            checks.push(
                format!("[{kind:?}, {name}] = 0"),
                pt_commutator_residual(op, kind, &probes) / probe_scale(op),
                IDENTITY_TOL,
            );
        }
    }

    let thti = time_reversal_conjugate(&h);
    let t_probe = probes
        .iter()
        .map(|q| thti.apply(q).sub(&h_tilde.apply(q)).max_abs())
        .fold(0.0, f64::max);
    checks.push("T H T^-1 = H~", t_probe / probe_scale(&h_tilde), IDENTITY_TOL);

    let tol = p.default_tolerance();
    let swapped = k.swap_valleys();
    for branch in BRANCHES {
        if d.d1(branch).is_none() {
            notices.push(degenerate_notice(branch, "state checks"));
            continue;
        }
        let verdict = classify_phase(&p, branch, tol);
        for valley in VALLEYS {
            let op = if valley == Valley::Primary { &h } else { &h_tilde };
            let (mut eigen, mut factors) = (0.0_f64, 0.0_f64);
            for n in 0..=10 {
                let s = analytic_state(branch, valley, n, &k, c(1.0, 0.0)).expect("envelope checked");
                let e = s.energy.expect("energy attached");
                eigen = eigen.max(eigen_residual(op, &s, &e) / spinor_scale(&op.apply(&s)));
                let f1 = pt_eigenfactor(PtKind::P1T, &s).expect("nonzero state");
                let f2 = pt_eigenfactor(PtKind::P2T, &s).expect("nonzero state");
                let expected = (expected_p1t_factor(branch, valley, n), c(-1.0, 0.0));
                let miss = |f: Option<C>, want: C| f.map_or(1.0, |f| (f - want).norm());
                factors = factors.max(match verdict {
                    PhaseVerdict::Unbroken => miss(f1, expected.0).max(miss(f2, expected.1)),
                    PhaseVerdict::Broken => (f1.is_some() as u8 as f64).max(f2.is_some() as u8 as f64),
                    PhaseVerdict::Critical => 0.0,
                });
            }
            checks.push(format!("eigen-equation n<=10 {}", sector(branch, valley)), eigen, IDENTITY_TOL);
            checks.push(format!("PT factors ({verdict}) {}", sector(branch, valley)), factors, IDENTITY_TOL);
        }
        // a state of H̃ is the state of H built from the swapped couplings
        let mirror = match branch {
            Branch::I => Branch::II,
            Branch::II => Branch::I,
        };
        let swap = (0..=10)
            .map(|n| {
                let direct = analytic_state(mirror, Valley::TimeReversed, n, &k, c(1.0, 0.0));
                let via_swap = analytic_state(branch, Valley::Primary, n, &swapped, c(1.0, 0.0));
                match (direct, via_swap) {
                    (Ok(a), Ok(b)) => a.sub(&b).max_abs(),
                    _ => 0.0,
                }
            })
            .fold(0.0, f64::max);
        checks.push(format!("valley swap states branch {}", branch_label(branch)), swap, IDENTITY_TOL);
    }

    for valley in VALLEYS {
        let lll = (0..=20).map(|l| lll_annihilation_residual(l, &k, valley)).collect::<Result<Vec<_>, _>>();
        match lll {
            Ok(r) => checks.push(
                format!("LLL annihilated l<=20 {}", valley_label(valley)),
                r.into_iter().fold(0.0, f64::max) / op_scale,
                IDENTITY_TOL,
            ),
            Err(e) => notices.push(format!("LLL {} skipped: {e}", valley_label(valley))),
        }
    }

    match jc_verify(&k, 30) {
        Ok(r) => {
            checks.push("[Q1, Q2+] = 1 degree<=30", r.commutator_residual, IDENTITY_TOL);
            checks.push("JC factorization degree<=30", r.factorization_residual, IDENTITY_TOL);
        }
        Err(e) => notices.push(format!("ladder checks skipped: {e}")),
    }

    match spectral_check(cfg) {
        Ok((err, verdict)) => {
            checks.push(
                format!("matrix oracle n_tr={} {}", cfg.n_tr, sector(cfg.branch, cfg.valley)),
                err,
                ORACLE_TOL,
            );
            let analytic = classify_phase(&p, cfg.branch, tol);
            checks.push(
                format!("matrix verdict {verdict} = analytic {analytic}"),
                if verdict == analytic { 0.0 } else { 1.0 },
                0.0,
            );
        }
        Err(SpectralError::DegenerateBasis(b)) => notices.push(degenerate_notice(b, "matrix oracle")),
        Err(e) => checks.push(format!("matrix oracle: {e}"), f64::MAX, ORACLE_TOL),
    }

    let passed = checks.0.iter().all(|c| c.passed);
    VerifyReport {
        checks: checks.0,
        notices,
        passed,
    }
}

fn spectral_check(cfg: &RunConfig) -> Result<(f64, PhaseVerdict), SpectralError> {
    let rep = build_truncated(&derive_coeffs(&cfg.params), cfg.n_tr, cfg.branch, cfg.valley)?;
    let spectrum = eigensolve(&scramble(&rep, cfg.seed)?.matrix, CERTIFICATE_TOL)?;
    let opts = ClassifyOptions {
        tol: cfg.tol,
        ..ClassifyOptions::for_rep(&rep)
    };
    let report = classify_spectrum(&spectrum, &opts)?;
    let expected = closed_form_ladder(&cfg.params, cfg.n_tr - 2, cfg.branch);
    Ok((oracle_error(&report.retained, &expected, opts.threshold()), report.verdict))
}

// ---------------------------------------------------------------- spectrum

pub fn spectrum(cfg: &RunConfig, raw: bool, dump: Option<&Path>) -> Result<SpectrumOut, CliError> {
    let p = cfg.params;
    let rep = build_truncated(&derive_coeffs(&p), cfg.n_tr, cfg.branch, cfg.valley)?;
    let solved = if raw { rep.clone() } else { scramble(&rep, cfg.seed)? };
    if let Some(path) = dump {
        std::fs::write(path, dump_matrix(&solved.matrix)).map_err(|e| CliError::Output(format!("{}: {e}", path.display())))?;
    }
    let spec = eigensolve(&solved.matrix, CERTIFICATE_TOL)?;
    let opts = ClassifyOptions {
        tol: cfg.tol,
        ..ClassifyOptions::for_rep(&rep)
    };
    let report = classify_spectrum(&spec, &opts)?;
    let expected = closed_form_ladder(&p, cfg.n_tr - 2, cfg.branch);
    Ok(SpectrumOut {
        n_tr: cfg.n_tr,
        branch: branch_label(cfg.branch).into(),
        valley: valley_label(cfg.valley).into(),
        scrambled: solved.scrambled,
        verdict: report.verdict,
        analytic_verdict: classify_phase(&p, cfg.branch, p.default_tolerance()),
        n_real: report.n_real,
        n_complex_pairs: report.n_complex_pairs,
        discarded_edge_levels: report.discarded_edge_levels,
        max_residual: report.max_residual,
        oracle_error: oracle_error(&report.retained, &expected, opts.threshold()),
        pairs: report.pairs.iter().map(|&(a, b)| (a.into(), b.into())).collect(),
        unpaired: report.unpaired.iter().map(|&u| u.into()).collect(),
        eigenvalues: report.eigenvalues.iter().map(|&e| e.into()).collect(),
    })
}

// ---------------------------------------------------------------- sweep

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub vary: Vary,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
    pub log: bool,
    /// Matrix-oracle columns on every `decimate`-th grid point (and the last).
    pub numeric: Option<usize>,
}

impl SweepSpec {
    pub fn grid(&self) -> Result<Vec<f64>, CliError> {
        if !(self.from.is_finite() && self.to.is_finite()) || self.from >= self.to {
            return Err(CliError::Usage(format!("sweep needs from < to, got [{}, {}]", self.from, self.to)));
        }
        if self.steps < 2 {
            return Err(CliError::Usage("sweep needs at least 2 steps".into()));
        }
        if self.log && self.from <= 0.0 {
            return Err(CliError::Usage("log grid needs from > 0".into()));
        }
        let last = (self.steps - 1) as f64;
        Ok((0..self.steps)
            .map(|i| {
                let t = i as f64 / last;
                match (i, self.log) {
                    (0, _) => self.from,
                    (i, _) if i == self.steps - 1 => self.to,
                    (_, false) => self.from + t * (self.to - self.from),
                    (_, true) => 10f64.powf(self.from.log10() + t * (self.to.log10() - self.from.log10())),
                }
            })
            .collect())
    }
}

pub fn vary_label(v: Vary) -> &'static str {
    match v {
        Vary::Lambda => "lambda",
        Vary::B0 => "b0",
    }
}

pub fn sweep(cfg: &RunConfig, spec: &SweepSpec) -> Result<SweepOut, CliError> {
    let grid = spec.grid()?;
    let opts = oracle_options(cfg);
    let last = grid.len() - 1;
    let rows = grid
        .par_iter()
        .enumerate()
        .map(|(i, &x)| {
            let p = spec.vary.apply(&cfg.params, x);
            let verdict = classify_phase(&p, cfg.branch, p.default_tolerance());
            let gap = mass_gap(&p);
            let numeric = spec
                .numeric
                .filter(|&every| i % every.max(1) == 0 || i == last)
                .map(|_| numerical_report(&p, &opts).ok());
            (0..cfg.n_max)
                .map(|n| {
                    let (e_plus, e_minus) = level_energy(&p, n, cfg.branch);
                    SweepRow {
                        param: x,
                        n,
                        branch: branch_label(cfg.branch).into(),
                        e_plus: e_plus.into(),
                        e_minus: e_minus.into(),
                        gap: gap.into(),
                        verdict,
                        numeric: numeric.as_ref().map(|r| NumericCols {
                            e_plus: r.as_ref().and_then(|r| r.pairs.get(n)).map(|pair| pair.0.into()),
                            verdict: r.as_ref().map(|r| r.verdict),
                        }),
                    }
                })
                .collect::<Vec<_>>()
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    Ok(SweepOut {
        vary: vary_label(spec.vary).into(),
        numeric: spec.numeric.is_some(),
        rows,
    })
}

// ---------------------------------------------------------------- critical

pub fn critical(cfg: &RunConfig, vary: Vary, bracket: Option<(f64, f64)>, bisect_tol: f64) -> Result<CriticalReport, CliError> {
    let p = cfg.params;
    let analytic = critical_point(&p, vary).ok().flatten();
    let (lo, hi) = match (bracket, analytic) {
        (Some(b), _) => b,
        (None, Some(a)) => {
            let (x, y) = (0.5 * a, 1.5 * a);
            (x.min(y), x.max(y))
        }
        (None, None) => {
            return Err(CliError::Usage(format!(
                "no analytic {} transition to bracket; pass --lo and --hi",
                vary_label(vary)
            )))
        }
    };
    let numeric = match find_exceptional_point_with(&p, vary, lo, hi, bisect_tol, &oracle_options(cfg)) {
        Ok(x) => x,
        Err(e @ (SpectralError::NoTransition { .. } | SpectralError::InvalidBracket { .. })) => {
            return Err(CliError::Usage(e.to_string()))
        }
        Err(e) => return Err(e.into()),
    };
    let difference = analytic.map(|a| numeric - a);
    Ok(CriticalReport {
        vary: vary_label(vary).into(),
        analytic,
        numeric,
        difference,
        bracket: (lo, hi),
        agree: difference.is_none_or(|d| d.abs() <= CRITICAL_AGREEMENT),
    })
}

// ---------------------------------------------------------------- lll

pub fn lll(cfg: &RunConfig, l_max: u32) -> LllReport {
    let d = derive_coeffs(&cfg.params);
    let k = Couplings::from(&d);
    let exact = Couplings::<Exact>::from_params(&cfg.params);
    let scale = [d.a_coef * d.hbar, d.b_coef * d.hbar, d.c1, d.c2]
        .iter()
        .fold(1.0_f64, |m, x| m.max(x.abs()));
    let mut rows = Vec::new();
    let mut notices = Vec::new();
    for valley in VALLEYS {
        for l in 0..=l_max {
            match lll_annihilation_residual(l, &k, valley) {
                Ok(r) => rows.push(LllRow {
                    l,
                    valley: valley_label(valley).into(),
                    residual: r / scale,
                    exact_residual: lll_annihilation_residual(l, &exact, valley).ok(),
                }),
                Err(e) => {
                    notices.push(format!("{} valley skipped: {e}", valley_label(valley)));
                    break;
                }
            }
        }
    }
    let passed = rows.iter().all(|r| r.residual <= IDENTITY_TOL && r.exact_residual.is_none_or(|x| x == 0.0));
    LllReport { rows, notices, passed }
}

// ---------------------------------------------------------------- jc

pub fn jc(cfg: &RunConfig, degree: u32, exact_degree: u32) -> Result<JcOut, CliError> {
    let d = derive_coeffs(&cfg.params);
    let float = jc_verify(&Couplings::from(&d), degree).map_err(ladder_error)?;
    let exact = jc_verify(&Couplings::<Exact>::from_params(&cfg.params), exact_degree).map_err(ladder_error)?;
    let passed = float.commutator_residual <= IDENTITY_TOL
        && float.factorization_residual <= IDENTITY_TOL
        && exact.commutator_residual == 0.0
        && exact.factorization_residual == 0.0;
    Ok(JcOut {
        sqrt_k: principal_sqrt(d.k_coef).into(),
        degree,
        commutator_residual: float.commutator_residual,
        factorization_residual: float.factorization_residual,
        exact_degree,
        exact_commutator_residual: exact.commutator_residual,
        exact_factorization_residual: exact.factorization_residual,
        passed,
    })
}

fn ladder_error(e: OpalgError) -> CliError {
    CliError::Failure(e.to_string())
}
