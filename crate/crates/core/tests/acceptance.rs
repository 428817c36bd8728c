//! Acceptance criteria. Runs without the libtest harness so that every
//! criterion prints one PASS/FAIL line; exits nonzero if any fails.

mod common;

use common::{random_params, rng, worst_relative_error};
use num::complex::Complex64;
use ptdirac::opalg::{
    analytic_state, build_hamiltonian, eigen_residual, jc_verify, lll_annihilation_residual, pt_commutator_residual,
    pt_eigenfactor, standard_probes, time_reversal_conjugate, Couplings, Exact, PtKind, Scalar, SpinorFunction,
};
use ptdirac::params::{
    classify_phase, critical_point, derive_coeffs, level_energy, mass_gap, Branch, PhaseVerdict, PhysParams, Valley,
    Vary,
};
use ptdirac::spectral::{
    build_truncated, classify_spectrum, eigensolve, find_exceptional_point, scramble, ClassifyOptions,
    CERTIFICATE_TOL,
};
use rand::Rng;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

type C = Complex64;

const BRANCHES: [Branch; 2] = [Branch::I, Branch::II];
const VALLEYS: [Valley; 2] = [Valley::Primary, Valley::TimeReversed];

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn one() -> C {
    C::new(1.0, 0.0)
}

fn ladder(p: &PhysParams, levels: usize, branch: Branch) -> Vec<C> {
    (0..levels)
        .flat_map(|n| {
            let (a, b) = level_energy(p, n, branch);
            [a, b]
        })
        .collect()
}

fn bisect(p: &PhysParams, vary: Vary, lo: f64, hi: f64) -> Result<f64, String> {
    find_exceptional_point(p, vary, lo, hi, 1e-7).map_err(|e| e.to_string())
}

/// `max |coeff|` of the output, floored at 1, for relative residuals.
fn output_scale(outputs: impl IntoIterator<Item = SpinorFunction<C>>) -> f64 {
    outputs.into_iter().map(|s| s.max_abs()).fold(1.0, f64::max)
}

fn critical_lambda() -> Outcome {
    let p = PhysParams::reference(0.5);
    let analytic = critical_point(&p, Vary::Lambda).map_err(|e| e.to_string())?.ok_or("no analytic root")?;
    let numeric = bisect(&p, Vary::Lambda, 0.5, 1.8)?;
    let errs = ((analytic - 1.33193).abs(), (numeric - 1.33193).abs());
    ensure(errs.0 <= 1e-4 && errs.1 <= 1e-4, || format!("analytic {analytic}, bisection {numeric}"))?;
    Ok(format!("analytic {analytic:.7}, bisection {numeric:.7}"))
}

fn critical_field() -> Outcome {
    let p = PhysParams::reference(0.5);
    let analytic = critical_point(&p, Vary::B0).map_err(|e| e.to_string())?.ok_or("no analytic root")?;
    let numeric = bisect(&p, Vary::B0, 1.0, 20.0)?;
    let errs = ((analytic - 6.32209).abs(), (numeric - 6.32209).abs());
    ensure(errs.0 <= 1e-4 && errs.1 <= 1e-4, || format!("analytic {analytic}, bisection {numeric}"))?;
    Ok(format!("analytic {analytic:.7}, bisection {numeric:.7}"))
}

fn exact_eigenstates() -> Outcome {
    let mut r = rng(3);
    let (mut worst, mut exact_checked) = (0.0_f64, 0usize);
    for draw in 0..20 {
        let p = random_params(&mut r);
        let k = Couplings::<C>::from_params(&p);
        let q = Couplings::<Exact>::from_params(&p);
        for valley in VALLEYS {
            let h = build_hamiltonian(&k, valley);
            let hq = build_hamiltonian(&q, valley);
            for branch in BRANCHES {
                for n in 0..=10 {
                    let s = analytic_state(branch, valley, n, &k, one()).map_err(|e| e.to_string())?;
                    let e = s.energy.ok_or("no energy")?;
                    let res = eigen_residual(&h, &s, &e) / output_scale([h.apply(&s)]);
                    ensure(res <= 1e-12, || format!("draw {draw} {branch:?} {valley:?} n={n}: {res:e}"))?;
                    worst = worst.max(res);

                    let sq = analytic_state(branch, valley, n, &q, Exact::one()).map_err(|e| e.to_string())?;
                    let eq = sq.energy.clone().ok_or("no energy")?;
                    let exact = eigen_residual(&hq, &sq, &eq);
                    ensure(exact == 0.0, || {
                        format!("draw {draw} {branch:?} {valley:?} n={n}: exact residual {exact:e}")
                    })?;
                    exact_checked += 1;
                }
            }
        }
    }
    Ok(format!("worst float residual {worst:.2e}, {exact_checked} exact residuals all 0"))
}

fn pt_structure() -> Outcome {
    let tol = 1e-12;
    // branch I unbroken at λ = 0.5, branch II broken at the same point,
    // branch I broken past the transition
    let unbroken = PhysParams::reference(0.5);
    let past = PhysParams::reference(1.8);
    ensure(classify_phase(&unbroken, Branch::I, unbroken.default_tolerance()) == PhaseVerdict::Unbroken, || {
        "λ=0.5 not unbroken".into()
    })?;
    ensure(classify_phase(&past, Branch::I, past.default_tolerance()) == PhaseVerdict::Broken, || {
        "λ=1.8 not broken".into()
    })?;

    let k = Couplings::<C>::from_params(&unbroken);
    let mut worst_factor = 0.0_f64;
    for n in 0..=10 {
        let s = analytic_state(Branch::I, Valley::Primary, n, &k, one()).map_err(|e| e.to_string())?;
        let f1 = pt_eigenfactor(PtKind::P1T, &s).map_err(|e| e.to_string())?.ok_or(format!("no P1T factor n={n}"))?;
        let f2 = pt_eigenfactor(PtKind::P2T, &s).map_err(|e| e.to_string())?.ok_or(format!("no P2T factor n={n}"))?;
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let miss = (f1 - C::new(0.0, sign)).norm().max((f2 + one()).norm());
        ensure(miss <= tol, || format!("n={n}: P1T {f1}, P2T {f2}"))?;
        worst_factor = worst_factor.max(miss);
    }

    let mut absent = 0;
    for (p, branch) in [(&unbroken, Branch::II), (&past, Branch::I)] {
        let k = Couplings::<C>::from_params(p);
        for valley in VALLEYS {
            for n in 0..=10 {
                let s = analytic_state(branch, valley, n, &k, one()).map_err(|e| e.to_string())?;
                for kind in [PtKind::P1T, PtKind::P2T] {
                    let f = pt_eigenfactor(kind, &s).map_err(|e| e.to_string())?;
                    ensure(f.is_none(), || format!("{kind:?} factor {f:?} on broken {branch:?} {valley:?} n={n}"))?;
                    absent += 1;
                }
            }
        }
    }

    let mut worst_comm = 0.0_f64;
    let mut r = rng(4);
    let draws = std::iter::once(unbroken).chain(std::iter::once(past)).chain((0..10).map(|_| random_params(&mut r)));
    for (i, p) in draws.enumerate() {
        let d = derive_coeffs(&p);
        let k = Couplings::<C>::from(&d);
        let probes = standard_probes(d.d1(Branch::I).or(d.d1(Branch::II)).unwrap_or(-0.1), 50, i as u64);
        for valley in VALLEYS {
            let h = build_hamiltonian(&k, valley);
            let scale = output_scale(probes.iter().map(|q| h.apply(q)));
            for kind in [PtKind::P1T, PtKind::P2T] {
                let res = pt_commutator_residual(&h, kind, &probes) / scale;
                ensure(res <= tol, || format!("draw {i} {valley:?} {kind:?}: {res:e}"))?;
                worst_comm = worst_comm.max(res);
            }
        }
    }
    Ok(format!(
        "factor error {worst_factor:.1e}, {absent} broken states without factor, commutators {worst_comm:.1e}"
    ))
}

fn oracle_agreement() -> Outcome {
    let mut worst = 0.0_f64;
    for (lambda, seed) in [(0.5, 11), (1.8, 12)] {
        let p = PhysParams::reference(lambda);
        let rep = build_truncated(&derive_coeffs(&p), 40, Branch::I, Valley::Primary).map_err(|e| e.to_string())?;
        let s = eigensolve(&scramble(&rep, seed).map_err(|e| e.to_string())?.matrix, CERTIFICATE_TOL)
            .map_err(|e| e.to_string())?;
        let err = worst_relative_error(&s.values, &ladder(&p, 11, Branch::I));
        ensure(err <= 1e-8, || format!("λ={lambda}: relative error {err:e}"))?;
        let report = classify_spectrum(&s, &ClassifyOptions::for_rep(&rep)).map_err(|e| e.to_string())?;
        let expected = if lambda < 1.0 { PhaseVerdict::Unbroken } else { PhaseVerdict::Broken };
        ensure(report.verdict == expected, || format!("λ={lambda}: verdict {}", report.verdict))?;
        worst = worst.max(err);
    }

    let mut r = rng(5);
    let mut counts = [0usize; 2];
    for i in 0..100 {
        let p = random_params(&mut r);
        let branch = BRANCHES[r.random_range(0..2)];
        let valley = VALLEYS[r.random_range(0..2)];
        let rep = build_truncated(&derive_coeffs(&p), 40, branch, valley).map_err(|e| e.to_string())?;
        let s = eigensolve(&scramble(&rep, 100 + i).map_err(|e| e.to_string())?.matrix, CERTIFICATE_TOL)
            .map_err(|e| e.to_string())?;
        let verdict = classify_spectrum(&s, &ClassifyOptions::for_rep(&rep)).map_err(|e| e.to_string())?.verdict;
        let analytic = classify_phase(&p, branch, p.default_tolerance());
        ensure(verdict == analytic, || format!("sample {i}: matrix {verdict}, analytic {analytic}"))?;
        let err = worst_relative_error(&s.values, &ladder(&p, 11, branch));
        ensure(err <= 1e-8, || format!("sample {i}: relative error {err:e}"))?;
        worst = worst.max(err);
        counts[(verdict == PhaseVerdict::Broken) as usize] += 1;
    }
    Ok(format!(
        "worst relative error {worst:.1e}; 100/100 verdicts agree ({} unbroken, {} broken)",
        counts[0], counts[1]
    ))
}

fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

fn gap_scaling() -> Outcome {
    let mut slopes = Vec::new();
    for lambda in [0.0, 0.5] {
        let (xs, ys): (Vec<f64>, Vec<f64>) = (0..=40)
            .map(|i| {
                let b0 = 10f64.powf(3.0 + 2.0 * i as f64 / 40.0);
                let gap = mass_gap(&PhysParams::reference(lambda).with_b0(b0));
                (b0.ln(), gap)
            })
            .map(|(x, g)| (x, if g.im == 0.0 { g.re.ln() } else { f64::NAN }))
            .unzip();
        let slope = least_squares_slope(&xs, &ys);
        ensure((slope - 0.5).abs() <= 0.01, || format!("λ={lambda}: slope {slope}"))?;
        slopes.push(slope);
    }
    Ok(format!("slopes {:.5} (λ=0), {:.5} (λ=0.5)", slopes[0], slopes[1]))
}

fn special_cases() -> Outcome {
    let p = PhysParams::reference(0.5).with_k1(0.0);
    let lc = critical_point(&p, Vary::Lambda).map_err(|e| e.to_string())?.ok_or("no root")?;
    ensure(lc == p.v_f, || format!("λ_c = {lc} for K1 = 0"))?;
    let lc_numeric = bisect(&p, Vary::Lambda, 0.5, 2.0)?;
    ensure((lc_numeric - p.v_f).abs() <= 1e-6, || format!("bisected λ_c = {lc_numeric}"))?;

    let p = PhysParams::reference(0.0);
    let expected = 2.0 * p.k1 * p.c / p.e;
    let b0c = critical_point(&p, Vary::B0).map_err(|e| e.to_string())?.ok_or("no root")?;
    ensure((b0c - 5.48).abs() <= 1e-12 && (b0c - expected).abs() <= 1e-12, || format!("B0_c = {b0c}"))?;
    let b0c_numeric = bisect(&p, Vary::B0, 1.0, 20.0)?;
    ensure((b0c_numeric - 5.48).abs() <= 1e-4, || format!("bisected B0_c = {b0c_numeric}"))?;
    for b0 in [5.5, 6.0, 10.0, 100.0] {
        let q = p.with_b0(b0);
        let gap = mass_gap(&q);
        ensure(gap.im == 0.0 && gap.re > 0.0, || format!("gap {gap} at B0 = {b0}"))?;
        ensure(classify_phase(&q, Branch::I, q.default_tolerance()) == PhaseVerdict::Unbroken, || {
            format!("B0 = {b0} not unbroken")
        })?;
    }
    for b0 in [1.0, 3.0, 5.0, 5.47] {
        let q = p.with_b0(b0);
        ensure(classify_phase(&q, Branch::I, q.default_tolerance()) == PhaseVerdict::Broken, || {
            format!("B0 = {b0} not broken")
        })?;
        ensure(mass_gap(&q).re == 0.0, || format!("gap real at B0 = {b0}"))?;
    }
    Ok(format!(
        "K1=0: λ_c = v_f = {lc} (bisection {lc_numeric:.7}); λ=0: B0_c = {b0c} (bisection {b0c_numeric:.7})"
    ))
}

fn ladder_lll_jc() -> Outcome {
    let mut r = rng(6);
    let draws: Vec<PhysParams> = std::iter::once(PhysParams::reference(0.5))
        .chain(std::iter::once(PhysParams::reference(1.8)))
        .chain((0..3).map(|_| random_params(&mut r)))
        .collect();
    let (mut comm, mut fact) = (0.0_f64, 0.0_f64);
    for p in &draws {
        let report = jc_verify(&Couplings::<C>::from_params(p), 30).map_err(|e| e.to_string())?;
        comm = comm.max(report.commutator_residual);
        fact = fact.max(report.factorization_residual);
    }
    ensure(comm <= 1e-12, || format!("commutator residual {comm:e}"))?;
    ensure(fact <= 1e-12, || format!("factorization residual {fact:e}"))?;

    let mut lll = 0;
    for p in &draws {
        let q = Couplings::<Exact>::from_params(p);
        for valley in VALLEYS {
            for l in 0..=20 {
                let res = lll_annihilation_residual(l, &q, valley).map_err(|e| e.to_string())?;
                ensure(res == 0.0, || format!("LLL l={l} {valley:?}: {res:e}"))?;
                lll += 1;
            }
        }
    }
    Ok(format!("[Q1,Q2+] {comm:.1e}, JC {fact:.1e}, {lll} exact LLL residuals all 0"))
}

fn valley_consistency() -> Outcome {
    let mut r = rng(7);
    let (mut worst_t, mut worst_swap) = (0.0_f64, 0.0_f64);
    for draw in 0..20 {
        let p = random_params(&mut r);
        let d = derive_coeffs(&p);
        let k = Couplings::<C>::from(&d);
        let (h, h_tilde) = (build_hamiltonian(&k, Valley::Primary), build_hamiltonian(&k, Valley::TimeReversed));
        let thti = time_reversal_conjugate(&h);
        let probes = standard_probes(d.d1(Branch::I).unwrap_or(-0.1), 50, draw);
        let scale = output_scale(probes.iter().map(|q| h_tilde.apply(q)));
        let res = probes
            .iter()
            .map(|q| thti.apply(q).sub(&h_tilde.apply(q)).max_abs())
            .fold(0.0, f64::max)
            / scale;
        ensure(res <= 1e-12, || format!("draw {draw}: T H T^-1 - H~ = {res:e}"))?;
        worst_t = worst_t.max(res);

        // states of H~ are the states of H with A↔B, C1↔C2
        let swapped = k.swap_valleys();
        for (branch, mirror) in [(Branch::I, Branch::II), (Branch::II, Branch::I)] {
            for n in 0..=10 {
                let direct = analytic_state(mirror, Valley::TimeReversed, n, &k, one()).map_err(|e| e.to_string())?;
                let via = analytic_state(branch, Valley::Primary, n, &swapped, one()).map_err(|e| e.to_string())?;
                let diff = direct.sub(&via).max_abs() / direct.max_abs().max(1.0);
                let e = direct.energy.ok_or("no energy")?;
                let res = eigen_residual(&h_tilde, &direct, &e) / output_scale([h_tilde.apply(&direct)]);
                ensure(diff <= 1e-12 && res <= 1e-12, || {
                    format!("draw {draw} {branch:?} n={n}: swap {diff:e}, eigen {res:e}")
                })?;
                worst_swap = worst_swap.max(diff).max(res);
            }
        }
    }
    Ok(format!("T H T^-1 = H~ to {worst_t:.1e}; swap relation to {worst_swap:.1e}"))
}

struct Criterion {
    number: u32,
    title: &'static str,
    budget: Option<Duration>,
    run: fn() -> Outcome,
}

fn main() {
    let secs = |s| Some(Duration::from_secs(s));
    let criteria = [
        Criterion { number: 1, title: "critical coupling", budget: secs(5), run: critical_lambda },
        Criterion { number: 2, title: "critical field", budget: secs(5), run: critical_field },
        Criterion { number: 3, title: "exact eigen-solutions", budget: secs(10), run: exact_eigenstates },
        Criterion { number: 4, title: "PT structure", budget: None, run: pt_structure },
        Criterion { number: 5, title: "oracle agreement", budget: secs(60), run: oracle_agreement },
        Criterion { number: 6, title: "mass-gap scaling", budget: None, run: gap_scaling },
        Criterion { number: 7, title: "special cases", budget: None, run: special_cases },
        Criterion { number: 8, title: "ladder, LLL, JC", budget: None, run: ladder_lll_jc },
        Criterion { number: 9, title: "valley consistency", budget: None, run: valley_consistency },
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for c in &criteria {
        if !filter.is_empty() && !filter.iter().any(|f| c.title.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = match (outcome, c.budget) {
            (Ok(_), Some(b)) if elapsed > b => Err(format!("took {elapsed:.2?}, budget {b:.0?}")),
            (o, _) => o,
        };
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {} {:<22} {tag} [{elapsed:.2?}] {detail}", c.number, c.title);
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all acceptance criteria passed");
}
