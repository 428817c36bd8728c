//! Closed-form levels, mass gap, phase verdicts and critical values.
//!
//! ```text
//! cargo run --example analytic_spectrum
//! ```

use ptdirac::cli::report::Cx;
use ptdirac::params::{
    classify_phase, critical_point, derive_coeffs, level_energy, mass_gap, normalizability, Branch, PhysParams, Vary,
};

fn main() {
    for lambda in [0.5, 1.8] {
        let p = PhysParams::reference(lambda);
        let d = derive_coeffs(&p);
        println!("lambda = {lambda}");
        println!("  A = {:.6}  B = {:.6}  C1 = {:.6}  C2 = {:.6}", d.a_coef, d.b_coef, d.c1, d.c2);
        println!("  K = {:.6}  mass gap = {}", d.k_coef, Cx::from(mass_gap(&p)));
        for branch in [Branch::I, Branch::II] {
            let verdict = classify_phase(&p, branch, p.default_tolerance());
            let normalizable = normalizability(&p, branch).map_or("undefined".to_string(), |n| n.to_string());
            println!("  branch {branch:?}: {verdict}, normalizable {normalizable}");
            for n in 0..3 {
                let (plus, minus) = level_energy(&p, n, branch);
                println!("    n = {n}: E+ = {}  E- = {}", Cx::from(plus), Cx::from(minus));
            }
        }
    }

    let p = PhysParams::reference(0.5);
    let lambda_c = critical_point(&p, Vary::Lambda).unwrap();
    let b0_c = critical_point(&p, Vary::B0).unwrap();
    println!("critical lambda at B0 = {}: {lambda_c:?}", p.b0);
    println!("critical B0 at lambda = {}: {b0_c:?}", p.lambda);
}
