//! The truncated ladder matrix, hidden behind a random similarity and
//! diagonalized densely, against the closed-form levels.
//!
//! ```text
//! cargo run --example truncated_oracle
//! ```

use ptdirac::params::{derive_coeffs, level_energy, Branch, PhysParams, Valley};
use ptdirac::spectral::{build_truncated, classify_spectrum, eigensolve, scramble, ClassifyOptions, CERTIFICATE_TOL};

fn main() {
    for lambda in [0.5, 1.8] {
        let p = PhysParams::reference(lambda);
        let rep = build_truncated(&derive_coeffs(&p), 40, Branch::I, Valley::Primary).unwrap();
        let mixed = scramble(&rep, 7).unwrap();
        let spectrum = eigensolve(&mixed.matrix, CERTIFICATE_TOL).unwrap();
        let report = classify_spectrum(&spectrum, &ClassifyOptions::for_rep(&rep)).unwrap();

        println!("lambda = {lambda}: verdict {}, max certificate {:.1e}", report.verdict, report.max_residual);
        for (n, (plus, _)) in report.pairs.iter().take(5).enumerate() {
            let exact = level_energy(&p, n, Branch::I).0;
            println!("  n = {n}: matrix {plus:.10}  closed form {exact:.10}");
        }
    }
}
