//! Analytic eigenstates as polynomial × Gaussian spinors, with their
//! eigen-equation and second-order residuals.
//!
//! ```text
//! cargo run --example exact_states
//! ```

use num::complex::Complex64;
use ptdirac::opalg::{analytic_state, build_hamiltonian, eigen_residual, reduced_equation_residual, Couplings};
use ptdirac::params::{Branch, PhysParams, Valley};

fn main() {
    let p = PhysParams::reference(0.5);
    let k = Couplings::<Complex64>::from_params(&p);

    let ground = analytic_state(Branch::I, Valley::Primary, 0, &k, Complex64::new(1.0, 0.0)).unwrap();
    println!("branch I, n = 0, canonical text form:");
    print!("{}", ground.to_text());

    for valley in [Valley::Primary, Valley::TimeReversed] {
        let h = build_hamiltonian(&k, valley);
        for branch in [Branch::I, Branch::II] {
            let worst = (0..=10)
                .map(|n| {
                    let s = analytic_state(branch, valley, n, &k, Complex64::new(1.0, 0.0)).unwrap();
                    let e = s.energy.unwrap();
                    eigen_residual(&h, &s, &e).max(reduced_equation_residual(&h, &s, &e))
                })
                .fold(0.0, f64::max);
            println!("{valley:?} {branch:?}: worst residual over n <= 10 is {worst:.2e}");
        }
    }
}
