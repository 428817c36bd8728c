//! Time reversal maps `H` onto the other valley, and the other valley's
//! states are the primary states with `A ↔ B`, `C₁ ↔ C₂`.
//!
//! ```text
//! cargo run --example valley_relation
//! ```

use num::complex::Complex64;
use ptdirac::opalg::{analytic_state, build_hamiltonian, time_reversal_conjugate, Couplings};
use ptdirac::params::{Branch, PhysParams, Valley};

fn main() {
    let p = PhysParams::reference(0.5);
    let k = Couplings::<Complex64>::from_params(&p);
    let h = build_hamiltonian(&k, Valley::Primary);
    let h_tilde = build_hamiltonian(&k, Valley::TimeReversed);
    println!("|T H T^-1 - H~| = {:e}", time_reversal_conjugate(&h).distance(&h_tilde));

    let swapped = k.swap_valleys();
    let one = Complex64::new(1.0, 0.0);
    for n in 0..4 {
        let direct = analytic_state(Branch::II, Valley::TimeReversed, n, &k, one).unwrap();
        let relabeled = analytic_state(Branch::I, Valley::Primary, n, &swapped, one).unwrap();
        println!(
            "n = {n}: E = {:.6}, |state difference| = {:e}",
            direct.energy.unwrap(),
            direct.sub(&relabeled).max_abs()
        );
    }
}
