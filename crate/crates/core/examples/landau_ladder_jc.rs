//! Lowest Landau level, the pseudo-bosonic ladder and the Jaynes-Cummings
//! form of the Hamiltonian.
//!
//! ```text
//! cargo run --example landau_ladder_jc
//! ```

use num::complex::Complex64;
use ptdirac::opalg::{jc_verify, ladder_raise, lll_annihilation_residual, lll_state, Couplings};
use ptdirac::params::{PhysParams, Valley};

fn main() {
    let p = PhysParams::reference(0.5);
    let k = Couplings::<Complex64>::from_params(&p);

    for l in 0..4 {
        println!("LLL l = {l}: |Q1 chi| = {:e}", lll_annihilation_residual(l, &k, Valley::Primary).unwrap());
    }

    let raised = ladder_raise(&lll_state(1, &k, Valley::Primary).unwrap(), 2, &k).unwrap();
    println!("Q2+^2 on the l = 1 level:");
    print!("{}", raised.to_text());

    let report = jc_verify(&k, 30).unwrap();
    println!("[Q1, Q2+] - 1 residual {:.2e}", report.commutator_residual);
    println!("H - sqrt(K)(s+ Q1 + s- Q2+) residual {:.2e}", report.factorization_residual);
}
