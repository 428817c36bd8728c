//! The same identities over exact rationals extended by one square root:
//! residuals are literal zeros, not round-off.
//!
//! ```text
//! cargo run --example rational_mode
//! ```

use ptdirac::opalg::{
    analytic_state, build_hamiltonian, eigen_residual, jc_verify, lll_annihilation_residual, Couplings, Exact,
    Scalar,
};
use ptdirac::params::{Branch, PhysParams, Valley};

fn main() {
    // floats enter at their exact binary value
    let p = PhysParams::reference(0.5);
    let k = Couplings::<Exact>::from_params(&p);
    let h = build_hamiltonian(&k, Valley::Primary);

    for n in 0..3 {
        let s = analytic_state(Branch::I, Valley::Primary, n, &k, Exact::one()).unwrap();
        let e = s.energy.clone().unwrap();
        println!("n = {n}: E ≈ {:.12}, residual {}", e.to_c64().re, eigen_residual(&h, &s, &e));
    }
    let lll = (0..=20).map(|l| lll_annihilation_residual(l, &k, Valley::Primary).unwrap()).fold(0.0, f64::max);
    println!("LLL l <= 20: worst residual {lll}");
    let jc = jc_verify(&k, 6).unwrap();
    println!("ladder commutator {}, JC factorization {}", jc.commutator_residual, jc.factorization_residual);
}
