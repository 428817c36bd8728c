//! Locates the transition by bisection on the numerical verdict and
//! compares with the closed form, in both directions.
//!
//! ```text
//! cargo run --example exceptional_point
//! ```

use ptdirac::params::{critical_point, PhysParams, Vary};
use ptdirac::spectral::find_exceptional_point;

fn main() {
    let p = PhysParams::reference(0.5);
    for (vary, lo, hi) in [(Vary::Lambda, 0.5, 1.8), (Vary::B0, 1.0, 20.0)] {
        let bisected = find_exceptional_point(&p, vary, lo, hi, 1e-8).unwrap();
        let analytic = critical_point(&p, vary).unwrap().unwrap();
        println!("{vary:?}: bisection {bisected:.8}, closed form {analytic:.8}");
    }

    // without the oscillator term the transition sits at the Fermi velocity
    let free = p.with_k1(0.0);
    let bisected = find_exceptional_point(&free, Vary::Lambda, 0.5, 2.0, 1e-8).unwrap();
    println!("K1 = 0: bisection {bisected:.8}, v_f = {}", free.v_f);
}
