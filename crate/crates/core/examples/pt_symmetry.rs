//! PT eigenfactors of the analytic states, and the commutators of both
//! antilinear maps with the Hamiltonian. A real `σ_x (z + z̄)` term breaks
//! the symmetry and the residual jumps.
//!
//! ```text
//! cargo run --example pt_symmetry
//! ```

use num::complex::Complex64;
use ptdirac::cli::report::Cx;
use ptdirac::opalg::operator::sigma_x;
use ptdirac::opalg::{
    analytic_state, build_hamiltonian, pt_commutator_residual, pt_eigenfactor, standard_probes, Couplings,
    OperatorExpr, Primitive, PtKind, ScalarOp,
};
use ptdirac::params::{derive_coeffs, Branch, PhysParams, Valley};

fn main() {
    let one = Complex64::new(1.0, 0.0);
    for lambda in [0.5, 1.8] {
        let p = PhysParams::reference(lambda);
        let k = Couplings::<Complex64>::from_params(&p);
        println!("lambda = {lambda}");
        for n in 0..4 {
            let s = analytic_state(Branch::I, Valley::Primary, n, &k, one).unwrap();
            let f1 = pt_eigenfactor(PtKind::P1T, &s).unwrap();
            let f2 = pt_eigenfactor(PtKind::P2T, &s).unwrap();
            let show = |f: Option<Complex64>| f.map_or("none".to_string(), |f| Cx::from(f).to_string());
            println!("  n = {n}: P1T factor {}, P2T factor {}", show(f1), show(f2));
        }
    }

    let p = PhysParams::reference(0.5);
    let d = derive_coeffs(&p);
    let h = build_hamiltonian(&Couplings::from(&d), Valley::Primary);
    let probes = standard_probes(d.d1(Branch::I).unwrap(), 50, 1);
    let bump = OperatorExpr::kron(&sigma_x(), &ScalarOp::prim(Primitive::Z).add(&ScalarOp::prim(Primitive::Zbar)));
    let perturbed = h.add(&bump.scale(&Complex64::new(1e-3, 0.0)));
    for kind in [PtKind::P1T, PtKind::P2T] {
        println!(
            "{kind:?}: [PT, H] residual {:.2e}, perturbed {:.2e}",
            pt_commutator_residual(&h, kind, &probes),
            pt_commutator_residual(&perturbed, kind, &probes)
        );
    }
}
