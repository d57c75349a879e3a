//! Canonical commutation, symbolic expectations and Heisenberg iterates.

use mepacket::dynamics::symbolic::momentum_iterate_coefficient;
use mepacket::weyl::{quantum_expectation, Adjoint, Poly, SymbolicExpectation, WeylPoly};
use mepacket::Dof;

fn main() -> mepacket::Result<()> {
    let q = WeylPoly::<f64>::q();
    let p = WeylPoly::<f64>::p();
    // [q, p] = i hbar: a single term with h = 1
    println!("[q, p] = {:?}", q.commutator(&p).terms().collect::<Vec<_>>());

    // p^2 q^2 in normal (q before p) order picks up hbar corrections
    println!("p^2 q^2 = {:?}", WeylPoly::<f64>::word("ppqq").terms().collect::<Vec<_>>());

    let dof = Dof::new(0.3, 0.1, 1.0, 2.0);
    let x = WeylPoly::<f64>::word("qqpp").add(&WeylPoly::word("ppqq"));
    println!("<q^2 p^2 + p^2 q^2> at nu = 4: {:.10}", quantum_expectation(&x, &dof, 1.0, Adjoint::Require)?);

    let mut ex = SymbolicExpectation::new();
    let sym = ex.quantum(&WeylPoly::<Poly>::word("pqqp"), Adjoint::Require)?;
    println!("<p q^2 p> = {sym}");

    // q^6 term of the ninth Heisenberg derivative of p, pure cubic potential
    println!("q^6 coefficient = {}", momentum_iterate_coefficient(&[3], 9, 6, 0));
    Ok(())
}
