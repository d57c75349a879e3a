//! Quantum trajectory of a packet in a quartic well, summed from the Taylor
//! series of its moments about t = 0. Writes CSV to standard output.

use mepacket::dynamics::{evolve_taylor, taylor_derivatives_quantum, Engine, PolynomialPotential, TaylorConfig};
use mepacket::Dof;

fn main() -> mepacket::Result<()> {
    let dof = Dof::new(0.5, 0.0, 1.0, 1.0);
    // V(q) = q^2/2 + 0.3 q^4/4!
    let pot = PolynomialPotential::new(1.0, vec![0.0, 0.0, 1.0, 0.0, 0.3])?;

    let d = taylor_derivatives_quantum(&dof, 1.0, &pot, 4)?;
    eprintln!("dP/dt at 0 = {:.6}, d dQ/dt at 0 = {:.1e}", d.p[1], d.dq[1]);

    let times: Vec<f64> = (0..=12).map(|i| 0.05 * i as f64).collect();
    let rec = evolve_taylor(&dof, 1.0, &pot, Engine::Quantum, &times, &TaylorConfig::default())?;
    for line in &rec.diagnostics {
        eprintln!("{line}");
    }
    print!("{}", rec.to_csv_string()?);
    Ok(())
}
