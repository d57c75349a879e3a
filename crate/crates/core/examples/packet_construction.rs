//! Classical and quantum packets with the same means and spreads.

use mepacket::classical::{classical_entropy, classical_multipliers, ClassicalMEPacket};
use mepacket::qpacket::{build_truncated_state, dynamics_cutoff, QuantumMEPacket};
use mepacket::{Dof, PacketParams};

fn main() -> mepacket::Result<()> {
    let dof = Dof::new(0.5, -0.25, 1.5, 1.0);
    let params = PacketParams::single_with(dof, Default::default())?;

    let classical = ClassicalMEPacket::new(params.clone())?;
    let m = classical_multipliers(&params)?.per_dof[0];
    println!("classical: l1..l4 = {:.6} {:.6} {:.6} {:.6}", m.l1, m.l2, m.l3, m.l4);
    println!(
        "classical: entropy {:.6}, density at the mean {:.6}",
        classical_entropy(&params)?,
        classical.density(&[dof.q], &[dof.p])?
    );

    let quantum = QuantumMEPacket::new(params)?;
    println!("quantum: nu = {}, entropy {:.6}", dof.nu(1.0), quantum.entropy()?);

    // Finite number-basis realization and how well it meets the constraints.
    let state = build_truncated_state(&quantum, dynamics_cutoff(dof.nu(1.0)))?;
    print!("{}", state.report(&dof));
    println!("von Neumann entropy of the truncated state {:.6}", state.von_neumann_entropy());
    Ok(())
}
