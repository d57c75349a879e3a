//! One cubic benchmark through all three engines: Taylor series, truncated
//! density matrix and a classical Monte Carlo ensemble.

use mepacket::dynamics::{
    evolve_taylor, matrix_oracle, mc_oracle, Engine, McConfig, PolynomialPotential, TaylorConfig,
};
use mepacket::qpacket::QuantumMEPacket;
use mepacket::{Dof, PacketParams};

fn main() -> mepacket::Result<()> {
    let dof = Dof::new(0.5, 0.0, 1.0, 1.0);
    let pot = PolynomialPotential::new(1.0, vec![0.0, 0.0, 1.0, 0.5])?;
    let times = [0.0, 0.25, 0.5];

    let taylor = evolve_taylor(&dof, 1.0, &pot, Engine::Quantum, &times, &TaylorConfig::default())?;
    let packet = QuantumMEPacket::new(PacketParams::single_with(dof, Default::default())?)?;
    let matrix = matrix_oracle(&packet, &pot, &times, 160)?;
    let mc = mc_oracle(&dof, &pot, &times, &McConfig { samples: 20_000, seed: 1, steps: 256, ..Default::default() })?;

    println!("{:>5} {:>8} {:>12} {:>12} {:>12}", "t", "method", "Qbar", "dQbar", "err_dQ");
    for rec in [&taylor, &matrix, &mc] {
        for pt in &rec.points {
            println!(
                "{:>5.2} {:>8} {:>12.8} {:>12.8} {:>12.2e}",
                pt.t,
                rec.method.name(),
                pt.q(),
                pt.dq(),
                pt.errors[2]
            );
        }
    }
    println!("taylor vs matrix: {:.2e}", taylor.max_difference(&matrix)?);
    Ok(())
}
