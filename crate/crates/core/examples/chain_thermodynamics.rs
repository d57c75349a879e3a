//! Oscillator chain: normal modes, Gibbs state at a given energy, and the
//! spread of its length.

use mepacket::chain::{chain_report, gibbs_from_energy, mode_basis, printed_mode_basis, ChainModel};

fn main() -> mepacket::Result<()> {
    let model = ChainModel::new(65, 1.0, 1.0, 1.0, 1.0)?;
    let exact = mode_basis(&model);
    let printed = printed_mode_basis(&model);
    println!(
        "orthogonality residual: exact {:.1e}, printed {:.1e}",
        exact.orthogonality_residual(),
        printed.orthogonality_residual()
    );

    let energy = 10.0 * model.zero_point_energy();
    let report = chain_report(&model, gibbs_from_energy(&model, energy)?);
    for (key, value) in report.summary() {
        println!("{key:>26} = {value:.6e}");
    }
    Ok(())
}
