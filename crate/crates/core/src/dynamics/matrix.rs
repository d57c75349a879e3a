//! Quantum oracle: the truncated density matrix evolved by the exact
//! eigendecomposition of the truncated Hamiltonian.

use nalgebra::SymmetricEigen;
use num_complex::Complex64;

use super::potential::PolynomialPotential;
use super::record::{Method, TrajectoryPoint, TrajectoryRecord};
use crate::error::{Error, Result};
use crate::qpacket::{build_truncated_state, CMatrix, QuantumMEPacket};
use crate::weyl::WeylPoly;

/// Largest tolerated occupation of the top levels.
pub const LEAK_TOLERANCE: f64 = 1e-6;

/// Relative floor added to the error bars for eigensolver roundoff.
pub const ROUNDOFF: f64 = 1e-12;

/// Number of top levels watched for leakage.
pub fn watched_levels(dim: usize) -> usize {
    (dim / 10).max(2)
}

/// `sum_jk rho_jk e^{-i (E_j - E_k) t / hbar} X_kj` in the energy basis.
fn evolved_expectation(rho: &CMatrix, x: &CMatrix, energies: &[f64], t: f64, hbar: f64) -> f64 {
    let n = energies.len();
    let phases: Vec<Complex64> = energies.iter().map(|e| Complex64::from_polar(1.0, -e * t / hbar)).collect();
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..n {
        let mut row = Complex64::new(0.0, 0.0);
        for k in 0..n {
            row += rho[(j, k)] * phases[k].conj() * x[(k, j)];
        }
        acc += phases[j] * row;
    }
    acc.re
}

pub fn matrix_oracle(
    packet: &QuantumMEPacket,
    potential: &PolynomialPotential,
    times: &[f64],
    dim: usize,
) -> Result<TrajectoryRecord> {
    let dof = *packet.params.dof()?;
    let hbar = packet.params.hbar();
    let state = build_truncated_state(packet, dim)?;
    let basis = state.basis;
    let h = basis.operator(&potential.hamiltonian_weyl());
    let eig = SymmetricEigen::new(h);
    let u = eig.eigenvectors;
    let ud = u.adjoint();
    let to_energy = |m: &CMatrix| &ud * m * &u;
    let rho = to_energy(&state.matrix);
    // Centered operators keep the variances free of cancellation.
    let dq = WeylPoly::<f64>::q().sub(&WeylPoly::constant(dof.q));
    let dp = WeylPoly::<f64>::p().sub(&WeylPoly::constant(dof.p));
    let ops: Vec<CMatrix> =
        [dq.clone(), dp.clone(), dq.pow(2), dp.pow(2)].iter().map(|x| to_energy(&basis.operator(x))).collect();
    let top = watched_levels(dim);
    let mut proj = CMatrix::zeros(dim, dim);
    for n in dim - top..dim {
        proj[(n, n)] = Complex64::new(1.0, 0.0);
    }
    let proj = to_energy(&proj);
    let energies: Vec<f64> = eig.eigenvalues.iter().copied().collect();

    let mut rec = TrajectoryRecord::new(Method::Matrix);
    let mut worst = 0.0f64;
    for &t in times {
        let leak = evolved_expectation(&rho, &proj, &energies, t, hbar).abs();
        if leak > LEAK_TOLERANCE {
            return Err(Error::TruncationLeak { t, leak });
        }
        worst = worst.max(leak);
        let v: Vec<f64> = ops.iter().map(|x| evolved_expectation(&rho, x, &energies, t, hbar)).collect();
        let var_q = v[2] - v[0] * v[0];
        let var_p = v[3] - v[1] * v[1];
        if !(var_q > 0.0 && var_p > 0.0) {
            return Err(Error::TruncationLeak { t, leak });
        }
        let values = [dof.q + v[0], dof.p + v[1], var_q.sqrt(), var_p.sqrt()];
        let errors = values.map(|x| leak + state.tail + ROUNDOFF * (1.0 + x.abs()));
        rec.points.push(TrajectoryPoint { t, values, errors });
    }
    rec.diagnostics
        .push(format!("dim {dim}, build defect {:.3e}, largest top-{top} occupation {worst:.3e}", state.defect));
    Ok(rec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::quadratic::quadratic_evolve;
    use crate::params::{Dof, PacketParams};

    #[test]
    fn harmonic_matches_closed_form() {
        let dof = Dof::new(0.3, -0.2, 1.0, 1.5);
        let packet = QuantumMEPacket::new(PacketParams::single_with(dof, Default::default()).unwrap()).unwrap();
        let pot = PolynomialPotential::new(1.0, vec![0.0, 0.0, 2.0]).unwrap();
        let times = [0.0, 0.7, 2.0];
        let rec = matrix_oracle(&packet, &pot, &times, 80).unwrap();
        for pt in &rec.points {
            let exact = quadratic_evolve(&dof, &pot, pt.t).unwrap();
            for (a, b) in pt.values.iter().zip(exact) {
                assert!((a - b).abs() < 1e-8, "{a} vs {b} at t = {}", pt.t);
            }
        }
    }

    #[test]
    fn leak_is_reported() {
        let dof = Dof::new(0.0, 0.0, 1.0, 1.0);
        let packet = QuantumMEPacket::new(PacketParams::single_with(dof, Default::default()).unwrap()).unwrap();
        let pot = PolynomialPotential::free(1.0).unwrap();
        let r = matrix_oracle(&packet, &pot, &[50.0], 40);
        assert!(matches!(r, Err(Error::TruncationLeak { .. })));
    }
}
