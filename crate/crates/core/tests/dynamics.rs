use mepacket::dynamics::potential::symbolic_hamiltonian;
use mepacket::dynamics::symbolic::{
    heisenberg_iterates, poisson_iterates, spread_second_derivative, SymbolicDerivatives,
};
use mepacket::dynamics::{
    evolve_taylor, matrix_oracle, mc_oracle, quadratic_evolve, Engine, McConfig, PolynomialPotential, TaylorConfig,
};
use mepacket::qpacket::{build_truncated_state, QuantumMEPacket};
use mepacket::weyl::{Var, WeylPoly};
use mepacket::{Dof, PacketParams};

fn packet(dof: Dof) -> QuantumMEPacket {
    QuantumMEPacket::new(PacketParams::single_with(dof, Default::default()).unwrap()).unwrap()
}

/// Highest orders keep every expectation within the symbolic degree cap.
#[test]
fn quantum_derivatives_reduce_to_classical_without_hbar() {
    for (ks, order) in [(&[1, 2, 3][..], 8), (&[1, 2, 3, 4][..], 7), (&[1, 2, 3, 4, 5][..], 4)] {
        let d = SymbolicDerivatives::compute(ks, order).unwrap();
        for i in 0..4 {
            for k in 0..=order {
                assert_eq!(d.quantum[i][k].at_zero(Var::R), d.classical[i][k], "{ks:?}: moment {i}, order {k}");
            }
        }
    }
}

#[test]
fn heisenberg_iterates_shadow_poisson_iterates() {
    let h = symbolic_hamiltonian(&[1, 2, 3, 4, 5]);
    for x0 in [WeylPoly::q(), WeylPoly::p(), WeylPoly::word("qq"), WeylPoly::word("pp")] {
        let quantum = heisenberg_iterates(&x0, &h, 8);
        let classical = poisson_iterates(&x0.shadow(), &h.shadow(), 8);
        for (q, c) in quantum.iter().zip(&classical) {
            assert_eq!(q.shadow(), *c);
        }
    }
}

#[test]
fn position_spread_curvature_carries_inverse_mass() {
    let d = SymbolicDerivatives::compute(&[1, 2, 3, 4], 2).unwrap();
    let (vq, _) = d.quantum_variances();
    let c = spread_second_derivative(&vq, Var::DQ);
    assert_eq!(c.min_degree(Var::InvMu), Some(1));
}

#[test]
fn free_symmetric_packet_stays_centered() {
    let dof = Dof::new(0.0, 0.0, 1.0, 0.7);
    let pot = PolynomialPotential::free(1.0).unwrap();
    let times: Vec<f64> = (0..=10).map(|i| i as f64).collect();
    let rec = evolve_taylor(&dof, 1.0, &pot, Engine::Quantum, &times, &TaylorConfig::default()).unwrap();
    assert!(rec.points.iter().all(|p| p.q() == 0.0 && p.p() == 0.0));
}

#[test]
fn harmonic_spreads_stay_inside_the_envelope() {
    let dof = Dof::new(0.3, 0.2, 0.8, 1.5);
    let pot = PolynomialPotential::new(2.0, vec![0.0, 0.1, 0.5]).unwrap();
    let omega = (0.5f64 / 2.0).sqrt();
    let lo = dof.dq.min(dof.dp / (2.0 * omega));
    let hi = dof.dq.max(dof.dp / (2.0 * omega));
    let period = 2.0 * std::f64::consts::PI / omega;
    let times: Vec<f64> = (0..=200).map(|i| 2.0 * period * i as f64 / 200.0).collect();
    for &t in &times {
        let dq = quadratic_evolve(&dof, &pot, t).unwrap()[2];
        assert!(dq >= lo - 1e-12 && dq <= hi + 1e-12, "dQ = {dq} at t = {t}");
    }
    let rec = matrix_oracle(&packet(dof), &pot, &times[..101], 200).unwrap();
    assert!(rec.points.iter().all(|p| p.dq() >= lo - 1e-9 && p.dq() <= hi + 1e-9));
}

#[test]
fn matrix_oracle_starts_on_the_constraints() {
    let dof = Dof::new(-0.4, 0.9, 1.1, 0.8);
    let pot = PolynomialPotential::new(1.0, vec![0.0, 0.0, 1.0, 0.4]).unwrap();
    let rec = matrix_oracle(&packet(dof), &pot, &[0.0], 120).unwrap();
    let v = rec.points[0].values;
    for (a, b) in v.iter().zip([dof.q, dof.p, dof.dq, dof.dp]) {
        assert!((a - b).abs() < 1e-10, "{a} vs {b}");
    }
    let state = build_truncated_state(&packet(dof), 120).unwrap();
    assert!(state.defect.abs() < 1e-10);
}

#[test]
fn harmonic_mc_spread_matches_closed_form() {
    let dof = Dof::new(0.5, 0.0, 1.0, 0.5);
    let pot = PolynomialPotential::new(1.0, vec![0.0, 0.0, 1.0]).unwrap();
    let times = [0.0, 0.5, 1.0, 2.0];
    let cfg = McConfig { samples: 100_000, seed: 11, steps: 512, ..McConfig::default() };
    let rec = mc_oracle(&dof, &pot, &times, &cfg).unwrap();
    for pt in &rec.points {
        let exact = quadratic_evolve(&dof, &pot, pt.t).unwrap();
        for (i, x) in exact.iter().enumerate() {
            assert!((pt.values[i] - x).abs() <= 3.0 * pt.errors[i], "column {i} at t = {}", pt.t);
        }
    }
}

/// The quantum-minus-classical gap of the matrix oracle follows the gap of
/// the two Taylor engines at short times.
#[test]
fn cubic_quantum_correction_matches_series() {
    let s = 5f64.sqrt();
    let dof = Dof::new(0.0, 0.0, s, s);
    let pot = PolynomialPotential::new(1.0, vec![0.0, 0.0, 1.0, 0.1]).unwrap();
    let times = [0.0, 0.1, 0.2, 0.3];
    let cfg = TaylorConfig::default();
    let quantum = evolve_taylor(&dof, 1.0, &pot, Engine::Quantum, &times, &cfg).unwrap();
    let classical = evolve_taylor(&dof, 1.0, &pot, Engine::Classical, &times, &cfg).unwrap();
    let matrix = matrix_oracle(&packet(dof), &pot, &times, 240).unwrap();
    for ((m, q), c) in matrix.points.iter().zip(&quantum.points).zip(&classical.points) {
        for i in 0..4 {
            let predicted = q.values[i] - c.values[i];
            let observed = m.values[i] - c.values[i];
            assert!((predicted - observed).abs() < 1e-3, "column {i} at t = {}", m.t);
        }
    }
    assert!(matrix.points[0].values.iter().zip(&classical.points[0].values).all(|(a, b)| (a - b).abs() < 1e-10));
}
