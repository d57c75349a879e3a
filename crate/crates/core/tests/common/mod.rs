//! Property checks shared by the proptest suites and the acceptance run.

#![allow(dead_code)]

use mepacket::classical::highest_order_coefficients;
use mepacket::dynamics::{mc_oracle, McConfig, PolynomialPotential};
use mepacket::qpacket::{quantum_entropy, quantum_ln_partition, quantum_multipliers, CMatrix, OscillatorBasis};
use mepacket::quadrature::GaussHermite;
use mepacket::weyl::{quantum_expectation_ladder, QuantumMoments, WeylPoly};
use mepacket::{Dof, PacketParams};
use num_traits::ToPrimitive;
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

pub type Outcome = Result<(), TestCaseError>;

pub fn weyl_poly(max_degree: u32) -> impl Strategy<Value = WeylPoly<f64>> {
    prop::collection::vec((0..=max_degree, 0..=max_degree, 0u32..2, -2.0f64..2.0), 1..5).prop_map(|terms| {
        terms.into_iter().fold(WeylPoly::zero(), |acc, (a, b, h, c)| acc.add(&WeylPoly::term(a, b, h, c)))
    })
}

pub fn word(max_len: usize) -> impl Strategy<Value = String> {
    prop::collection::vec(prop::bool::ANY, 1..=max_len)
        .prop_map(|v| v.into_iter().map(|b| if b { 'q' } else { 'p' }).collect())
}

/// Packet with `nu` in `[nu_min, 40]` and `hbar = 1`.
pub fn dof(nu_min: f64) -> impl Strategy<Value = Dof> {
    (-2.0f64..2.0, -2.0f64..2.0, 0.3f64..3.0, nu_min..40.0)
        .prop_map(|(q, p, dq, nu)| Dof::new(q, p, dq, nu / (2.0 * dq)))
}

fn scale(x: &WeylPoly<f64>) -> f64 {
    x.terms().map(|(_, c)| c.abs()).fold(1.0, f64::max)
}

pub fn associativity(a: &WeylPoly<f64>, b: &WeylPoly<f64>, c: &WeylPoly<f64>) -> Outcome {
    let left = a.mul(b).mul(c);
    let right = a.mul(&b.mul(c));
    let diff = left.sub(&right);
    let tol = 1e-9 * scale(&left).max(scale(&right));
    for (m, v) in diff.terms() {
        prop_assert!(v.abs() <= tol, "(ab)c - a(bc) has {v:e} at {m:?}");
    }
    Ok(())
}

/// The truncated matrix of `ab` equals the product of the matrices of `a`
/// and `b` on the block where truncation cannot reach.
pub fn faithfulness(a: &WeylPoly<f64>, b: &WeylPoly<f64>, d: &Dof) -> Outcome {
    let dim = 10;
    let basis = OscillatorBasis::for_dof(d, 1.0, dim);
    let wide = basis.with_dim(dim + b.qp_degree() as usize);
    let prod: CMatrix = wide.operator(a) * wide.operator(b);
    let direct = basis.operator(&a.mul(b));
    let block = prod.view((0, 0), (dim, dim));
    let tol = 1e-9 * direct.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let worst = (block - &direct).iter().map(|z| z.norm()).fold(0.0, f64::max);
    prop_assert!(worst <= tol, "matrix of ab differs from product by {worst:e}");
    Ok(())
}

/// `<X + X^dagger>` is real through both expectation routes, and they agree.
pub fn reality(w: &str, d: &Dof) -> Outcome {
    let x = WeylPoly::<f64>::word(w);
    let herm = x.add(&x.dagger());
    let moments = QuantumMoments::new(d, 1.0, w.len());
    let direct = moments.expect(&herm);
    let ladder = quantum_expectation_ladder(&herm, d, 1.0);
    let size = 1.0 + direct.norm();
    prop_assert!(direct.im.abs() <= 1e-12 * size, "imaginary part {:e}", direct.im);
    prop_assert!(ladder.im.abs() <= 1e-9 * size, "ladder imaginary part {:e}", ladder.im);
    prop_assert!((direct.re - ladder.re).abs() <= 1e-9 * size, "{} vs {}", direct.re, ladder.re);
    Ok(())
}

/// The highest-order tables rebuild `<q^{2m}>` and `<q^{2m-1}>` of a
/// Gaussian, compared against Gauss-Hermite quadrature.
pub fn highest_order_vs_quadrature(m: usize, mean: f64, sd: f64) -> Outcome {
    let t = highest_order_coefficients(m).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let (v, q2) = (sd * sd, mean * mean);
    let even: f64 =
        (1..=m + 1).map(|k| t.a[m][k].to_f64().unwrap() * q2.powi(k as i32 - 1) * v.powi((m + 1 - k) as i32)).sum();
    let odd: f64 =
        (1..=m).map(|k| t.b[m][k].to_f64().unwrap() * mean.powi(2 * k as i32 - 1) * v.powi((m - k) as i32)).sum();
    let rule = GaussHermite::for_degree(2 * m);
    let even_q = rule.expect(mean, sd, |x| x.powi(2 * m as i32));
    let odd_q = rule.expect(mean, sd, |x| x.powi(2 * m as i32 - 1));
    let size = rule.expect(mean, sd, |x| x.abs().powi(2 * m as i32)) + 1.0;
    prop_assert!((even - even_q).abs() <= 1e-9 * size, "<q^{}>: {even} vs {even_q}", 2 * m);
    prop_assert!((odd - odd_q).abs() <= 1e-9 * size, "<q^{}>: {odd} vs {odd_q}", 2 * m - 1);
    prop_assert_eq!(t.a_m(m).to_f64().unwrap(), (1..=m).map(|j| (2 * j - 1) as f64).product::<f64>());
    Ok(())
}

/// Entropy equals `ln Z + sum_i l_i <c_i>` at the quantum multipliers.
pub fn legendre(d: &Dof) -> Outcome {
    let params = PacketParams::single(d.q, d.p, d.dq, d.dp).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let m = quantum_multipliers(&params).map_err(|e| TestCaseError::fail(e.to_string()))?.per_dof[0];
    let rhs = quantum_ln_partition(&m, 1.0)
        + m.l1 * d.q
        + m.l2 * d.p
        + m.l3 * (d.q * d.q + d.dq * d.dq)
        + m.l4 * (d.p * d.p + d.dp * d.dp);
    let s = quantum_entropy(d.nu(1.0)).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let size = 1.0 + m.l1.abs() * d.q.abs() + m.l2.abs() * d.p.abs();
    prop_assert!((s - rhs).abs() <= 1e-10 * size, "entropy {s} vs Legendre form {rhs}");
    Ok(())
}

pub fn mc_determinism(seed: u64, d: &Dof) -> Outcome {
    let pot = PolynomialPotential::new(1.0, vec![0.0, 0.0, 1.0, 0.2]).unwrap();
    let cfg = McConfig { samples: 1000, seed, steps: 64, ..McConfig::default() };
    let times = [0.0, 0.1, 0.2];
    let a = mc_oracle(d, &pot, &times, &cfg).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let b = mc_oracle(d, &pot, &times, &cfg).map_err(|e| TestCaseError::fail(e.to_string()))?;
    prop_assert_eq!(a.to_csv_string().unwrap(), b.to_csv_string().unwrap());
    let other = McConfig { seed: seed.wrapping_add(1), ..cfg };
    let c = mc_oracle(d, &pot, &times, &other).map_err(|e| TestCaseError::fail(e.to_string()))?;
    prop_assert_ne!(a.points[1].values, c.points[1].values);
    Ok(())
}
