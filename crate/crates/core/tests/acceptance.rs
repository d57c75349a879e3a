//! One PASS/FAIL line per acceptance criterion. Exits non-zero if any fail.

mod common;

use std::time::{Duration, Instant};

use mepacket::chain::{
    asymptotic_relative_length_spread, gibbs_from_lambda, length_statistics, mode_basis, ChainModel, LengthConvention,
};
use mepacket::cli::{moment_identities, Status};
use mepacket::dynamics::scan::{fit_exponent, log_grid};
use mepacket::dynamics::symbolic::{momentum_iterate_coefficient, SymbolicDerivatives};
use mepacket::dynamics::{
    characteristic_time, classical_limit_scan, evolve_taylor, matrix_oracle, mc_oracle, quadratic_evolve, Engine,
    McConfig, PolynomialPotential, TaylorConfig, TrajectoryRecord,
};
use mepacket::qpacket::{diagonal_weights, minimal_cutoff, quantum_entropy, QuantumMEPacket};
use mepacket::weyl::{Poly, Var};
use mepacket::{Dof, PacketParams};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

struct Verdict {
    ok: bool,
    detail: String,
}

fn verdict(ok: bool, detail: impl Into<String>) -> Verdict {
    Verdict { ok, detail: detail.into() }
}

fn within_budget(v: Verdict, elapsed: Duration, budget: Duration) -> Verdict {
    let ok = v.ok && elapsed <= budget;
    verdict(ok, format!("{}; {:.2} s (budget {} s)", v.detail, elapsed.as_secs_f64(), budget.as_secs()))
}

fn timed(budget_s: u64, f: impl FnOnce() -> Verdict) -> Verdict {
    let start = Instant::now();
    let v = f();
    within_budget(v, start.elapsed(), Duration::from_secs(budget_s))
}

fn criterion_1() -> Verdict {
    timed(1, || {
        let names = [
            "<A+A> = nu/2 - 1/2",
            "<(A+A)^2> = nu^2/2 - nu/2",
            "<(A+A)^3> = 3nu^3/4 - 3nu^2/4 - nu/4 + 1/4",
            "<(A+A)^2> at nu = 3",
            "N(q) = Q",
            "N(p^2) = P^2 + (dP^2/nu)(2 A+A + 1)",
            "<q^6> with nu corrections",
            "<q^2 p^2 + p^2 q^2>",
            "<p q^2 p>",
            "<q p^2 q>",
        ];
        let checks = moment_identities();
        let mut bad = Vec::new();
        for name in names {
            match checks.iter().find(|c| c.name == name) {
                Some(c) if c.status == Status::Pass => {}
                Some(c) => bad.push(format!("{name}: expected {} but engine gives {}", c.expected, c.computed)),
                None => bad.push(format!("{name}: missing")),
            }
        }
        if bad.is_empty() {
            verdict(true, format!("{} identities exact", names.len()))
        } else {
            verdict(false, bad.join("; "))
        }
    })
}

fn criterion_2() -> Verdict {
    let mut worst = 0.0f64;
    for nu in [1.5, 3.0, 10.0, 100.0] {
        let w = diagonal_weights(nu, 8 * minimal_cutoff(nu)).unwrap();
        let direct: f64 = -w.iter().filter(|x| **x > 0.0).map(|x| x * x.ln()).sum::<f64>();
        worst = worst.max((quantum_entropy(nu).unwrap() - direct).abs());
    }
    let s1 = quantum_entropy(1.0).unwrap();
    let nu = 1e4;
    let asym = (quantum_entropy(nu).unwrap() - (nu.ln() + 1.0 - 2f64.ln())).abs();
    verdict(
        worst < 1e-10 && s1.abs() < 1e-15 && asym < 1e-3,
        format!("weights vs formula {worst:.1e}, S(1) = {s1:e}, asymptotic gap at 1e4 {asym:.1e}"),
    )
}

fn max_gap(rec: &TrajectoryRecord, dof: &Dof, pot: &PolynomialPotential) -> f64 {
    rec.points
        .iter()
        .flat_map(|pt| {
            let exact = quadratic_evolve(dof, pot, pt.t).unwrap();
            (0..4).map(move |i| (pt.values[i] - exact[i]).abs())
        })
        .fold(0.0, f64::max)
}

fn criterion_3() -> Verdict {
    timed(30, || {
        let dof = Dof::new(0.4, -0.3, 1.0, 1.2);
        let packet = QuantumMEPacket::new(PacketParams::single_with(dof, Default::default()).unwrap()).unwrap();
        let cases = [
            ("free", vec![]),
            ("uniform force", vec![0.0, 0.5]),
            ("harmonic", vec![0.0, 0.2, 1.0]),
            ("anti-harmonic", vec![0.0, 0.0, -1.0]),
        ];
        let cfg = TaylorConfig { max_order: 60, ..TaylorConfig::default() };
        let mut ok = true;
        let mut parts = Vec::new();
        for (name, coeffs) in cases {
            let pot = PolynomialPotential::new(1.0, coeffs).unwrap();
            let period = characteristic_time(&dof, &pot);
            let times: Vec<f64> = (0..=16).map(|i| period * i as f64 / 16.0).collect();
            let taylor = evolve_taylor(&dof, 1.0, &pot, Engine::Quantum, &times, &cfg).map(|r| max_gap(&r, &dof, &pot));
            let matrix = matrix_oracle(&packet, &pot, &times, 240).map(|r| max_gap(&r, &dof, &pot));
            match (taylor, matrix) {
                (Ok(a), Ok(b)) => {
                    ok &= a < 1e-6 && b < 1e-6;
                    parts.push(format!("{name}: taylor {a:.1e}, matrix {b:.1e}"));
                }
                (a, b) => {
                    ok = false;
                    parts.push(format!("{name}: {a:?} / {b:?}"));
                }
            }
        }
        verdict(ok, parts.join("; "))
    })
}

fn criterion_4() -> Verdict {
    let d = SymbolicDerivatives::compute(&[1, 2, 3, 4], 4).unwrap();
    let same = (0..=4).all(|k| d.quantum[0][k] == d.classical[0][k] && d.quantum[1][k] == d.classical[1][k]);
    let (vq, vp) = d.quantum_variances();
    let (cq, cp) = d.classical_variances();
    let vanish = [&vq, &vp, &cq, &cp].iter().all(|v| v[1].is_empty());
    verdict(same && vanish, format!("Q, P derivatives 0..4 equal: {same}; first variance derivatives zero: {vanish}"))
}

fn criterion_5() -> Verdict {
    timed(300, || {
        let c = momentum_iterate_coefficient(&[3], 9, 6, 0);
        let expected = Poly::term_ratio(-125, 4, &[(Var::V(3), 5), (Var::InvMu, 4)]);
        verdict(c == expected, format!("coefficient {c}"))
    })
}

fn criterion_6() -> Verdict {
    let base = Dof::new(0.0, 0.0, 1.0, 1.0);
    let scales = log_grid(1.0, 32.0, 11);
    let cfg = TaylorConfig::default();
    let cubic = PolynomialPotential::new(1.0, vec![0.0, 0.0, 0.0, 0.02]).unwrap();
    let scan = classical_limit_scan(&base, 1.0, &cubic, 0.5, &scales, &cfg).unwrap();
    let exponent = fit_exponent(&scan.scales(), &scan.leading_deviations()).unwrap_or(f64::NAN);
    let quad = PolynomialPotential::new(1.0, vec![0.0, 0.3, 1.0]).unwrap();
    let control = classical_limit_scan(&base, 1.0, &quad, 0.5, &scales, &cfg).unwrap();
    let worst = control.points.iter().flat_map(|p| p.deviations).fold(0.0, f64::max);
    verdict(
        (exponent + 2.0).abs() <= 0.2 && worst < 1e-10,
        format!("cubic exponent {exponent:.3}; quadratic control max deviation {worst:.1e}"),
    )
}

/// Largest `|a - b| / (combined error)` over all points and columns.
fn pull(a: &TrajectoryRecord, b: &TrajectoryRecord, k: f64) -> f64 {
    a.points
        .iter()
        .zip(&b.points)
        .flat_map(|(x, y)| (0..4).map(move |i| (x.values[i] - y.values[i]).abs() / (k * (x.errors[i] + y.errors[i]))))
        .fold(0.0, f64::max)
}

fn criterion_7() -> Verdict {
    let dof = Dof::new(0.5, 0.0, 1.0, 1.0);
    let packet = QuantumMEPacket::new(PacketParams::single_with(dof, Default::default()).unwrap()).unwrap();
    let times: Vec<f64> = (0..=5).map(|i| 0.1 * i as f64).collect();
    let mc_cfg = McConfig { samples: 100_000, seed: 2024, steps: 512, ..McConfig::default() };
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, coeffs) in [("cubic", vec![0.0, 0.0, 1.0, 0.5]), ("quartic", vec![0.0, 0.0, 1.0, 0.0, 0.3])] {
        let pot = PolynomialPotential::new(1.0, coeffs).unwrap();
        let taylor = evolve_taylor(&dof, 1.0, &pot, Engine::Quantum, &times, &TaylorConfig::default()).unwrap();
        let matrix = matrix_oracle(&packet, &pot, &times, 200).unwrap();
        let mc = mc_oracle(&dof, &pot, &times, &mc_cfg).unwrap();
        let tm = pull(&taylor, &matrix, 1.0);
        let tc = pull(&taylor, &mc, 3.0);
        let mcm = pull(&matrix, &mc, 3.0);
        ok &= tm <= 1.0 && tc <= 1.0 && mcm <= 1.0;
        parts.push(format!("{name}: taylor-matrix {tm:.2}, taylor-mc {tc:.2}, matrix-mc {mcm:.2}"));
    }
    verdict(ok, format!("largest gap / combined bar: {}", parts.join("; ")))
}

fn criterion_8() -> Verdict {
    timed(120, || {
        let lambda = 0.01;
        let big = ChainModel::new(10_001, 1.0, 1.0, 1.0, 1.0).unwrap();
        let g = gibbs_from_lambda(&big, lambda).unwrap();
        let s = length_statistics(&big, &g, LengthConvention::EndToEnd);
        let n = big.n() as f64;
        let ratio = s.relative_spread() / asymptotic_relative_length_spread(&big, lambda);
        let xs: Vec<f64> = log_grid(100.0, 10_000.0, 9).iter().map(|x| x.round()).collect();
        let ys: Vec<f64> = xs
            .iter()
            .map(|&n| {
                let m = ChainModel::new(n as usize + 1, 1.0, 1.0, 1.0, 1.0).unwrap();
                let g = gibbs_from_lambda(&m, lambda).unwrap();
                length_statistics(&m, &g, LengthConvention::EndToEnd).relative_spread()
            })
            .collect();
        let slope = fit_exponent(&xs, &ys).unwrap_or(f64::NAN);
        let small = ChainModel::new(257, 1.0, 1.0, 1.0, 1.0).unwrap();
        let (off, diag) = mode_basis(&small).diagonalization_residual(&small);
        let ok = s.mean == n
            && s.even_mode_leak() < 1e-13
            && (ratio - 1.0).abs() <= 0.15
            && (slope + 0.5).abs() <= 0.02
            && off.max(diag) < 1e-10;
        verdict(
            ok,
            format!(
                "<L> - N xi = {:e}; even leak {:.1e}; dL/<L> over asymptotic {ratio:.4}; slope {slope:.4}; N = 256 residual {:.1e}",
                s.mean - n,
                s.even_mode_leak(),
                off.max(diag)
            ),
        )
    })
}

fn run_property<S: Strategy>(
    name: &str,
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> common::Outcome,
) -> Result<(), String> {
    let mut runner = TestRunner::new_with_rng(
        Config { cases, failure_persistence: None, ..Config::default() },
        TestRng::deterministic_rng(RngAlgorithm::ChaCha),
    );
    runner.run(&strategy, test).map_err(|e| format!("{name}: {e}"))
}

fn criterion_9() -> Verdict {
    use common::*;
    let results = [
        run_property("associativity", 64, (weyl_poly(3), weyl_poly(3), weyl_poly(2)), |(a, b, c)| {
            associativity(&a, &b, &c)
        }),
        run_property("faithfulness", 64, (weyl_poly(3), weyl_poly(3), dof(1.0)), |(a, b, d)| faithfulness(&a, &b, &d)),
        run_property("reality", 64, (word(7), dof(1.0)), |(w, d)| reality(&w, &d)),
        run_property("highest order", 64, (1usize..=8, -2.0f64..2.0, 0.2f64..2.0), |(m, q, s)| {
            highest_order_vs_quadrature(m, q, s)
        }),
        run_property("legendre", 20, dof(1.05), |d| legendre(&d)),
        run_property("mc determinism", 4, (any::<u64>(), dof(1.0)), |(s, d)| mc_determinism(s, &d)),
    ];
    let failures: Vec<String> = results.into_iter().filter_map(|r| r.err()).collect();
    if failures.is_empty() {
        verdict(true, "associativity, faithfulness, reality, highest-order tables, Legendre, mc determinism")
    } else {
        verdict(false, failures.join("; "))
    }
}

fn main() {
    type Criterion = (&'static str, fn() -> Verdict);
    let criteria: [Criterion; 9] = [
        ("published moment and ladder identities", criterion_1),
        ("quantum entropy", criterion_2),
        ("quadratic coincidence", criterion_3),
        ("derivative coincidence", criterion_4),
        ("ninth-derivative coefficient", criterion_5),
        ("high-entropy limit", criterion_6),
        ("oracle triangulation", criterion_7),
        ("chain model", criterion_8),
        ("property suites", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let v = f();
        println!("{} {}. {name}: {}", if v.ok { "PASS" } else { "FAIL" }, i + 1, v.detail);
        failed += usize::from(!v.ok);
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
