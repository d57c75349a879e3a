//! Regression checks of published and closed-form values.
//!
//! Published values that disagree with an independent derivation are
//! reported as [`Status::Discrepancy`] next to a passing check of the
//! derived value; they do not fail the suite.

use std::fmt;

use num_rational::BigRational;

use crate::chain::{gibbs_from_lambda, length_statistics, ChainModel, LengthConvention};
use crate::dynamics::potential::symbolic_hamiltonian;
use crate::dynamics::symbolic::{momentum_iterate_coefficient, spread_second_derivative, SymbolicDerivatives};
use crate::dynamics::{matrix_oracle, quadratic_evolve, PolynomialPotential};
use crate::params::{Dof, PacketParams};
use crate::qpacket::{diagonal_weights, minimal_cutoff, quantum_entropy, QuantumMEPacket};
use crate::weyl::{
    number_moment, number_moment_poly, to_ladder, Adjoint, Coeff, LadderContext, Poly, SymbolicExpectation, Var,
    WeylPoly,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// A published value disagrees with the derived one.
    Discrepancy,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    /// "published" or "closed-form".
    pub source: &'static str,
    pub expected: String,
    pub computed: String,
    pub status: Status,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Discrepancy => "DISCREPANCY",
        };
        write!(
            f,
            "[{tag}] {}\n    expected ({}): {}\n    computed: {}",
            self.name, self.source, self.expected, self.computed
        )
    }
}

fn check(name: &'static str, source: &'static str, expected: String, computed: String, ok: bool) -> Check {
    Check { name, source, expected, computed, status: if ok { Status::Pass } else { Status::Fail } }
}

fn published(name: &'static str, expected: &Poly, computed: &Poly) -> Check {
    let status = if expected == computed { Status::Pass } else { Status::Discrepancy };
    Check { name, source: "published", expected: expected.to_string(), computed: computed.to_string(), status }
}

fn rationals(v: &[(i64, i64)]) -> Vec<BigRational> {
    v.iter().map(|&(n, d)| BigRational::new(n.into(), d.into())).collect()
}

/// `(numerator, denominator, monomial)` triples.
type Terms<'a> = [(i64, i64, &'a [(Var, i16)])];

fn poly(terms: &Terms) -> Poly {
    terms.iter().fold(Poly::default(), |acc, (n, d, vars)| acc.plus(&Poly::term_ratio(*n, *d, vars)))
}

fn number_moments() -> Vec<Check> {
    let published = [
        ("<A+A> = nu/2 - 1/2", rationals(&[(-1, 2), (1, 2)])),
        ("<(A+A)^2> = nu^2/2 - nu/2", rationals(&[(0, 1), (-1, 2), (1, 2)])),
        ("<(A+A)^3> = 3nu^3/4 - 3nu^2/4 - nu/4 + 1/4", rationals(&[(1, 4), (-1, 4), (-3, 4), (3, 4)])),
    ];
    let mut out: Vec<Check> = published
        .into_iter()
        .enumerate()
        .map(|(i, (name, exp))| {
            let got = number_moment_poly(i + 1);
            check(name, "published", format!("{exp:?}"), format!("{got:?}"), got == exp)
        })
        .collect();
    let v = number_moment(2, 3.0);
    out.push(check("<(A+A)^2> at nu = 3", "published", "3".into(), format!("{v}"), (v - 3.0).abs() < 1e-12));
    out
}

fn map_n() -> Vec<Check> {
    let ctx = LadderContext::<Poly>::symbolic();
    let n_of = |x: WeylPoly<Poly>| to_ladder(&x, &ctx, |c| c.clone()).map_n();
    let nq = n_of(WeylPoly::term(1, 0, 0, Poly::int(1)));
    let np2 = n_of(WeylPoly::term(0, 2, 0, Poly::int(1)));
    // P^2 + (dP^2 / nu)(2 n + 1), 1/nu = R^2
    let exp0 = poly(&[(1, 1, &[(Var::P, 2)]), (1, 1, &[(Var::DP, 2), (Var::R, 2)])]);
    let exp1 = Poly::term(2, &[(Var::DP, 2), (Var::R, 2)]);
    vec![
        check(
            "N(q) = Q",
            "published",
            "Q".into(),
            format!("{:?}", nq.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>()),
            nq.coeffs() == [Poly::var(Var::Q)],
        ),
        check(
            "N(p^2) = P^2 + (dP^2/nu)(2 A+A + 1)",
            "published",
            format!("[{exp0}, {exp1}]"),
            format!("[{}, {}]", np2.z(0), np2.z(1)),
            np2.degree() == 1 && np2.z(0) == exp0 && np2.z(1) == exp1,
        ),
    ]
}

fn corrected_products() -> Vec<Check> {
    let mut ex = SymbolicExpectation::new();
    let w = |s: &str| WeylPoly::<Poly>::word(s);
    let (q, p, dq, dp, r) = (Var::Q, Var::P, Var::DQ, Var::DP, Var::R);
    let mut out = Vec::new();

    let q6 = ex.quantum(&w("qqqqqq"), Adjoint::Require).expect("q^6 is self-adjoint");
    let classical =
        poly(&[(1, 1, &[(q, 6)]), (15, 1, &[(q, 4), (dq, 2)]), (45, 1, &[(q, 2), (dq, 4)]), (15, 1, &[(dq, 6)])]);
    let printed = classical.plus(&poly(&[(9, 1, &[(dq, 6), (r, 2)]), (-3, 1, &[(dq, 6), (r, 6)])]));
    out.push(published("<q^6> with nu corrections", &printed, &q6));
    out.push(check(
        "<q^6> equals the Gaussian moment",
        "closed-form",
        classical.to_string(),
        q6.to_string(),
        q6 == classical,
    ));

    let base = poly(&[
        (1, 1, &[(q, 2), (p, 2)]),
        (1, 1, &[(q, 2), (dp, 2)]),
        (1, 1, &[(p, 2), (dq, 2)]),
        (1, 1, &[(dq, 2), (dp, 2)]),
    ]);
    let q2p2 = ex.quantum(&w("qqpp").add(&w("ppqq")), Adjoint::Require).expect("self-adjoint");
    let exp = base.scale(&crate::weyl::Gq::from_int(2)).plus(&Poly::term(-4, &[(dq, 2), (dp, 2), (r, 4)]));
    out.push(published("<q^2 p^2 + p^2 q^2>", &exp, &q2p2));
    let extra = Poly::term(2, &[(dq, 2), (dp, 2), (r, 4)]);
    let pqqp = ex.quantum(&w("pqqp"), Adjoint::Require).expect("self-adjoint");
    out.push(published("<p q^2 p>", &base.plus(&extra), &pqqp));
    let qppq = ex.quantum(&w("qppq"), Adjoint::Require).expect("self-adjoint");
    out.push(published("<q p^2 q>", &base.plus(&extra), &qppq));
    out
}

fn ninth_derivative() -> Check {
    let c = momentum_iterate_coefficient(&[3], 9, 6, 0);
    let exp = Poly::term_ratio(-125, 4, &[(Var::V(3), 5), (Var::InvMu, 4)]);
    check("q^6 coefficient of (d^9 P/dt^9)_0, cubic V", "published", exp.to_string(), c.to_string(), c == exp)
}

fn entropy() -> Vec<Check> {
    let mut out = Vec::new();
    for nu in [1.5, 3.0, 10.0, 100.0] {
        let s = quantum_entropy(nu).unwrap();
        let m = minimal_cutoff(nu) * 4;
        let w = diagonal_weights(nu, m).unwrap();
        let direct: f64 = -w.iter().filter(|x| **x > 0.0).map(|x| x * x.ln()).sum::<f64>();
        out.push(check(
            "entropy formula = -sum R_m ln R_m",
            "published",
            format!("{direct:.14} (nu = {nu})"),
            format!("{s:.14}"),
            (s - direct).abs() < 1e-10,
        ));
    }
    let s1 = quantum_entropy(1.0).unwrap();
    out.push(check("entropy at nu = 1", "closed-form", "0".into(), format!("{s1:e}"), s1.abs() < 1e-15));
    out
}

fn derivative_coincidence() -> Vec<Check> {
    let d = SymbolicDerivatives::compute(&[1, 2, 3, 4], 4).expect("quartic derivatives");
    let same = (0..=4).all(|k| d.quantum[0][k] == d.classical[0][k] && d.quantum[1][k] == d.classical[1][k]);
    let (vq, vp) = d.quantum_variances();
    let (cq, cp) = d.classical_variances();
    let vanish = vq[1].is_empty() && vp[1].is_empty() && cq[1].is_empty() && cp[1].is_empty();
    let mut out = vec![
        check(
            "first four derivatives of Q, P: quantum = classical (quartic)",
            "published",
            "equal".into(),
            if same { "equal" } else { "different" }.into(),
            same,
        ),
        check("first spread derivatives vanish", "published", "0".into(), format!("{} / {}", vq[1], vp[1]), vanish),
    ];

    // Second spread derivatives against the printed expressions.
    let mut ex = SymbolicExpectation::new();
    let h = symbolic_hamiltonian(&[1, 2, 3, 4]);
    let dv = |k: usize| {
        // V^(k)(q) = sum_j V_j q^(j-k) / (j-k)!
        let mut out = WeylPoly::<Poly>::zero();
        for j in k..=4usize {
            let fact: i64 = (1..=(j - k) as i64).product();
            out = out.add(&WeylPoly::term((j - k) as u32, 0, 0, Poly::term_ratio(1, fact, &[(Var::V(j as u8), 1)])));
        }
        out
    };
    let q = WeylPoly::<Poly>::term(1, 0, 0, Poly::int(1));
    let p = WeylPoly::<Poly>::term(0, 1, 0, Poly::int(1));
    let v1 = dv(1);
    let mut e = |x: &WeylPoly<Poly>| ex.quantum(x, Adjoint::Symmetrize).expect("expectation");
    let qv = e(&q.mul(&v1));
    let v1m = e(&v1);
    let inv = Poly::term(1, &[(Var::InvMu, 1), (Var::DQ, -1)]);
    let dp2 = Poly::term(1, &[(Var::DP, 2)]);
    let qbar = Poly::var(Var::Q);
    let engine_q = spread_second_derivative(&vq, Var::DQ);
    let printed_q = inv.times(&qv.negate().minus(&qbar.times(&v1m)).plus(&dp2));
    let derived_q = inv.times(&dp2.times(&Poly::var(Var::InvMu)).minus(&qv).plus(&qbar.times(&v1m)));
    out.push(published("(d^2 dQ/dt^2)_0 printed form", &printed_q, &engine_q));
    out.push(check(
        "(d^2 dQ/dt^2)_0 = (dP^2/mu - <qV'> + <q><V'>)/(mu dQ)",
        "closed-form",
        derived_q.to_string(),
        engine_q.to_string(),
        derived_q == engine_q,
    ));
    let _ = h;

    // (V')^t = (V'' p + p V'') / (2 mu)
    let v2 = dv(2);
    let half_mu = WeylPoly::constant(Poly::term_ratio(1, 2, &[(Var::InvMu, 1)]));
    let vt = v2.mul(&p).add(&p.mul(&v2)).mul(&half_mu);
    let v1sq = e(&v1.mul(&v1));
    let vtp = e(&vt.mul(&p).add(&p.mul(&vt)));
    let vtm = e(&vt);
    let two = Poly::int(2);
    let bracket = two
        .times(&v1sq)
        .minus(&two.times(&v1m).times(&v1m))
        .minus(&vtp)
        .plus(&two.times(&vtm).times(&Poly::var(Var::P)));
    let printed_p = bracket.times(&Poly::term_ratio(1, 2, &[(Var::DP, -1)]));
    let engine_p = spread_second_derivative(&vp, Var::DP);
    out.push(published("(d^2 dP/dt^2)_0 printed form", &printed_p, &engine_p));
    out
}

fn quadratic_coincidence() -> Check {
    let dof = Dof::new(0.4, -0.3, 1.0, 1.2);
    let pot = PolynomialPotential::new(1.0, vec![0.0, 0.2, 1.0]).unwrap();
    let packet = QuantumMEPacket::new(PacketParams::single_with(dof, Default::default()).unwrap()).unwrap();
    let period = 2.0 * std::f64::consts::PI;
    let times: Vec<f64> = (0..=8).map(|i| period * i as f64 / 8.0).collect();
    let worst = match matrix_oracle(&packet, &pot, &times, 160) {
        Ok(rec) => rec
            .points
            .iter()
            .flat_map(|pt| {
                let exact = quadratic_evolve(&dof, &pot, pt.t).unwrap();
                (0..4).map(move |i| (pt.values[i] - exact[i]).abs())
            })
            .fold(0.0, f64::max),
        Err(_) => f64::INFINITY,
    };
    check(
        "harmonic: matrix oracle = closed form over one period",
        "closed-form",
        "max difference < 1e-6".into(),
        format!("{worst:.3e}"),
        worst < 1e-6,
    )
}

fn chain() -> Vec<Check> {
    let model = ChainModel::new(101, 1.0, 1.0, 1.0, 1.0).unwrap();
    let g = gibbs_from_lambda(&model, 1.0).unwrap();
    let s = length_statistics(&model, &g, LengthConvention::EndToEnd);
    vec![
        check("<L> = N xi", "published", "100".into(), format!("{}", s.mean), s.mean == 100.0),
        check(
            "only odd modes enter L",
            "published",
            "even coefficients 0".into(),
            format!("{:.1e}", s.even_mode_leak()),
            s.even_mode_leak() < 1e-13,
        ),
    ]
}

/// Number moments, the map N and the corrected products.
pub fn moment_identities() -> Vec<Check> {
    let mut out = number_moments();
    out.extend(map_n());
    out.extend(corrected_products());
    out
}

/// Runs every check.
pub fn cmd_verify() -> Vec<Check> {
    let mut out = moment_identities();
    out.push(ninth_derivative());
    out.extend(entropy());
    out.extend(derivative_coincidence());
    out.push(quadratic_coincidence());
    out.extend(chain());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn no_failures() {
        let checks = cmd_verify();
        for c in &checks {
            assert_ne!(c.status, Status::Fail, "{c}");
        }
        let flagged: Vec<_> = checks.iter().filter(|c| c.status == Status::Discrepancy).map(|c| c.name).collect();
        assert_eq!(flagged, ["<q^6> with nu corrections", "(d^2 dQ/dt^2)_0 printed form"]);
    }
}
