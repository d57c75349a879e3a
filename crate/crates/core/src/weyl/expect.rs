//! Expectation values of Weyl polynomials in classical and quantum ME packets.

use std::collections::HashMap;

use num_complex::Complex64;

use super::algebra::{CommPoly, WeylPoly};
use super::ladder::{number_moment, number_moment_poly, to_ladder, LadderContext};
use super::poly::{Poly, Var};
use super::ring::Coeff;
use crate::classical::gaussian_moments;
use crate::error::{Error, Result};
use crate::params::Dof;

/// Largest `q`/`p` degree accepted by the symbolic expectation route.
pub const SYMBOLIC_DEGREE_CAP: u32 = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Adjoint {
    /// Reject inputs that are not self-adjoint.
    Require,
    /// Evaluate `<(x + x^dagger)/2>`.
    Symmetrize,
}

/// Symbolic quantum expectation through the ladder representation, the map
/// N and the number moments `<(A^dagger A)^k>`.
///
/// Results are polynomials in `Q`, `P`, `dQ`, `dP` and `r = nu^{-1/2}` (with
/// `hbar = 2 dQ dP r^2` eliminated), times any symbols carried by the input
/// coefficients.
pub struct SymbolicExpectation {
    ctx: LadderContext<Poly>,
    cache: HashMap<(u32, u32), Poly>,
    moments: Vec<Poly>,
}

impl Default for SymbolicExpectation {
    fn default() -> Self {
        Self::new()
    }
}

impl SymbolicExpectation {
    pub fn new() -> Self {
        SymbolicExpectation { ctx: LadderContext::symbolic(), cache: HashMap::new(), moments: Vec::new() }
    }

    fn moment(&mut self, k: usize) -> &Poly {
        while self.moments.len() <= k {
            let j = self.moments.len();
            let mut p = Poly::default();
            for (d, c) in number_moment_poly(j).iter().enumerate() {
                let c = num_complex::Complex::new(c.clone(), num_traits::Zero::zero());
                p = p.plus(&Poly::monomial(super::poly::mono(&[(Var::R, -2 * d as i16)]), c));
            }
            self.moments.push(p);
        }
        &self.moments[k]
    }

    /// `<q^a p^b>` (standard order) in the quantum ME packet.
    pub fn monomial(&mut self, a: u32, b: u32) -> Result<Poly> {
        if a + b > SYMBOLIC_DEGREE_CAP {
            return Err(Error::DegreeCap { degree: (a + b) as usize, cap: SYMBOLIC_DEGREE_CAP as usize });
        }
        if let Some(v) = self.cache.get(&(a, b)) {
            return Ok(v.clone());
        }
        let x = WeylPoly::<Poly>::term(a, b, 0, Poly::int(1));
        let number = to_ladder(&x, &self.ctx, |c| c.clone()).map_n();
        let mut value = Poly::default();
        for (k, z) in number.coeffs().iter().enumerate() {
            let m = self.moment(k).clone();
            value = value.plus(&z.times(&m));
        }
        self.cache.insert((a, b), value.clone());
        Ok(value)
    }

    /// `<x>`; with [`Adjoint::Require`] a non-self-adjoint `x` is an error.
    pub fn quantum(&mut self, x: &WeylPoly<Poly>, mode: Adjoint) -> Result<Poly> {
        let target = match mode {
            Adjoint::Symmetrize => x.add(&x.dagger_with(Poly::conj)).scale(&Poly::ratio(1, 2)),
            Adjoint::Require => {
                if *x != x.dagger_with(Poly::conj) {
                    return Err(Error::NotSelfAdjoint);
                }
                x.clone()
            }
        };
        if target.qp_degree() > SYMBOLIC_DEGREE_CAP {
            return Err(Error::DegreeCap { degree: target.qp_degree() as usize, cap: SYMBOLIC_DEGREE_CAP as usize });
        }
        let mut out = Poly::default();
        for (m, c) in target.terms() {
            let mut coeff = c.clone();
            for _ in 0..m.h {
                coeff = coeff.times(&self.ctx.ihbar);
            }
            out = out.plus(&coeff.times(&self.monomial(m.q, m.p)?));
        }
        Ok(out)
    }
}

/// Symbolic classical expectation: `<q^a p^b> = <q^a><p^b>` with Gaussian
/// moments in `Q`, `dQ`, `P`, `dP`.
pub fn classical_expectation_symbolic(x: &CommPoly<Poly>) -> Poly {
    let mut out = Poly::default();
    for ((a, b), c) in x.terms() {
        let m = symbolic_gaussian_moment(*a, Var::Q, Var::DQ).times(&symbolic_gaussian_moment(*b, Var::P, Var::DP));
        out = out.plus(&c.times(&m));
    }
    out
}

/// `E[x^n]` for `x ~ N(mean, sd^2)` as a polynomial in the two symbols.
pub fn symbolic_gaussian_moment(n: u32, mean: Var, sd: Var) -> Poly {
    // sum_j C(n, j) mean^(n-j) sd^j (j-1)!!, j even
    let mut out = Poly::default();
    let mut binom: i64 = 1;
    let mut dfact: i64 = 1;
    for j in 0..=n {
        if j > 0 {
            binom = binom * (n - j + 1) as i64 / j as i64;
        }
        if j % 2 == 0 {
            if j >= 2 {
                dfact *= (j - 1) as i64;
            }
            out = out.plus(&Poly::term(binom * dfact, &[(mean, (n - j) as i16), (sd, j as i16)]));
        }
    }
    out
}

/// Numeric standard-ordered moments `<q^a p^b>` of the quantum ME packet.
///
/// The state's characteristic function gives
/// `<q^a p^b> = sum_k (i hbar/2)^k C(a,k) C(b,k) k! m_q(a-k) m_p(b-k)` where
/// `m_q`, `m_p` are the Gaussian moments with the packet's means and spreads.
/// Valid for every `nu >= 1`, including the pure-state boundary.
#[derive(Debug, Clone)]
pub struct QuantumMoments {
    mq: Vec<f64>,
    mp: Vec<f64>,
    hbar: f64,
}

impl QuantumMoments {
    pub fn new(dof: &Dof, hbar: f64, degree: usize) -> Self {
        QuantumMoments {
            mq: gaussian_moments(degree, dof.q, dof.dq),
            mp: gaussian_moments(degree, dof.p, dof.dp),
            hbar,
        }
    }

    fn ensure(&mut self, n: usize, dof: &Dof) {
        if self.mq.len() <= n {
            self.mq = gaussian_moments(n, dof.q, dof.dq);
            self.mp = gaussian_moments(n, dof.p, dof.dp);
        }
    }

    pub fn standard(&self, a: usize, b: usize) -> Complex64 {
        assert!(a < self.mq.len() && b < self.mp.len(), "moment table too small");
        let half = Complex64::new(0.0, 0.5 * self.hbar);
        let mut sum = Complex64::new(0.0, 0.0);
        let mut pow = Complex64::new(1.0, 0.0);
        for k in 0..=a.min(b) {
            let c = <f64 as Coeff>::contraction(a as u32, b as u32, k as u32);
            sum += pow * c * self.mq[a - k] * self.mp[b - k];
            pow *= half;
        }
        sum
    }

    /// `<x>` for a numeric Weyl polynomial (complex in general).
    pub fn expect(&self, x: &WeylPoly<f64>) -> Complex64 {
        let ih = Complex64::new(0.0, self.hbar);
        x.terms().map(|(m, c)| ih.powu(m.h) * *c * self.standard(m.q as usize, m.p as usize)).sum()
    }
}

/// `<x>` in the quantum ME packet for a numeric, self-adjoint `x`.
pub fn quantum_expectation(x: &WeylPoly<f64>, dof: &Dof, hbar: f64, mode: Adjoint) -> Result<f64> {
    if dof.nu(hbar) < 1.0 - 1e-12 {
        return Err(Error::UncertaintyViolation { nu: dof.nu(hbar) });
    }
    let target = match mode {
        Adjoint::Symmetrize => x.symmetrized(),
        Adjoint::Require => {
            if !x.is_self_adjoint() {
                return Err(Error::NotSelfAdjoint);
            }
            x.clone()
        }
    };
    let mut m = QuantumMoments::new(dof, hbar, 0);
    m.ensure(target.qp_degree() as usize, dof);
    Ok(m.expect(&target).re)
}

/// The same expectation through the ladder representation and the number
/// moments, evaluated in floating point.
pub fn quantum_expectation_ladder(x: &WeylPoly<f64>, dof: &Dof, hbar: f64) -> Complex64 {
    let nu = dof.nu(hbar);
    let ctx = LadderContext::numeric(dof.q, dof.p, dof.dq, dof.dp, nu);
    let number = to_ladder(x, &ctx, |c| Complex64::new(*c, 0.0)).map_n();
    let moments: Vec<Complex64> = (0..=number.degree()).map(|k| Complex64::new(number_moment(k, nu), 0.0)).collect();
    number.average(&moments)
}

/// Classical ME-packet expectation of a commutative polynomial.
pub fn classical_expectation(x: &CommPoly<f64>, dof: &Dof) -> f64 {
    let n = x.degree() as usize;
    let mq = gaussian_moments(n, dof.q, dof.dq);
    let mp = gaussian_moments(n, dof.p, dof.dp);
    x.terms().map(|((a, b), c)| c * mq[*a as usize] * mp[*b as usize]).sum()
}

/// Evaluate a symbolic expectation at numeric packet parameters.
pub fn eval_packet(p: &Poly, dof: &Dof, hbar: f64) -> Complex64 {
    let values = super::poly::Values::default()
        .set(Var::Q, dof.q)
        .set(Var::P, dof.p)
        .set(Var::DQ, dof.dq)
        .set(Var::DP, dof.dp)
        .set(Var::R, dof.nu(hbar).powf(-0.5))
        .set(Var::Hbar, hbar);
    p.eval(&values)
}
