//! Time derivatives at `t = 0` of packet means and spreads, and their series.
//!
//! The quantum engine iterates `X -> [X, H] / (i hbar)` in the Weyl algebra
//! and averages with the quantum packet; the classical engine iterates the
//! Poisson bracket and averages with the Gaussian density.

use super::potential::PolynomialPotential;
use super::record::{Method, TrajectoryPoint, TrajectoryRecord};
use crate::error::{Error, Result};
use crate::params::Dof;
use crate::weyl::{classical_expectation, CommPoly, QuantumMoments, WeylPoly};

/// Upper bound on the number of terms of any iterate.
pub const TERM_CAP: usize = 2_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    Classical,
    Quantum,
}

impl Engine {
    pub fn name(self) -> &'static str {
        match self {
            Engine::Classical => "classical",
            Engine::Quantum => "quantum",
        }
    }
}

/// `d^k/dt^k` at `t = 0` of `<q>`, `<p>`, `<q^2>`, `<p^2>`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MomentDerivatives {
    pub q: Vec<f64>,
    pub p: Vec<f64>,
    pub q2: Vec<f64>,
    pub p2: Vec<f64>,
}

impl MomentDerivatives {
    pub fn len(&self) -> usize {
        self.q.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_empty()
    }

    /// Derivatives of `Var(q)` and `Var(p)` by the Leibniz rule.
    pub fn variances(&self) -> (Vec<f64>, Vec<f64>) {
        (leibniz_variance(&self.q2, &self.q), leibniz_variance(&self.p2, &self.p))
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

fn leibniz_variance(second: &[f64], first: &[f64]) -> Vec<f64> {
    (0..second.len())
        .map(|k| second[k] - (0..=k).map(|j| binomial(k, j) * first[j] * first[k - j]).sum::<f64>())
        .collect()
}

/// Derivatives of `sqrt(v)` from derivatives of `v` (`v(0) > 0`).
pub fn sqrt_series(v: &[f64]) -> Vec<f64> {
    let mut fact = vec![1.0; v.len()];
    for k in 1..v.len() {
        fact[k] = fact[k - 1] * k as f64;
    }
    let a: Vec<f64> = v.iter().zip(&fact).map(|(x, f)| x / f).collect();
    let mut b = vec![0.0; v.len()];
    if v.is_empty() {
        return b;
    }
    b[0] = a[0].sqrt();
    for k in 1..v.len() {
        let s: f64 = (1..k).map(|j| b[j] * b[k - j]).sum();
        b[k] = (a[k] - s) / (2.0 * b[0]);
    }
    b.iter().zip(&fact).map(|(x, f)| x * f).collect()
}

/// Derivatives at `t = 0` of `(Qbar, Pbar, dQbar, dPbar)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PacketDerivatives {
    pub q: Vec<f64>,
    pub p: Vec<f64>,
    pub dq: Vec<f64>,
    pub dp: Vec<f64>,
}

/// Lazily extended derivative tables for one packet and potential.
pub struct DerivativeEngine {
    engine: Engine,
    dof: Dof,
    hbar: f64,
    h_weyl: WeylPoly<f64>,
    h_comm: CommPoly<f64>,
    weyl: Vec<WeylPoly<f64>>,
    comm: Vec<CommPoly<f64>>,
    table: MomentDerivatives,
}

impl DerivativeEngine {
    pub fn new(engine: Engine, dof: &Dof, hbar: f64, potential: &PolynomialPotential) -> Result<Self> {
        if engine == Engine::Quantum && dof.nu(hbar) < 1.0 - 1e-12 {
            return Err(Error::UncertaintyViolation { nu: dof.nu(hbar) });
        }
        let q = WeylPoly::<f64>::q();
        let p = WeylPoly::<f64>::p();
        let weyl = vec![q.clone(), p.clone(), q.pow(2), p.pow(2)];
        let comm = weyl.iter().map(|w| w.shadow()).collect();
        let mut e = DerivativeEngine {
            engine,
            dof: *dof,
            hbar,
            h_weyl: potential.hamiltonian_weyl(),
            h_comm: potential.hamiltonian(),
            weyl,
            comm,
            table: MomentDerivatives::default(),
        };
        e.record()?;
        Ok(e)
    }

    fn record(&mut self) -> Result<()> {
        let values: Vec<f64> = match self.engine {
            Engine::Quantum => {
                let deg = self.weyl.iter().map(|w| w.qp_degree()).max().unwrap_or(0) as usize;
                let m = QuantumMoments::new(&self.dof, self.hbar, deg);
                self.weyl.iter().map(|w| m.expect(w).re).collect()
            }
            Engine::Classical => self.comm.iter().map(|c| classical_expectation(c, &self.dof)).collect(),
        };
        self.table.q.push(values[0]);
        self.table.p.push(values[1]);
        self.table.q2.push(values[2]);
        self.table.p2.push(values[3]);
        Ok(())
    }

    fn step(&mut self) -> Result<()> {
        match self.engine {
            Engine::Quantum => {
                for w in self.weyl.iter_mut() {
                    *w = w.heisenberg_step(&self.h_weyl);
                    if w.len() > TERM_CAP {
                        return Err(Error::TermCap { terms: w.len(), cap: TERM_CAP });
                    }
                }
            }
            Engine::Classical => {
                for c in self.comm.iter_mut() {
                    *c = c.poisson(&self.h_comm);
                }
            }
        }
        self.record()
    }

    /// Tables through derivative order `order` (inclusive).
    pub fn moments(&mut self, order: usize) -> Result<&MomentDerivatives> {
        while self.table.len() <= order {
            self.step()?;
        }
        Ok(&self.table)
    }

    pub fn packet_derivatives(&mut self, order: usize) -> Result<PacketDerivatives> {
        let t = self.moments(order)?;
        let q = t.q[..=order].to_vec();
        let p = t.p[..=order].to_vec();
        let (vq, vp) = t.variances();
        Ok(PacketDerivatives { q, p, dq: sqrt_series(&vq[..=order]), dp: sqrt_series(&vp[..=order]) })
    }
}

pub fn taylor_derivatives_classical(
    dof: &Dof,
    hbar: f64,
    potential: &PolynomialPotential,
    order: usize,
) -> Result<PacketDerivatives> {
    DerivativeEngine::new(Engine::Classical, dof, hbar, potential)?.packet_derivatives(order)
}

pub fn taylor_derivatives_quantum(
    dof: &Dof,
    hbar: f64,
    potential: &PolynomialPotential,
    order: usize,
) -> Result<PacketDerivatives> {
    DerivativeEngine::new(Engine::Quantum, dof, hbar, potential)?.packet_derivatives(order)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TaylorConfig {
    pub min_order: usize,
    pub max_order: usize,
    /// Relative size allowed for the last two kept terms.
    pub tol: f64,
}

impl Default for TaylorConfig {
    fn default() -> Self {
        TaylorConfig { min_order: 8, max_order: 40, tol: 1e-8 }
    }
}

/// Partial sums of a derivative table at one time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: f64,
    /// Size of the last two kept terms.
    pub last: f64,
}

pub(crate) fn partial_sum(d: &[f64], t: f64, order: usize) -> SeriesValue {
    let mut value = 0.0;
    let mut term_scale = 1.0;
    let mut last = [0.0f64; 2];
    for (k, dk) in d.iter().enumerate().take(order + 1) {
        if k > 0 {
            term_scale *= t / k as f64;
        }
        let term = dk * term_scale;
        value += term;
        last = [last[1], term.abs()];
    }
    SeriesValue { value, last: last[0] + last[1] }
}

/// Series values of `(<q>, <p>, Var q, Var p)` at `t`, with the order
/// raised until the last terms are negligible.
pub fn sum_series(engine: &mut DerivativeEngine, t: f64, cfg: &TaylorConfig) -> Result<([SeriesValue; 4], usize)> {
    let dof = engine.dof;
    let scales = [dof.dq, dof.dp, dof.dq * dof.dq, dof.dp * dof.dp];
    let mut order = cfg.min_order.max(1);
    loop {
        let m = engine.moments(order)?;
        let (vq, vp) = m.variances();
        let s = [
            partial_sum(&m.q, t, order),
            partial_sum(&m.p, t, order),
            partial_sum(&vq, t, order),
            partial_sum(&vp, t, order),
        ];
        let converged = s.iter().zip(&scales).all(|(v, sc)| v.last <= cfg.tol * (v.value.abs() + sc));
        if converged {
            return Ok((s, order));
        }
        if order >= cfg.max_order {
            let worst = s.iter().zip(&scales).map(|(v, sc)| v.last / (v.value.abs() + sc)).fold(0.0, f64::max);
            return Err(Error::SeriesDivergence { t, order, last: worst });
        }
        order = (order + 4).min(cfg.max_order);
    }
}

/// Trajectory from the Taylor series about `t = 0`.
pub fn evolve_taylor(
    dof: &Dof,
    hbar: f64,
    potential: &PolynomialPotential,
    engine: Engine,
    times: &[f64],
    cfg: &TaylorConfig,
) -> Result<TrajectoryRecord> {
    let mut eng = DerivativeEngine::new(engine, dof, hbar, potential)?;
    let mut rec = TrajectoryRecord::new(Method::Taylor);
    let mut max_order = 0;
    for &t in times {
        let (s, order) = sum_series(&mut eng, t, cfg)?;
        max_order = max_order.max(order);
        if !(s[2].value > 0.0 && s[3].value > 0.0) {
            return Err(Error::SeriesDivergence { t, order, last: f64::NAN });
        }
        let dq = s[2].value.sqrt();
        let dp = s[3].value.sqrt();
        rec.points.push(TrajectoryPoint {
            t,
            values: [s[0].value, s[1].value, dq, dp],
            errors: [s[0].last, s[1].last, s[2].last / (2.0 * dq), s[3].last / (2.0 * dp)],
        });
    }
    rec.diagnostics.push(format!("engine {}, highest series order {max_order}", engine.name()));
    Ok(rec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::quadratic::quadratic_evolve;

    #[test]
    fn sqrt_of_square() {
        // v = (1 + t)^2 -> sqrt derivatives 1, 1, 0, 0
        let v = [1.0, 2.0, 2.0, 0.0, 0.0];
        let s = sqrt_series(&v);
        for (a, b) in s.iter().zip([1.0, 1.0, 0.0, 0.0, 0.0]) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn first_spread_derivatives_vanish() {
        let dof = Dof::new(0.4, -0.3, 0.8, 1.1);
        let pot = PolynomialPotential::new(1.3, vec![0.0, 0.2, 0.5, -0.7, 0.9]).unwrap();
        for d in [
            taylor_derivatives_classical(&dof, 1.0, &pot, 3).unwrap(),
            taylor_derivatives_quantum(&dof, 1.0, &pot, 3).unwrap(),
        ] {
            assert!(d.dq[1].abs() < 1e-14 && d.dp[1].abs() < 1e-14);
            assert!(
                (d.p[1]
                    + pot.v(1)
                    + pot.v(2) * 0.4
                    + 0.5 * pot.v(3) * (0.16 + 0.64)
                    + pot.v(4) / 6.0 * (0.4f64.powi(3) + 3.0 * 0.4 * 0.64))
                    .abs()
                    < 1e-12
            );
        }
    }

    #[test]
    fn harmonic_series_matches_closed_form() {
        let dof = Dof::new(0.5, 0.2, 0.7, 0.9);
        let pot = PolynomialPotential::new(1.0, vec![0.0, 0.3, 2.0]).unwrap();
        let omega = 2f64.sqrt();
        let t = 0.1 / omega;
        let rec = evolve_taylor(&dof, 1.0, &pot, Engine::Quantum, &[t], &TaylorConfig::default()).unwrap();
        let exact = quadratic_evolve(&dof, &pot, t).unwrap();
        for (a, b) in rec.points[0].values.iter().zip(exact) {
            assert!((a - b).abs() < 1e-8);
        }
    }

    #[test]
    fn divergence_reported() {
        let dof = Dof::new(0.0, 0.0, 1.0, 1.0);
        let pot = PolynomialPotential::new(1.0, vec![0.0, 0.0, 0.0, 3.0]).unwrap();
        let cfg = TaylorConfig { max_order: 12, ..TaylorConfig::default() };
        let r = evolve_taylor(&dof, 1.0, &pot, Engine::Classical, &[5.0], &cfg);
        assert!(matches!(r, Err(Error::SeriesDivergence { .. })));
    }
}
