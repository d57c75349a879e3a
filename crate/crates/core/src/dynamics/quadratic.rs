//! Exact evolution for potentials of degree at most two, where classical
//! and quantum packets move identically.

use super::potential::PolynomialPotential;
use crate::error::{Error, Result};
use crate::params::Dof;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Free,
    UniformForce,
    Harmonic,
    /// `V_2 < 0`: spreads grow exponentially.
    AntiHarmonic,
}

impl Regime {
    pub fn name(self) -> &'static str {
        match self {
            Regime::Free => "free",
            Regime::UniformForce => "uniform-force",
            Regime::Harmonic => "harmonic",
            Regime::AntiHarmonic => "anti-harmonic",
        }
    }
}

/// Linear flow `q(t) = f0 + q f1 + p f2`, `p(t) = g0 + q g1 + p g2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticSolution {
    pub regime: Regime,
    pub mu: f64,
    pub v1: f64,
    pub v2: f64,
    /// `sqrt(mu |V_2|)`
    pub xi: f64,
    /// `sqrt(|V_2| / mu)`
    pub omega: f64,
}

/// Values of `f0, f1, f2, g0, g1, g2` at one time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowCoefficients {
    pub f: [f64; 3],
    pub g: [f64; 3],
}

impl QuadraticSolution {
    pub fn new(potential: &PolynomialPotential) -> Result<Self> {
        if potential.degree() > 2 {
            return Err(Error::InvalidPotential(format!(
                "closed-form evolution needs degree <= 2, got {}",
                potential.degree()
            )));
        }
        let mu = potential.mu;
        let v1 = potential.v(1);
        let v2 = potential.v(2);
        let regime = if v2 > 0.0 {
            Regime::Harmonic
        } else if v2 < 0.0 {
            Regime::AntiHarmonic
        } else if v1 != 0.0 {
            Regime::UniformForce
        } else {
            Regime::Free
        };
        Ok(QuadraticSolution { regime, mu, v1, v2, xi: (mu * v2.abs()).sqrt(), omega: (v2.abs() / mu).sqrt() })
    }

    pub fn at(&self, t: f64) -> FlowCoefficients {
        match self.regime {
            Regime::Free | Regime::UniformForce => FlowCoefficients {
                f: [-self.v1 / (2.0 * self.mu) * t * t, 1.0, t / self.mu],
                g: [-self.v1 * t, 0.0, 1.0],
            },
            Regime::Harmonic => {
                let (s, c) = (self.omega * t).sin_cos();
                let r = self.v1 / self.v2;
                FlowCoefficients { f: [-r * (1.0 - c), c, s / self.xi], g: [-self.xi * r * s, -self.xi * s, c] }
            }
            Regime::AntiHarmonic => {
                let (s, c) = ((self.omega * t).sinh(), (self.omega * t).cosh());
                let r = self.v1 / self.v2;
                FlowCoefficients { f: [-r * (1.0 - c), c, s / self.xi], g: [self.xi * r * s, self.xi * s, c] }
            }
        }
    }

    /// `(Qbar, Pbar, dQbar, dPbar)` at `t`.
    pub fn evolve(&self, dof: &Dof, t: f64) -> [f64; 4] {
        let FlowCoefficients { f, g } = self.at(t);
        [
            f[0] + dof.q * f[1] + dof.p * f[2],
            g[0] + dof.q * g[1] + dof.p * g[2],
            (f[1] * f[1] * dof.dq * dof.dq + f[2] * f[2] * dof.dp * dof.dp).sqrt(),
            (g[1] * g[1] * dof.dq * dof.dq + g[2] * g[2] * dof.dp * dof.dp).sqrt(),
        ]
    }
}

/// Closed-form packet evolution for degree-2 potentials.
pub fn quadratic_evolve(dof: &Dof, potential: &PolynomialPotential, t: f64) -> Result<[f64; 4]> {
    Ok(QuadraticSolution::new(potential)?.evolve(dof, t))
}

/// Natural time scale: one period for the oscillator, one e-folding for the
/// inverted oscillator and the spreading time `mu dQ / dP` otherwise.
pub fn characteristic_time(dof: &Dof, potential: &PolynomialPotential) -> f64 {
    let v2 = potential.v(2);
    let omega = (v2.abs() / potential.mu).sqrt();
    if potential.degree() <= 2 && v2 > 0.0 {
        2.0 * std::f64::consts::PI / omega
    } else if potential.degree() <= 2 && v2 < 0.0 {
        1.0 / omega
    } else {
        potential.mu * dof.dq / dof.dp
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn initial_values() {
        for v in [vec![0.0], vec![0.0, 1.0], vec![0.0, 0.5, 2.0], vec![0.0, 0.5, -2.0]] {
            let s = QuadraticSolution::new(&PolynomialPotential::new(1.5, v).unwrap()).unwrap();
            let c = s.at(0.0);
            assert_eq!(c.f, [0.0, 1.0, 0.0]);
            assert_eq!(c.g, [0.0, 0.0, 1.0]);
        }
    }

    #[test]
    fn free_particle() {
        let dof = Dof::new(1.0, 2.0, 0.5, 0.3);
        let pot = PolynomialPotential::free(2.0).unwrap();
        let [q, p, dq, dp] = quadratic_evolve(&dof, &pot, 3.0).unwrap();
        assert!((q - 4.0).abs() < 1e-14);
        assert_eq!(p, 2.0);
        assert!((dq - (0.25f64 + 9.0 * 0.09 / 4.0).sqrt()).abs() < 1e-14);
        assert_eq!(dp, 0.3);
    }

    #[test]
    fn harmonic_quarter_period() {
        let dof = Dof::new(0.7, 1.3, 0.4, 0.9);
        let pot = PolynomialPotential::new(2.0, vec![0.0, 0.0, 3.0]).unwrap();
        let s = QuadraticSolution::new(&pot).unwrap();
        let t = std::f64::consts::FRAC_PI_2 / s.omega;
        let [q, _, dq, _] = s.evolve(&dof, t);
        assert!((q - 1.3 / s.xi).abs() < 1e-12);
        assert!((dq - 0.9 / s.xi).abs() < 1e-12);
    }

    #[test]
    fn flows_satisfy_hamilton_equations() {
        for v in [vec![0.3, 0.7], vec![0.0, 0.5, 2.0], vec![0.0, -0.4, -1.5]] {
            let pot = PolynomialPotential::new(1.7, v).unwrap();
            let s = QuadraticSolution::new(&pot).unwrap();
            let (q0, p0) = (0.4, -0.6);
            let traj = |t: f64| {
                let c = s.at(t);
                (c.f[0] + q0 * c.f[1] + p0 * c.f[2], c.g[0] + q0 * c.g[1] + p0 * c.g[2])
            };
            let (t, h) = (0.8, 1e-5);
            let (q, p) = traj(t);
            let dq = (traj(t + h).0 - traj(t - h).0) / (2.0 * h);
            let dp = (traj(t + h).1 - traj(t - h).1) / (2.0 * h);
            assert!((dq - p / pot.mu).abs() < 1e-8);
            assert!((dp + pot.derivative(q)).abs() < 1e-8);
        }
    }

    #[test]
    fn rejects_cubic() {
        let pot = PolynomialPotential::new(1.0, vec![0.0, 0.0, 0.0, 1.0]).unwrap();
        assert!(QuadraticSolution::new(&pot).is_err());
    }
}
