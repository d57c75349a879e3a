//! Classical ensemble oracle: sample the classical ME density and integrate
//! every sample with fixed-step RK4.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use super::potential::PolynomialPotential;
use super::record::{Method, TrajectoryPoint, TrajectoryRecord};
use crate::error::{Error, Result};
use crate::params::Dof;

/// Samples per work unit; fixed so the reduction order never depends on the
/// thread pool.
const CHUNK: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McConfig {
    pub samples: usize,
    pub seed: u64,
    /// RK4 steps over `[0, t_max]`.
    pub steps: usize,
    /// Allowed `|E(t) - E(0)| / (|E(0)| + dP^2 / mu)` per sample.
    pub drift_tol: f64,
}

impl Default for McConfig {
    fn default() -> Self {
        McConfig { samples: 100_000, seed: 0, steps: 4096, drift_tol: 1e-6 }
    }
}

pub const MIN_SAMPLES: usize = 1000;

/// Running central moments up to fourth order.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Moments {
    pub n: f64,
    pub mean: f64,
    m2: f64,
    m3: f64,
    m4: f64,
}

impl Moments {
    pub fn push(&mut self, x: f64) {
        self.merge(&Moments { n: 1.0, mean: x, ..Default::default() });
    }

    /// Pairwise combination of central sums.
    pub fn merge(&mut self, o: &Moments) {
        if o.n == 0.0 {
            return;
        }
        if self.n == 0.0 {
            *self = *o;
            return;
        }
        let (na, nb) = (self.n, o.n);
        let n = na + nb;
        let d = o.mean - self.mean;
        let d2 = d * d;
        let m4 = self.m4
            + o.m4
            + d2 * d2 * na * nb * (na * na - na * nb + nb * nb) / (n * n * n)
            + 6.0 * d2 * (na * na * o.m2 + nb * nb * self.m2) / (n * n)
            + 4.0 * d * (na * o.m3 - nb * self.m3) / n;
        let m3 = self.m3 + o.m3 + d2 * d * na * nb * (na - nb) / (n * n) + 3.0 * d * (na * o.m2 - nb * self.m2) / n;
        let m2 = self.m2 + o.m2 + d2 * na * nb / n;
        self.mean += d * nb / n;
        self.m2 = m2;
        self.m3 = m3;
        self.m4 = m4;
        self.n = n;
    }

    /// Sample variance with the `n - 1` denominator.
    pub fn variance(&self) -> f64 {
        self.m2 / (self.n - 1.0)
    }

    pub fn sd(&self) -> f64 {
        self.variance().sqrt()
    }

    pub fn se_mean(&self) -> f64 {
        (self.variance() / self.n).sqrt()
    }

    /// Large-sample standard error of the standard deviation.
    pub fn se_sd(&self) -> f64 {
        let s2 = self.m2 / self.n;
        let mu4 = self.m4 / self.n;
        ((mu4 - s2 * s2).max(0.0) / self.n).sqrt() / (2.0 * s2.sqrt())
    }
}

fn rk4_step(pot: &PolynomialPotential, q: f64, p: f64, h: f64) -> (f64, f64) {
    let f = |q: f64, p: f64| (p / pot.mu, -pot.derivative(q));
    let (k1q, k1p) = f(q, p);
    let (k2q, k2p) = f(q + 0.5 * h * k1q, p + 0.5 * h * k1p);
    let (k3q, k3p) = f(q + 0.5 * h * k2q, p + 0.5 * h * k2p);
    let (k4q, k4p) = f(q + h * k3q, p + h * k3p);
    (q + h / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q), p + h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p))
}

/// One sample path through the output grid, with the energy check.
fn sample_path(
    dof: &Dof,
    pot: &PolynomialPotential,
    times: &[f64],
    h_max: f64,
    cfg: &McConfig,
    index: usize,
) -> Result<Vec<(f64, f64)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(index as u64);
    let z1: f64 = rng.sample(StandardNormal);
    let z2: f64 = rng.sample(StandardNormal);
    let (mut q, mut p) = (dof.q + dof.dq * z1, dof.p + dof.dp * z2);
    let e0 = pot.energy(q, p);
    let scale = e0.abs() + dof.dp * dof.dp / pot.mu;
    let mut t = 0.0;
    let mut out = Vec::with_capacity(times.len());
    for &target in times {
        let span = target - t;
        if span > 0.0 {
            let n = (span / h_max).ceil().max(1.0) as usize;
            let h = span / n as f64;
            for _ in 0..n {
                (q, p) = rk4_step(pot, q, p, h);
            }
            t = target;
        }
        let drift = (pot.energy(q, p) - e0).abs() / scale;
        if !(drift <= cfg.drift_tol) {
            return Err(Error::McInstability { sample: index, drift });
        }
        out.push((q, p));
    }
    Ok(out)
}

/// Ensemble means and spreads with standard errors.
pub fn mc_oracle(
    dof: &Dof,
    potential: &PolynomialPotential,
    times: &[f64],
    cfg: &McConfig,
) -> Result<TrajectoryRecord> {
    if cfg.samples < MIN_SAMPLES {
        return Err(Error::InvalidArgument(format!("mc needs at least {MIN_SAMPLES} samples, got {}", cfg.samples)));
    }
    if cfg.steps == 0 {
        return Err(Error::InvalidArgument("mc steps must be positive".into()));
    }
    if times.windows(2).any(|w| w[1] < w[0]) || times.first().is_some_and(|t| *t < 0.0) {
        return Err(Error::InvalidArgument("output times must be non-negative and sorted".into()));
    }
    let t_max = times.last().copied().unwrap_or(0.0);
    let h_max = if t_max > 0.0 { t_max / cfg.steps as f64 } else { 1.0 };
    let n_chunks = cfg.samples.div_ceil(CHUNK);
    let chunks: Vec<Result<Vec<[Moments; 2]>>> = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = vec![[Moments::default(); 2]; times.len()];
            for i in c * CHUNK..((c + 1) * CHUNK).min(cfg.samples) {
                let path = sample_path(dof, potential, times, h_max, cfg, i)?;
                for (a, (q, p)) in acc.iter_mut().zip(path) {
                    a[0].push(q);
                    a[1].push(p);
                }
            }
            Ok(acc)
        })
        .collect();
    let mut total = vec![[Moments::default(); 2]; times.len()];
    for chunk in chunks {
        for (t, c) in total.iter_mut().zip(chunk?) {
            t[0].merge(&c[0]);
            t[1].merge(&c[1]);
        }
    }
    let mut rec = TrajectoryRecord::new(Method::Mc);
    for (&t, [mq, mp]) in times.iter().zip(&total) {
        rec.points.push(TrajectoryPoint {
            t,
            values: [mq.mean, mp.mean, mq.sd(), mp.sd()],
            errors: [mq.se_mean(), mp.se_mean(), mq.se_sd(), mp.se_sd()],
        });
    }
    rec.diagnostics.push(format!("samples {}, seed {}, rk4 step <= {:.3e}", cfg.samples, cfg.seed, h_max));
    Ok(rec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merge_matches_direct() {
        let xs: Vec<f64> = (0..50).map(|i| ((i * 37) % 11) as f64 * 0.3 - 1.0).collect();
        let mut whole = Moments::default();
        xs.iter().for_each(|x| whole.push(*x));
        let mut a = Moments::default();
        let mut b = Moments::default();
        xs[..17].iter().for_each(|x| a.push(*x));
        xs[17..].iter().for_each(|x| b.push(*x));
        a.merge(&b);
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let m4: f64 = xs.iter().map(|x| (x - mean).powi(4)).sum();
        assert!((a.mean - mean).abs() < 1e-14);
        assert!((a.m4 - m4).abs() < 1e-10 && (whole.m4 - m4).abs() < 1e-10);
        assert!((a.variance() - whole.variance()).abs() < 1e-13);
    }

    #[test]
    fn deterministic_and_conserves_momentum() {
        let dof = Dof::new(0.0, 1.5, 1.0, 0.5);
        let pot = PolynomialPotential::free(1.0).unwrap();
        let cfg = McConfig { samples: 3000, seed: 7, ..McConfig::default() };
        let a = mc_oracle(&dof, &pot, &[0.0, 1.0, 2.0], &cfg).unwrap();
        let b = mc_oracle(&dof, &pot, &[0.0, 1.0, 2.0], &cfg).unwrap();
        assert_eq!(a, b);
        for pt in &a.points {
            assert!((pt.p() - 1.5).abs() < 3.0 * pt.errors[1]);
        }
    }

    #[test]
    fn rejects_few_samples() {
        let dof = Dof::new(0.0, 0.0, 1.0, 1.0);
        let pot = PolynomialPotential::free(1.0).unwrap();
        let cfg = McConfig { samples: 10, ..McConfig::default() };
        assert!(mc_oracle(&dof, &pot, &[1.0], &cfg).is_err());
    }
}
