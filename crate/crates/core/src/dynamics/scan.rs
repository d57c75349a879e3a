//! Quantum versus classical packet trajectories as both spreads are scaled
//! by a common factor `s` (so `nu` grows as `s^2`).

use std::io::Write;

use rayon::prelude::*;

use super::potential::PolynomialPotential;
use super::record::{fmt_f64, io_err};
use super::taylor::{partial_sum, sum_series, DerivativeEngine, Engine, TaylorConfig};
use crate::error::{Error, Result};
use crate::params::Dof;

/// Below this size a classical value counts as zero and the deviation is
/// reported in absolute terms.
pub const RELATIVE_FLOOR: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanPoint {
    pub s: f64,
    pub nu: f64,
    /// Quantum `(Qbar, Pbar, dQbar, dPbar)` at the probe time.
    pub quantum: [f64; 4],
    pub classical: [f64; 4],
    /// Series truncation estimates of the quantum values.
    pub errors: [f64; 4],
    /// `|x_q - x_c| / |x_c|`, or `|x_q - x_c|` when `|x_c| <= RELATIVE_FLOOR`.
    pub deviations: [f64; 4],
}

impl ScanPoint {
    pub fn leading_deviation(&self) -> f64 {
        self.deviations.iter().copied().fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanResult {
    pub t_probe: f64,
    pub points: Vec<ScanPoint>,
}

pub const SCAN_HEADER: [&str; 15] = [
    "s", "nu", "Qbar", "Pbar", "dQbar", "dPbar", "method", "err_Q", "err_P", "err_dQ", "err_dP", "dev_Q", "dev_P",
    "dev_dQ", "dev_dP",
];

/// `n` log-spaced factors from `s_min` to `s_max`.
pub fn log_grid(s_min: f64, s_max: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![s_min],
        _ => (0..n).map(|i| s_min * (s_max / s_min).powf(i as f64 / (n - 1) as f64)).collect(),
    }
}

/// Least-squares slope of `ln y` against `ln x` over positive pairs.
pub fn fit_exponent(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> =
        xs.iter().zip(ys).filter(|(x, y)| **x > 0.0 && **y > 0.0).map(|(x, y)| (x.ln(), y.ln())).collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

fn deviation(diff: f64, classical: f64) -> f64 {
    if classical.abs() > RELATIVE_FLOOR {
        (diff / classical).abs()
    } else {
        diff.abs()
    }
}

/// One scan point. Differences are summed from the termwise difference of
/// the two derivative tables, which keeps small quantum corrections clear of
/// cancellation in the totals.
pub fn scan_point(
    base: &Dof,
    hbar: f64,
    potential: &PolynomialPotential,
    t: f64,
    s: f64,
    cfg: &TaylorConfig,
) -> Result<ScanPoint> {
    let dof = base.scaled(s);
    let nu = dof.nu(hbar);
    if nu <= 1.0 {
        return Err(Error::UncertaintyViolation { nu });
    }
    let mut quantum = DerivativeEngine::new(Engine::Quantum, &dof, hbar, potential)?;
    let mut classical = DerivativeEngine::new(Engine::Classical, &dof, hbar, potential)?;
    let (qs, q_order) = sum_series(&mut quantum, t, cfg)?;
    let (cs, c_order) = sum_series(&mut classical, t, cfg)?;
    let order = q_order.max(c_order);
    let mq = quantum.moments(order)?.clone();
    let mc = classical.moments(order)?.clone();
    let (vq_q, vp_q) = mq.variances();
    let (vq_c, vp_c) = mc.variances();
    let sub = |a: &[f64], b: &[f64]| -> Vec<f64> { a.iter().zip(b).map(|(x, y)| x - y).collect() };
    let diff_q = partial_sum(&sub(&mq.q, &mc.q), t, order).value;
    let diff_p = partial_sum(&sub(&mq.p, &mc.p), t, order).value;
    let diff_vq = partial_sum(&sub(&vq_q, &vq_c), t, order).value;
    let diff_vp = partial_sum(&sub(&vp_q, &vp_c), t, order).value;
    let c = [cs[0].value, cs[1].value, cs[2].value.sqrt(), cs[3].value.sqrt()];
    let q = [qs[0].value, qs[1].value, qs[2].value.sqrt(), qs[3].value.sqrt()];
    // sqrt(a) - sqrt(b) = (a - b) / (sqrt(a) + sqrt(b))
    let diffs = [diff_q, diff_p, diff_vq / (q[2] + c[2]), diff_vp / (q[3] + c[3])];
    let mut deviations = [0.0; 4];
    for i in 0..4 {
        deviations[i] = deviation(diffs[i], c[i]);
    }
    Ok(ScanPoint {
        s,
        nu,
        quantum: q,
        classical: c,
        errors: [qs[0].last, qs[1].last, qs[2].last / (2.0 * q[2]), qs[3].last / (2.0 * q[3])],
        deviations,
    })
}

pub fn classical_limit_scan(
    base: &Dof,
    hbar: f64,
    potential: &PolynomialPotential,
    t_probe: f64,
    scales: &[f64],
    cfg: &TaylorConfig,
) -> Result<ScanResult> {
    let points: Vec<Result<ScanPoint>> = scales
        .par_iter()
        .map(|&s| {
            scan_point(base, hbar, potential, t_probe, s, cfg)
                .map_err(|e| Error::AtScanPoint { s, source: Box::new(e) })
        })
        .collect();
    Ok(ScanResult { t_probe, points: points.into_iter().collect::<Result<_>>()? })
}

impl ScanResult {
    pub fn scales(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.s).collect()
    }

    pub fn leading_deviations(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.leading_deviation()).collect()
    }

    /// Power-law exponent of the leading deviation in `s`.
    pub fn fitted_exponent(&self) -> Option<f64> {
        fit_exponent(&self.scales(), &self.leading_deviations())
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(SCAN_HEADER).map_err(io_err)?;
        for p in &self.points {
            let mut row = vec![fmt_f64(p.s), fmt_f64(p.nu)];
            row.extend(p.quantum.iter().map(|v| fmt_f64(*v)));
            row.push("taylor".to_string());
            row.extend(p.errors.iter().map(|v| fmt_f64(*v)));
            row.extend(p.deviations.iter().map(|v| fmt_f64(*v)));
            wr.write_record(&row).map_err(io_err)?;
        }
        wr.flush().map_err(|e| Error::InvalidArgument(e.to_string()))?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        String::from_utf8(buf).map_err(|e| Error::InvalidArgument(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponent_of_power_law() {
        let xs = log_grid(1.0, 32.0, 6);
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x.powf(-2.0)).collect();
        assert!((fit_exponent(&xs, &ys).unwrap() + 2.0).abs() < 1e-12);
        assert!((xs[5] - 32.0).abs() < 1e-12);
    }

    #[test]
    fn quadratic_has_no_deviation() {
        let dof = Dof::new(0.5, 0.2, 1.0, 1.0);
        let pot = PolynomialPotential::new(1.0, vec![0.0, 0.1, 0.8]).unwrap();
        let r = classical_limit_scan(&dof, 1.0, &pot, 0.5, &[1.0, 4.0], &TaylorConfig::default()).unwrap();
        for p in &r.points {
            assert!(p.leading_deviation() < 1e-10, "{:?}", p.deviations);
        }
    }

    #[test]
    fn invalid_scale_is_annotated() {
        let dof = Dof::new(0.0, 0.0, 0.8, 0.8);
        let pot = PolynomialPotential::new(1.0, vec![0.0, 0.0, 0.0, 0.1]).unwrap();
        let r = classical_limit_scan(&dof, 1.0, &pot, 0.5, &[0.5, 2.0], &TaylorConfig::default());
        assert!(matches!(r, Err(Error::AtScanPoint { s, .. }) if s == 0.5));
    }
}
