//! Linear chain of `N + 1` equal masses with nearest-neighbour springs:
//! normal modes, the phonon Gibbs state, length statistics and the free
//! center-of-mass packet.
//!
//! The chain is `H = sum p_n^2 / (2 mu) + (kappa^2 / 2) sum (x_{n+1} - x_n - xi)^2`
//! with free ends. Its exact modes are
//! `Y^m_n = A(m) cos(m pi (n - 1/2) / (N + 1))` with
//! `omega_m = (2 kappa / sqrt(mu)) sin(m pi / (2 (N + 1)))`. The closely
//! related form with `N` in place of `N + 1` is available as
//! [`printed_mode_basis`] for comparison.

use std::f64::consts::PI;
use std::io::Write;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::dynamics::quadratic::quadratic_evolve;
use crate::dynamics::record::{fmt_f64, io_err, Method, TrajectoryPoint, TrajectoryRecord};
use crate::dynamics::PolynomialPotential;
use crate::error::{Error, Result};
use crate::params::Dof;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainModel {
    /// `N + 1`.
    pub n_particles: usize,
    pub mu: f64,
    pub kappa: f64,
    pub xi: f64,
    pub hbar: f64,
}

impl ChainModel {
    pub fn new(n_particles: usize, mu: f64, kappa: f64, xi: f64, hbar: f64) -> Result<Self> {
        if n_particles < 3 {
            return Err(Error::InvalidChain(format!("need at least 3 particles, got {n_particles}")));
        }
        for (name, v) in [("mu", mu), ("kappa", kappa), ("xi", xi), ("hbar", hbar)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidChain(format!("{name} must be finite and > 0, got {v}")));
            }
        }
        Ok(ChainModel { n_particles, mu, kappa, xi, hbar })
    }

    /// `N`, the number of springs and of internal modes.
    pub fn n(&self) -> usize {
        self.n_particles - 1
    }

    pub fn total_mass(&self) -> f64 {
        self.n_particles as f64 * self.mu
    }

    pub fn omega(&self, m: usize) -> f64 {
        2.0 * self.kappa / self.mu.sqrt() * (m as f64 * PI / (2.0 * self.n_particles as f64)).sin()
    }

    /// Internal mode frequencies `omega_1 .. omega_N`.
    pub fn internal_frequencies(&self) -> Vec<f64> {
        (1..self.n_particles).map(|m| self.omega(m)).collect()
    }

    /// Force-constant matrix `kappa^2` times the free-end path Laplacian.
    pub fn coupling_matrix(&self) -> DMatrix<f64> {
        let n = self.n_particles;
        let k2 = self.kappa * self.kappa;
        let mut k = DMatrix::zeros(n, n);
        for i in 0..n - 1 {
            k[(i, i)] += k2;
            k[(i + 1, i + 1)] += k2;
            k[(i, i + 1)] -= k2;
            k[(i + 1, i)] -= k2;
        }
        k
    }

    /// `Y^m_n` with zero-based particle index `n`.
    pub fn mode_amplitude(&self, n: usize, m: usize) -> f64 {
        let np = self.n_particles as f64;
        let a = if m == 0 { (1.0 / np).sqrt() } else { (2.0 / np).sqrt() };
        a * (m as f64 * PI * (n as f64 + 0.5) / np).cos()
    }

    pub fn zero_point_energy(&self) -> f64 {
        0.5 * self.hbar * sum(self.internal_frequencies())
    }
}

/// Neumaier-compensated sum.
fn sum(xs: impl IntoIterator<Item = f64>) -> f64 {
    let (mut s, mut c) = (0.0f64, 0.0f64);
    for x in xs {
        let t = s + x;
        c += if s.abs() >= x.abs() { (s - t) + x } else { (x - t) + s };
        s = t;
    }
    s + c
}

/// Mode matrix (`y[(n, m)] = Y^m_n`, zero-based rows) and frequencies.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeBasis {
    pub y: DMatrix<f64>,
    pub omega: Vec<f64>,
}

impl ModeBasis {
    /// `max |Y^T Y - I|`.
    pub fn orthogonality_residual(&self) -> f64 {
        let n = self.y.ncols();
        (self.y.transpose() * &self.y - DMatrix::identity(n, n)).abs().max()
    }

    /// Largest off-diagonal element of `Y^T K Y`, relative to the largest
    /// diagonal one, and the largest mismatch of the diagonal with `mu omega_m^2`.
    pub fn diagonalization_residual(&self, model: &ChainModel) -> (f64, f64) {
        let d = self.y.transpose() * model.coupling_matrix() * &self.y;
        let n = d.nrows();
        let scale = (0..n).map(|i| d[(i, i)].abs()).fold(0.0, f64::max);
        let mut off = 0.0f64;
        let mut diag = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    off = off.max(d[(i, j)].abs());
                }
            }
            diag = diag.max((d[(i, i)] - model.mu * self.omega[i].powi(2)).abs());
        }
        (off / scale, diag / scale)
    }
}

pub fn mode_basis(model: &ChainModel) -> ModeBasis {
    let np = model.n_particles;
    let y = DMatrix::from_fn(np, np, |n, m| model.mode_amplitude(n, m));
    ModeBasis { y, omega: (0..np).map(|m| model.omega(m)).collect() }
}

/// The cosine/sine form centered on the middle particle with `N` in the
/// argument and frequencies `(2 kappa / sqrt(mu)) sin(m pi / (2N))`. It is
/// not orthogonal for finite `N`; see [`ModeBasis::orthogonality_residual`].
pub fn printed_mode_basis(model: &ChainModel) -> ModeBasis {
    let np = model.n_particles;
    let n_big = model.n() as f64;
    let y = DMatrix::from_fn(np, np, |row, m| {
        let a = if m == 0 { (1.0 / np as f64).sqrt() } else { (2.0 / np as f64).sqrt() };
        let arg = PI * m as f64 / n_big * ((row + 1) as f64 - (n_big + 2.0) / 2.0);
        if m % 2 == 0 {
            a * arg.cos()
        } else {
            a * arg.sin()
        }
    });
    let omega = (0..np).map(|m| 2.0 * model.kappa / model.mu.sqrt() * (m as f64 * PI / (2.0 * n_big)).sin()).collect();
    ModeBasis { y, omega }
}

/// Frequencies from a dense symmetric eigensolve of `K / mu`, ascending.
pub fn numerical_frequencies(model: &ChainModel) -> Vec<f64> {
    let eig = SymmetricEigen::new(model.coupling_matrix() / model.mu);
    let mut w: Vec<f64> = eig.eigenvalues.iter().map(|l| l.max(0.0).sqrt()).collect();
    w.sort_by(f64::total_cmp);
    w
}

/// `max_n |sum_k K_nk|`: the center-of-mass coordinate and total momentum
/// commute with the internal Hamiltonian iff `K` annihilates the constant vector.
pub fn zero_mode_residual(model: &ChainModel) -> f64 {
    let k = model.coupling_matrix();
    k.row_iter().map(|r| r.sum().abs()).fold(0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhononGibbs {
    /// Inverse temperature; infinite for the ground state.
    pub lambda: f64,
    /// Occupations of the internal modes `1 .. N`.
    pub nbar: Vec<f64>,
    /// Expected internal energy, zero point included.
    pub energy: f64,
}

fn occupation(lambda: f64, hw: f64) -> f64 {
    if lambda.is_infinite() {
        0.0
    } else {
        1.0 / (lambda * hw).exp_m1()
    }
}

/// Thermal part `sum hbar omega nbar` of the energy.
fn thermal_energy(freqs: &[f64], hbar: f64, lambda: f64) -> f64 {
    sum(freqs.iter().map(|w| hbar * w * occupation(lambda, hbar * w)))
}

/// `lambda` with `sum hbar omega (nbar + 1/2) = energy`, to relative `1e-10`.
///
/// Uses `E = -d ln Z / d lambda` with `Z = prod_m Z_m`.
pub fn solve_lambda(freqs: &[f64], hbar: f64, energy: f64) -> Result<f64> {
    let zero_point = 0.5 * hbar * sum(freqs.iter().copied());
    if !energy.is_finite() || energy < zero_point {
        return Err(Error::InfeasibleEnergy { energy, zero_point });
    }
    let target = energy - zero_point;
    if target == 0.0 {
        return Ok(f64::INFINITY);
    }
    let f = |x: f64| thermal_energy(freqs, hbar, x.exp()) - target;
    // ln lambda bracket: f decreases from +inf to -target.
    let w_min = freqs.iter().copied().filter(|w| *w > 0.0).fold(f64::INFINITY, f64::min);
    let mut lo = (freqs.len() as f64 / target).ln();
    let mut hi = lo;
    let mut guard = 0;
    while f(lo) < 0.0 {
        lo -= 2.0;
        guard += 1;
        if guard > 400 {
            return Err(Error::RootFinding("no lower bracket for lambda".into()));
        }
    }
    while f(hi) > 0.0 {
        hi += 2.0;
        guard += 1;
        if guard > 800 || hi.exp() * hbar * w_min > 1e3 {
            break;
        }
    }
    if f(hi) > 0.0 {
        return Err(Error::RootFinding("no upper bracket for lambda".into()));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-12 {
            break;
        }
    }
    Ok((0.5 * (lo + hi)).exp())
}

/// One oscillator: `lambda = ln(1 + 1/nbar) / (hbar omega)`.
pub fn single_mode_lambda(energy: f64, omega: f64, hbar: f64) -> Result<f64> {
    let hw = hbar * omega;
    let nbar = energy / hw - 0.5;
    if nbar < 0.0 {
        return Err(Error::InfeasibleEnergy { energy, zero_point: 0.5 * hw });
    }
    Ok((1.0 + 1.0 / nbar).ln() / hw)
}

pub fn gibbs_from_lambda(model: &ChainModel, lambda: f64) -> Result<PhononGibbs> {
    if !(lambda > 0.0) {
        return Err(Error::InvalidArgument(format!("lambda must be > 0, got {lambda}")));
    }
    let freqs = model.internal_frequencies();
    let nbar: Vec<f64> = freqs.iter().map(|w| occupation(lambda, model.hbar * w)).collect();
    let energy = sum(freqs.iter().zip(&nbar).map(|(w, n)| model.hbar * w * (n + 0.5)));
    Ok(PhononGibbs { lambda, nbar, energy })
}

pub fn gibbs_from_energy(model: &ChainModel, energy: f64) -> Result<PhononGibbs> {
    let lambda = solve_lambda(&model.internal_frequencies(), model.hbar, energy)?;
    let mut g = gibbs_from_lambda(model, lambda)?;
    g.energy = energy;
    Ok(g)
}

/// `ln Z(lambda)` of the internal modes.
pub fn ln_partition(model: &ChainModel, lambda: f64) -> f64 {
    sum(model.internal_frequencies().iter().map(|w| {
        let x = lambda * model.hbar * w;
        -0.5 * x - (-(-x).exp_m1()).ln()
    }))
}

/// `Delta E^2 = sum (hbar omega)^2 nbar (nbar + 1)`.
pub fn energy_variance(model: &ChainModel, gibbs: &PhononGibbs) -> f64 {
    sum(model.internal_frequencies().iter().zip(&gibbs.nbar).map(|(w, n)| (model.hbar * w).powi(2) * n * (n + 1.0)))
}

/// Which particles bound the length operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LengthConvention {
    /// `x^(N+1) - x^(1)`, first to last particle; `<L> = N xi`.
    EndToEnd,
    /// `x^(N) - x^(1)`; `<L> = (N - 1) xi`.
    SecondToLast,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LengthStatistics {
    pub mean: f64,
    pub variance: f64,
    /// `L - <L> = sum_m c_m u_m`.
    pub coefficients: Vec<f64>,
}

impl LengthStatistics {
    pub fn relative_spread(&self) -> f64 {
        self.variance.sqrt() / self.mean
    }

    /// Largest `|c_m|` over even `m >= 2`.
    pub fn even_mode_leak(&self) -> f64 {
        self.coefficients.iter().enumerate().skip(2).step_by(2).map(|(_, c)| c.abs()).fold(0.0, f64::max)
    }
}

/// Length mean and variance in the Gibbs state, `<u_m^2> = hbar (2 nbar + 1) / (2 mu omega_m)`.
pub fn length_statistics(model: &ChainModel, gibbs: &PhononGibbs, convention: LengthConvention) -> LengthStatistics {
    let np = model.n_particles;
    let last = match convention {
        LengthConvention::EndToEnd => np - 1,
        LengthConvention::SecondToLast => np - 2,
    };
    let coefficients: Vec<f64> = (0..np).map(|m| model.mode_amplitude(last, m) - model.mode_amplitude(0, m)).collect();
    let variance = sum((1..np).map(|m| {
        let u2 = model.hbar / (2.0 * model.mu * model.omega(m)) * (2.0 * gibbs.nbar[m - 1] + 1.0);
        coefficients[m].powi(2) * u2
    }));
    LengthStatistics { mean: last as f64 * model.xi, variance, coefficients }
}

/// `(2 sqrt 3 / pi) / (kappa xi sqrt(lambda) sqrt(N + 1))`.
pub fn asymptotic_relative_length_spread(model: &ChainModel, lambda: f64) -> f64 {
    2.0 * 3f64.sqrt() / PI / (model.kappa * model.xi * lambda.sqrt()) / (model.n_particles as f64).sqrt()
}

/// Center-of-mass packet: a free particle of mass `(N + 1) mu`.
pub fn cm_packet(model: &ChainModel, cm: &Dof, times: &[f64]) -> Result<TrajectoryRecord> {
    let free = PolynomialPotential::free(model.total_mass())?;
    let mut rec = TrajectoryRecord::new(Method::ClosedForm);
    for &t in times {
        rec.points.push(TrajectoryPoint { t, values: quadratic_evolve(cm, &free, t)?, errors: [0.0; 4] });
    }
    rec.diagnostics.push(format!("free motion with total mass {}", model.total_mass()));
    Ok(rec)
}

/// Summary of one chain state.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainReport {
    pub model: ChainModel,
    pub gibbs: PhononGibbs,
    pub length: LengthStatistics,
    pub energy_sd: f64,
    pub asymptotic_dl_rel: f64,
    pub orthogonality_residual: f64,
    pub diagonalization_residual: f64,
    pub zero_mode_residual: f64,
}

pub fn chain_report(model: &ChainModel, gibbs: PhononGibbs) -> ChainReport {
    let length = length_statistics(model, &gibbs, LengthConvention::EndToEnd);
    // Dense checks are O(N^3); skip them for very long chains.
    let (orth, diag) = if model.n_particles <= 1024 {
        let basis = mode_basis(model);
        (basis.orthogonality_residual(), basis.diagonalization_residual(model).0)
    } else {
        (f64::NAN, f64::NAN)
    };
    ChainReport {
        model: *model,
        energy_sd: energy_variance(model, &gibbs).sqrt(),
        asymptotic_dl_rel: asymptotic_relative_length_spread(model, gibbs.lambda),
        gibbs,
        length,
        orthogonality_residual: orth,
        diagonalization_residual: diag,
        zero_mode_residual: zero_mode_residual(model),
    }
}

impl ChainReport {
    /// Mode table `m, omega_m, nbar_m` for the internal modes.
    pub fn write_modes_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(["m", "omega_m", "nbar_m"]).map_err(io_err)?;
        for (i, n) in self.gibbs.nbar.iter().enumerate() {
            let m = i + 1;
            wr.write_record([m.to_string(), fmt_f64(self.model.omega(m)), fmt_f64(*n)]).map_err(io_err)?;
        }
        wr.flush().map_err(|e| Error::InvalidArgument(e.to_string()))?;
        Ok(())
    }

    pub fn summary(&self) -> Vec<(&'static str, f64)> {
        vec![
            ("lambda", self.gibbs.lambda),
            ("E", self.gibbs.energy),
            ("dE_rel", self.energy_sd / self.gibbs.energy),
            ("L_mean", self.length.mean),
            ("dL_rel", self.length.relative_spread()),
            ("dL_rel_asymptotic", self.asymptotic_dl_rel),
            ("orthogonality_residual", self.orthogonality_residual),
            ("diagonalization_residual", self.diagonalization_residual),
            ("zero_mode_residual", self.zero_mode_residual),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(np: usize) -> ChainModel {
        ChainModel::new(np, 1.0, 1.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn zero_mode_is_constant() {
        let m = model(9);
        let b = mode_basis(&m);
        assert_eq!(b.omega[0], 0.0);
        for n in 0..9 {
            assert!((b.y[(n, 0)] - 1.0 / 3.0).abs() < 1e-15);
        }
        assert!(b.orthogonality_residual() < 1e-13);
        let (off, diag) = b.diagonalization_residual(&m);
        assert!(off < 1e-13 && diag < 1e-13);
    }

    #[test]
    fn printed_basis_is_not_orthogonal() {
        let b = printed_mode_basis(&model(9));
        assert!(b.orthogonality_residual() > 1e-3);
        assert!((b.omega[8] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn eigenfrequencies_agree() {
        let m = model(12);
        let num = numerical_frequencies(&m);
        for (k, w) in num.iter().enumerate() {
            assert!((w * w - m.omega(k).powi(2)).abs() < 1e-12);
        }
    }

    #[test]
    fn energy_roundtrip() {
        let m = model(20);
        let g = gibbs_from_lambda(&m, 0.7).unwrap();
        let back = gibbs_from_energy(&m, g.energy).unwrap();
        assert!((back.lambda / 0.7 - 1.0).abs() < 1e-10);
    }

    #[test]
    fn single_mode_closed_form() {
        let lam = solve_lambda(&[1.3], 0.9, 2.0).unwrap();
        let exact = single_mode_lambda(2.0, 1.3, 0.9).unwrap();
        assert!((lam / exact - 1.0).abs() < 1e-10);
    }

    #[test]
    fn infeasible_and_ground_state() {
        let m = model(5);
        let e0 = m.zero_point_energy();
        assert!(matches!(gibbs_from_energy(&m, 0.9 * e0), Err(Error::InfeasibleEnergy { .. })));
        let g = gibbs_from_energy(&m, e0).unwrap();
        assert!(g.lambda.is_infinite() && g.nbar.iter().all(|n| *n == 0.0));
    }

    #[test]
    fn energy_is_minus_log_partition_slope() {
        let m = model(15);
        let lam = 0.4;
        let h = 1e-5;
        let slope = (ln_partition(&m, lam + h) - ln_partition(&m, lam - h)) / (2.0 * h);
        let g = gibbs_from_lambda(&m, lam).unwrap();
        assert!((g.energy + slope).abs() < 1e-7 * g.energy);
        let curv = (ln_partition(&m, lam + h) - 2.0 * ln_partition(&m, lam) + ln_partition(&m, lam - h)) / (h * h);
        assert!((energy_variance(&m, &g) / curv - 1.0).abs() < 1e-4);
    }

    #[test]
    fn length_uses_odd_modes() {
        let m = model(11);
        let g = gibbs_from_lambda(&m, 1.0).unwrap();
        let s = length_statistics(&m, &g, LengthConvention::EndToEnd);
        assert_eq!(s.mean, 10.0);
        assert!(s.even_mode_leak() < 1e-14);
        assert!(s.coefficients[0].abs() < 1e-14);
        assert!(s.coefficients[1].abs() > 0.1);
    }
}
