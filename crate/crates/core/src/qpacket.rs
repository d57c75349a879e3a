//! Quantum maximum-entropy packets.
//!
//! The state is `T = exp(-l1 q - l2 p - l3 q^2 - l4 p^2) / Z`. In the number
//! basis of the reference oscillator (mass `dP/dQ`, unit frequency, centered
//! at `(Q, P)`) it is diagonal with geometric weights
//! `R_m = 2 (nu-1)^m / (nu+1)^(m+1)`.

use std::fmt::Write as _;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::classical::Multipliers;
use crate::error::{Error, Result};
use crate::params::{Dof, PacketParams};
use crate::weyl::WeylPoly;

/// Tail bound used to choose the basis cutoff.
pub const TAIL_TOLERANCE: f64 = 1e-10;

const BOUNDARY_EPS: f64 = 1e-12;

fn half_log(nu: f64) -> f64 {
    0.5 * ((nu + 1.0) / (nu - 1.0)).ln()
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuantumMultipliers {
    pub per_dof: Vec<Multipliers>,
}

/// Lagrange multipliers of the quantum packet: the classical ones scaled by
/// `(nu/2) ln((nu+1)/(nu-1))`.
pub fn quantum_multipliers(params: &PacketParams) -> Result<QuantumMultipliers> {
    params.validate()?;
    let hbar = params.hbar();
    let mut per_dof = Vec::with_capacity(params.n_dofs());
    for d in &params.dofs {
        let nu = d.nu(hbar);
        if nu < 1.0 - BOUNDARY_EPS {
            return Err(Error::UncertaintyViolation { nu });
        }
        if nu <= 1.0 + BOUNDARY_EPS {
            return Err(Error::PureStateBoundary);
        }
        let f = nu * half_log(nu);
        let vq = d.dq * d.dq;
        let vp = d.dp * d.dp;
        per_dof.push(Multipliers { l1: -d.q / vq * f, l2: -d.p / vp * f, l3: 0.5 / vq * f, l4: 0.5 / vp * f });
    }
    Ok(QuantumMultipliers { per_dof })
}

/// `Z = exp(l1^2/4l3 + l2^2/4l4) / (2 sinh(hbar sqrt(l3 l4)))` for one dof.
pub fn quantum_partition(m: &Multipliers, hbar: f64) -> f64 {
    (m.l1 * m.l1 / (4.0 * m.l3) + m.l2 * m.l2 / (4.0 * m.l4)).exp() / (2.0 * (hbar * (m.l3 * m.l4).sqrt()).sinh())
}

/// `ln Z` for one dof, stable for large arguments.
pub fn quantum_ln_partition(m: &Multipliers, hbar: f64) -> f64 {
    let x = hbar * (m.l3 * m.l4).sqrt();
    // 2 sinh x = e^x (1 - e^{-2x})
    m.l1 * m.l1 / (4.0 * m.l3) + m.l2 * m.l2 / (4.0 * m.l4) - x - (-(-2.0 * x).exp()).ln_1p()
}

/// Von Neumann entropy of the packet with uncertainty `nu`.
pub fn quantum_entropy(nu: f64) -> Result<f64> {
    if !(nu >= 1.0 - BOUNDARY_EPS) || !nu.is_finite() {
        return Err(Error::UncertaintyViolation { nu });
    }
    let nu = nu.max(1.0);
    let lower = if nu - 1.0 > 0.0 { 0.5 * (nu - 1.0) * (nu - 1.0).ln() } else { 0.0 };
    Ok(-std::f64::consts::LN_2 + 0.5 * (nu + 1.0) * (nu + 1.0).ln() - lower)
}

/// Ratio of consecutive diagonal weights, `(nu-1)/(nu+1)`.
pub fn weight_ratio(nu: f64) -> f64 {
    ((nu - 1.0) / (nu + 1.0)).max(0.0)
}

/// `R_0 .. R_{m_max}`.
pub fn diagonal_weights(nu: f64, m_max: usize) -> Result<Vec<f64>> {
    if !(nu >= 1.0 - BOUNDARY_EPS) || !nu.is_finite() {
        return Err(Error::UncertaintyViolation { nu });
    }
    let r = weight_ratio(nu);
    let mut w = Vec::with_capacity(m_max + 1);
    let mut cur = 1.0 - r;
    for _ in 0..=m_max {
        w.push(cur);
        cur *= r;
    }
    Ok(w)
}

/// `1 - sum_{m <= m_max} R_m`.
pub fn weight_tail(nu: f64, m_max: usize) -> f64 {
    weight_ratio(nu).powi(m_max as i32 + 1)
}

/// Smallest basis size whose discarded weight is below `TAIL_TOLERANCE`.
pub fn minimal_cutoff(nu: f64) -> usize {
    let r = weight_ratio(nu);
    if r <= 0.0 {
        return 1;
    }
    let m = (TAIL_TOLERANCE.ln() / r.ln()).ceil() as usize;
    // guard against round-off in the logarithms
    let mut m = m.max(1);
    while r.powi(m as i32) >= TAIL_TOLERANCE {
        m += 1;
    }
    m
}

/// Cutoff with headroom for levels populated during evolution.
pub fn dynamics_cutoff(nu: f64) -> usize {
    2 * minimal_cutoff(nu)
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuantumMEPacket {
    pub params: PacketParams,
    pub nu: Vec<f64>,
    /// `None` at the pure-state boundary `nu = 1`, where the multipliers diverge.
    pub multipliers: Option<QuantumMultipliers>,
}

impl QuantumMEPacket {
    pub fn new(params: PacketParams) -> Result<Self> {
        params.validate()?;
        params.check_uncertainty()?;
        let nu = params.nu();
        let multipliers = match quantum_multipliers(&params) {
            Ok(m) => Some(m),
            Err(Error::PureStateBoundary) => None,
            Err(e) => return Err(e),
        };
        Ok(QuantumMEPacket { params, nu, multipliers })
    }

    pub fn is_pure(&self) -> bool {
        self.nu.iter().all(|&n| n <= 1.0 + BOUNDARY_EPS)
    }

    pub fn entropy(&self) -> Result<f64> {
        self.nu.iter().map(|&n| quantum_entropy(n)).sum()
    }

    pub fn ln_partition(&self) -> Option<f64> {
        let hbar = self.params.hbar();
        self.multipliers.as_ref().map(|m| m.per_dof.iter().map(|x| quantum_ln_partition(x, hbar)).sum())
    }
}

/// Number basis of the reference oscillator centered at `(q0, p0)`:
/// `q = q0 + sq (a + a^dagger)`, `p = p0 - i sp (a - a^dagger)` with
/// `sq sp = hbar / 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorBasis {
    pub dim: usize,
    pub q0: f64,
    pub p0: f64,
    pub sq: f64,
    pub sp: f64,
    pub hbar: f64,
}

pub type CMatrix = DMatrix<Complex64>;

impl OscillatorBasis {
    /// Reference oscillator of a packet: mass `dP/dQ`, unit frequency.
    pub fn for_dof(dof: &Dof, hbar: f64, dim: usize) -> Self {
        let m0 = dof.dp / dof.dq;
        OscillatorBasis {
            dim,
            q0: dof.q,
            p0: dof.p,
            sq: (hbar / (2.0 * m0)).sqrt(),
            sp: (hbar * m0 / 2.0).sqrt(),
            hbar,
        }
    }

    pub fn with_dim(&self, dim: usize) -> Self {
        OscillatorBasis { dim, ..*self }
    }

    pub fn annihilation(&self) -> CMatrix {
        let mut a = CMatrix::zeros(self.dim, self.dim);
        for n in 1..self.dim {
            a[(n - 1, n)] = Complex64::new((n as f64).sqrt(), 0.0);
        }
        a
    }

    pub fn position(&self) -> CMatrix {
        let a = self.annihilation();
        let ad = a.adjoint();
        CMatrix::identity(self.dim, self.dim) * Complex64::new(self.q0, 0.0) + (a + ad) * Complex64::new(self.sq, 0.0)
    }

    pub fn momentum(&self) -> CMatrix {
        let a = self.annihilation();
        let ad = a.adjoint();
        CMatrix::identity(self.dim, self.dim) * Complex64::new(self.p0, 0.0) - (a - ad) * Complex64::new(0.0, self.sp)
    }

    /// Matrix of a Weyl polynomial with elements exact on this basis: products
    /// are formed in a padded basis and then truncated.
    pub fn operator(&self, x: &WeylPoly<f64>) -> CMatrix {
        let deg = x.qp_degree() as usize;
        let big = self.with_dim(self.dim + deg + 1);
        let q = big.position();
        let p = big.momentum();
        let mut q_pows = vec![CMatrix::identity(big.dim, big.dim)];
        let mut p_pows = vec![CMatrix::identity(big.dim, big.dim)];
        let mut out = CMatrix::zeros(big.dim, big.dim);
        let ih = Complex64::new(0.0, self.hbar);
        for (m, c) in x.terms() {
            while q_pows.len() <= m.q as usize {
                let next = q_pows.last().unwrap() * &q;
                q_pows.push(next);
            }
            while p_pows.len() <= m.p as usize {
                let next = p_pows.last().unwrap() * &p;
                p_pows.push(next);
            }
            let coeff = ih.powu(m.h) * *c;
            out += (&q_pows[m.q as usize] * &p_pows[m.p as usize]) * coeff;
        }
        out.view((0, 0), (self.dim, self.dim)).into_owned()
    }
}

/// Finite-basis realization of a single-dof quantum packet.
#[derive(Debug, Clone)]
pub struct TruncatedState {
    pub dim: usize,
    pub matrix: CMatrix,
    pub basis: OscillatorBasis,
    pub nu: f64,
    /// `1 - trace` before renormalization.
    pub defect: f64,
    /// Analytic weight beyond the cutoff.
    pub tail: f64,
}

/// Build the density matrix from the functional calculus of
/// `K' = (q-Q)^2/(2 dQ^2) + (p-P)^2/(2 dP^2)`.
pub fn build_truncated_state(packet: &QuantumMEPacket, dim: usize) -> Result<TruncatedState> {
    let dof = *packet.params.dof()?;
    let hbar = packet.params.hbar();
    let nu = packet.nu[0];
    let needed = minimal_cutoff(nu);
    let tail = weight_ratio(nu).powi(dim as i32);
    if dim < needed {
        return Err(Error::Truncation { dim, tail, suggested: needed });
    }
    let basis = OscillatorBasis::for_dof(&dof, hbar, dim);
    let mut k = WeylPoly::<f64>::zero();
    // (q - Q)^2 / (2 dQ^2) + (p - P)^2 / (2 dP^2)
    let shifted_q = WeylPoly::q().sub(&WeylPoly::constant(dof.q));
    let shifted_p = WeylPoly::p().sub(&WeylPoly::constant(dof.p));
    k = k.add(&shifted_q.pow(2).scale(&(0.5 / (dof.dq * dof.dq))));
    k = k.add(&shifted_p.pow(2).scale(&(0.5 / (dof.dp * dof.dp))));
    let kmat = basis.operator(&k);
    let eig = SymmetricEigen::new(kmat);
    let f = |x: f64| -> f64 {
        if nu <= 1.0 + BOUNDARY_EPS {
            // pure state: projector on the lowest level, K' = 1
            if (x - 1.0).abs() < 1e-9 {
                1.0
            } else {
                0.0
            }
        } else {
            2.0 / (nu * nu - 1.0).sqrt() * (-nu * half_log(nu) * x).exp()
        }
    };
    let mut diag = CMatrix::zeros(dim, dim);
    for i in 0..dim {
        diag[(i, i)] = Complex64::new(f(eig.eigenvalues[i]), 0.0);
    }
    let mut rho = &eig.eigenvectors * diag * eig.eigenvectors.adjoint();
    let trace = rho.trace().re;
    rho /= Complex64::new(trace, 0.0);
    Ok(TruncatedState { dim, matrix: rho, basis, nu, defect: 1.0 - trace, tail })
}

impl TruncatedState {
    pub fn expect(&self, op: &CMatrix) -> Complex64 {
        (&self.matrix * op).trace()
    }

    pub fn expect_poly(&self, x: &WeylPoly<f64>) -> Complex64 {
        self.expect(&self.basis.operator(x))
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = SymmetricEigen::new(self.matrix.clone()).eigenvalues.iter().copied().collect();
        ev.sort_by(|a, b| b.total_cmp(a));
        ev
    }

    pub fn von_neumann_entropy(&self) -> f64 {
        self.eigenvalues().iter().filter(|&&x| x > 0.0).map(|&x| -x * x.ln()).sum()
    }

    /// `(<q> - Q, <p> - P, <q^2> - Q^2 - dQ^2, <p^2> - P^2 - dP^2)`.
    pub fn constraint_residuals(&self, dof: &Dof) -> [f64; 4] {
        let q = WeylPoly::<f64>::q();
        let p = WeylPoly::<f64>::p();
        [
            self.expect_poly(&q).re - dof.q,
            self.expect_poly(&p).re - dof.p,
            self.expect_poly(&q.pow(2)).re - dof.q * dof.q - dof.dq * dof.dq,
            self.expect_poly(&p.pow(2)).re - dof.p * dof.p - dof.dp * dof.dp,
        ]
    }

    pub fn hermiticity_residual(&self) -> f64 {
        (&self.matrix - self.matrix.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn report(&self, dof: &Dof) -> String {
        let mut s = String::new();
        let r = self.constraint_residuals(dof);
        let _ = writeln!(s, "basis dimension     {}", self.dim);
        let _ = writeln!(s, "nu                  {:.12}", self.nu);
        let _ = writeln!(s, "tail bound          {:.3e}", self.tail);
        let _ = writeln!(s, "truncation defect   {:.3e}", self.defect);
        let _ = writeln!(s, "hermiticity         {:.3e}", self.hermiticity_residual());
        let _ = writeln!(s, "residual <q>        {:.3e}", r[0]);
        let _ = writeln!(s, "residual <p>        {:.3e}", r[1]);
        let _ = writeln!(s, "residual <q^2>      {:.3e}", r[2]);
        let _ = writeln!(s, "residual <p^2>      {:.3e}", r[3]);
        s
    }
}

/// Minimum-uncertainty wave function on a grid (requires `nu = 1`).
pub fn pure_limit_wavefunction(dof: &Dof, hbar: f64, grid: &[f64]) -> Result<Vec<Complex64>> {
    let nu = dof.nu(hbar);
    if (nu - 1.0).abs() > 1e-9 {
        return Err(Error::NotPureState { nu });
    }
    let norm = (nu / (2.0 * std::f64::consts::PI * dof.dq * dof.dq)).powf(0.25);
    Ok(grid
        .iter()
        .map(|&q| {
            let re = -nu * (q - dof.q).powi(2) / (4.0 * dof.dq * dof.dq);
            Complex64::from_polar(norm * re.exp(), dof.p * q / hbar)
        })
        .collect())
}
