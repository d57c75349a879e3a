//! Classical maximum-entropy packets.
//!
//! Fixing `<q>`, `<q^2>`, `<p>`, `<p^2>` and maximizing the Gibbs entropy of
//! a phase-space density with measure `dq dp / v` gives a product of
//! Gaussians. The multipliers here are the exponents of that exponential
//! family, `rho = exp(-l1 q - l2 p - l3 q^2 - l4 p^2) / Z`.

use std::f64::consts::PI;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::params::{Dof, PacketParams};

/// Lagrange multipliers for one degree of freedom.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Multipliers {
    pub l1: f64,
    pub l2: f64,
    pub l3: f64,
    pub l4: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalMultipliers {
    pub per_dof: Vec<Multipliers>,
}

pub fn classical_multipliers(params: &PacketParams) -> Result<ClassicalMultipliers> {
    params.validate()?;
    let per_dof = params
        .dofs
        .iter()
        .map(|d| {
            let vq = d.dq * d.dq;
            let vp = d.dp * d.dp;
            Multipliers { l1: -d.q / vq, l2: -d.p / vp, l3: 0.5 / vq, l4: 0.5 / vp }
        })
        .collect();
    Ok(ClassicalMultipliers { per_dof })
}

/// Classical partition function `Z = (pi / v) exp(l1^2/4l3 + l2^2/4l4) / sqrt(l3 l4)`
/// for one degree of freedom.
pub fn classical_partition(m: &Multipliers, v: f64) -> f64 {
    PI / v / (m.l3 * m.l4).sqrt() * (m.l1 * m.l1 / (4.0 * m.l3) + m.l2 * m.l2 / (4.0 * m.l4)).exp()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalMEPacket {
    pub params: PacketParams,
    pub multipliers: ClassicalMultipliers,
}

impl ClassicalMEPacket {
    pub fn new(params: PacketParams) -> Result<Self> {
        let multipliers = classical_multipliers(&params)?;
        Ok(ClassicalMEPacket { params, multipliers })
    }

    /// Density with respect to `dq dp / v` (dimensionless).
    pub fn density(&self, q: &[f64], p: &[f64]) -> Result<f64> {
        classical_density(self, q, p)
    }

    /// `ln Z` summed over degrees of freedom.
    pub fn ln_partition(&self) -> f64 {
        let v = self.params.constants.v;
        self.multipliers.per_dof.iter().map(|m| classical_partition(m, v).ln()).sum()
    }
}

pub fn classical_density(packet: &ClassicalMEPacket, q: &[f64], p: &[f64]) -> Result<f64> {
    let n = packet.params.n_dofs();
    if q.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: q.len() });
    }
    if p.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: p.len() });
    }
    let v = packet.params.constants.v;
    let mut value = 1.0;
    for (k, d) in packet.params.dofs.iter().enumerate() {
        let zq = (q[k] - d.q) / d.dq;
        let zp = (p[k] - d.p) / d.dp;
        value *= v / (2.0 * PI) / (d.dq * d.dp) * (-0.5 * (zq * zq + zp * zp)).exp();
    }
    Ok(value)
}

/// Gibbs entropy `sum_k 1 + ln(2 pi dQ_k dP_k / v)`.
pub fn classical_entropy(params: &PacketParams) -> Result<f64> {
    params.validate()?;
    let v = params.constants.v;
    Ok(params.dofs.iter().map(|d| 1.0 + (2.0 * PI * d.dq * d.dp / v).ln()).sum())
}

/// Raw Gaussian moment `<x^n>` for mean `m` and standard deviation `s`,
/// from `M_n = m M_{n-1} + (n-1) s^2 M_{n-2}`.
pub fn gaussian_moment(n: usize, mean: f64, sd: f64) -> f64 {
    let var = sd * sd;
    let (mut prev, mut cur) = (0.0, 1.0);
    for k in 1..=n {
        let next = mean * cur + (k as f64 - 1.0) * var * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// All raw Gaussian moments `<x^0> .. <x^n>`.
pub fn gaussian_moments(n: usize, mean: f64, sd: f64) -> Vec<f64> {
    let var = sd * sd;
    let mut out = Vec::with_capacity(n + 1);
    out.push(1.0);
    if n >= 1 {
        out.push(mean);
    }
    for k in 2..=n {
        let next = mean * out[k - 1] + (k as f64 - 1.0) * var * out[k - 2];
        out.push(next);
    }
    out
}

/// `<q^k p^l>` in a one-dof classical packet. Position and momentum are
/// independent, so the moment factorizes.
pub fn classical_moment(dof: &Dof, k: usize, l: usize) -> f64 {
    gaussian_moment(k, dof.q, dof.dq) * gaussian_moment(l, dof.p, dof.dp)
}

/// Moment `<q^k>` by differentiating the partition function with respect to
/// `l1`: `(-1)^k Z^{-1} d^k Z / d l1^k`. Kept as an independent check of
/// [`gaussian_moment`].
pub fn partition_derivative_moment(k: usize, mean: f64, sd: f64) -> f64 {
    let l3 = 0.5 / (sd * sd);
    let l1 = -mean / (sd * sd);
    // d^k/dl1^k exp(l1^2 / 4 l3) = D_k(l1) exp(..), D_{k+1} = D_k' + (l1 / 2 l3) D_k
    let mut poly = vec![1.0];
    for _ in 0..k {
        let mut next = vec![0.0; poly.len() + 1];
        for (j, c) in poly.iter().enumerate() {
            if j > 0 {
                next[j - 1] += j as f64 * c;
            }
            next[j + 1] += c / (2.0 * l3);
        }
        poly = next;
    }
    let value: f64 = poly.iter().rev().fold(0.0, |acc, c| acc * l1 + c);
    if k.is_multiple_of(2) {
        value
    } else {
        -value
    }
}

/// Integer tables from the highest-order analysis of Gaussian moments.
///
/// `b[m][k]` (k = 1..=m) and `a[m][k]` (k = 1..=m+1) are the coefficients of
/// the odd and even `l1`-derivatives of `exp(l1^2 / 4 l3)`:
/// `a_{m,k} = b_{m,k-1} + (2k-1) b_{m,k}`, `b_{m+1,k} = a_{m,k} + 2k a_{m,k+1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct HighestOrder {
    pub a: Vec<Vec<BigUint>>,
    pub b: Vec<Vec<BigUint>>,
}

impl HighestOrder {
    /// `A_m = a_{m,1}`, the coefficient of `dQ^{2m}` in `<q^{2m}>`.
    pub fn a_m(&self, m: usize) -> &BigUint {
        &self.a[m][1]
    }

    /// `B_m = b_{m,1}`, the coefficient of `Q dQ^{2m-2}` in `<q^{2m-1}>`.
    pub fn b_m(&self, m: usize) -> &BigUint {
        &self.b[m][1]
    }
}

/// Tables for `1..=m`; index 0 of each table and of each row is unused.
pub fn highest_order_coefficients(m: usize) -> Result<HighestOrder> {
    if m == 0 {
        return Err(Error::InvalidArgument("highest-order table needs m >= 1".into()));
    }
    let mut a: Vec<Vec<BigUint>> = vec![Vec::new()];
    let mut b: Vec<Vec<BigUint>> = vec![Vec::new()];
    // m = 1: first derivative l1/(2 l3)
    b.push(vec![BigUint::zero(), BigUint::one()]);
    for mm in 1..=m {
        let bm = &b[mm];
        let mut am = vec![BigUint::zero(); mm + 2];
        am[1] = bm[1].clone();
        for k in 2..=mm {
            am[k] = &bm[k - 1] + BigUint::from(2 * k - 1) * &bm[k];
        }
        am[mm + 1] = bm[mm].clone();
        if mm < m {
            let mut next = vec![BigUint::zero(); mm + 2];
            for k in 1..=mm {
                next[k] = &am[k] + BigUint::from(2 * k) * &am[k + 1];
            }
            next[mm + 1] = am[mm + 1].clone();
            b.push(next);
        }
        a.push(am);
    }
    Ok(HighestOrder { a, b })
}
