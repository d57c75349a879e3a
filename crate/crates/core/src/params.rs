use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Units of action and of phase-space volume.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constants {
    pub hbar: f64,
    /// Phase-space cell volume that makes the classical density dimensionless.
    pub v: f64,
}

impl Default for Constants {
    fn default() -> Self {
        Constants { hbar: 1.0, v: 2.0 * PI }
    }
}

impl Constants {
    /// `v = 2*pi*hbar`.
    pub fn with_hbar(hbar: f64) -> Self {
        Constants { hbar, v: 2.0 * PI * hbar }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.hbar.is_finite() && self.hbar > 0.0) {
            return Err(Error::InvalidConstant { name: "hbar", value: self.hbar });
        }
        if !(self.v.is_finite() && self.v > 0.0) {
            return Err(Error::InvalidConstant { name: "v", value: self.v });
        }
        Ok(())
    }
}

/// Means and standard deviations of one canonical pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dof {
    pub q: f64,
    pub p: f64,
    pub dq: f64,
    pub dp: f64,
}

impl Dof {
    pub fn new(q: f64, p: f64, dq: f64, dp: f64) -> Self {
        Dof { q, p, dq, dp }
    }

    /// Dimensionless uncertainty `2 dQ dP / hbar`.
    pub fn nu(&self, hbar: f64) -> f64 {
        2.0 * self.dq * self.dp / hbar
    }

    /// Same means, both spreads multiplied by `s`.
    pub fn scaled(&self, s: f64) -> Self {
        Dof { dq: self.dq * s, dp: self.dp * s, ..*self }
    }
}

/// Packet parameters for any number of degrees of freedom.
#[derive(Debug, Clone, PartialEq)]
pub struct PacketParams {
    pub dofs: Vec<Dof>,
    pub constants: Constants,
}

impl PacketParams {
    /// Validated constructor.
    pub fn new(dofs: Vec<Dof>, constants: Constants) -> Result<Self> {
        let params = PacketParams { dofs, constants };
        params.validate()?;
        Ok(params)
    }

    /// One degree of freedom with default constants.
    pub fn single(q: f64, p: f64, dq: f64, dp: f64) -> Result<Self> {
        Self::new(vec![Dof::new(q, p, dq, dp)], Constants::default())
    }

    pub fn single_with(dof: Dof, constants: Constants) -> Result<Self> {
        Self::new(vec![dof], constants)
    }

    pub fn validate(&self) -> Result<()> {
        self.constants.validate()?;
        for (i, d) in self.dofs.iter().enumerate() {
            let ok = d.dq.is_finite() && d.dp.is_finite() && d.dq > 0.0 && d.dp > 0.0;
            if !ok || !d.q.is_finite() || !d.p.is_finite() {
                return Err(Error::InvalidVariance { dof: i, dq: d.dq, dp: d.dp });
            }
            let nu = d.nu(self.constants.hbar);
            if !(nu.is_finite() && nu > 0.0) {
                return Err(Error::InvalidVariance { dof: i, dq: d.dq, dp: d.dp });
            }
        }
        Ok(())
    }

    pub fn n_dofs(&self) -> usize {
        self.dofs.len()
    }

    pub fn hbar(&self) -> f64 {
        self.constants.hbar
    }

    pub fn nu(&self) -> Vec<f64> {
        self.dofs.iter().map(|d| d.nu(self.constants.hbar)).collect()
    }

    /// The only degree of freedom, or an error for multi-dof packets.
    pub fn dof(&self) -> Result<&Dof> {
        match self.dofs.as_slice() {
            [d] => Ok(d),
            _ => Err(Error::SingleDofOnly(self.dofs.len())),
        }
    }

    /// Quantum admissibility: every `nu >= 1`.
    pub fn check_uncertainty(&self) -> Result<()> {
        for nu in self.nu() {
            // allow round-off right at the boundary
            if nu < 1.0 - 1e-12 {
                return Err(Error::UncertaintyViolation { nu });
            }
        }
        Ok(())
    }

    pub fn scaled(&self, s: f64) -> Result<Self> {
        Self::new(self.dofs.iter().map(|d| d.scaled(s)).collect(), self.constants)
    }
}
