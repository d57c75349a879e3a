use crate::error::{Error, Result};
use crate::weyl::{CommPoly, Poly, Var, WeylPoly};

/// Largest supported potential degree.
pub const MAX_DEGREE: usize = 12;

/// `H = p^2 / (2 mu) + sum_k V_k q^k / k!`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialPotential {
    pub mu: f64,
    /// `V_0 .. V_N` in the Taylor convention.
    pub coeffs: Vec<f64>,
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|j| j as f64).product()
}

impl PolynomialPotential {
    pub fn new(mu: f64, coeffs: Vec<f64>) -> Result<Self> {
        if !(mu.is_finite() && mu > 0.0) {
            return Err(Error::InvalidPotential(format!("mass must be finite and > 0, got {mu}")));
        }
        if let Some(c) = coeffs.iter().find(|c| !c.is_finite()) {
            return Err(Error::InvalidPotential(format!("non-finite coefficient {c}")));
        }
        let mut coeffs = coeffs;
        while coeffs.len() > 1 && coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        if coeffs.len() - 1 > MAX_DEGREE {
            return Err(Error::InvalidPotential(format!("degree {} exceeds the cap {MAX_DEGREE}", coeffs.len() - 1)));
        }
        Ok(PolynomialPotential { mu, coeffs })
    }

    pub fn free(mu: f64) -> Result<Self> {
        Self::new(mu, vec![0.0])
    }

    /// Only the listed `(k, V_k)` are non-zero.
    pub fn from_terms(mu: f64, terms: &[(usize, f64)]) -> Result<Self> {
        let n = terms.iter().map(|t| t.0).max().unwrap_or(0);
        let mut coeffs = vec![0.0; n + 1];
        for &(k, v) in terms {
            coeffs[k] += v;
        }
        Self::new(mu, coeffs)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn v(&self, k: usize) -> f64 {
        self.coeffs.get(k).copied().unwrap_or(0.0)
    }

    /// Power-basis coefficients `V_k / k!`.
    pub fn power_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().enumerate().map(|(k, v)| v / factorial(k)).collect()
    }

    pub fn value(&self, q: f64) -> f64 {
        self.power_coeffs().iter().rev().fold(0.0, |acc, c| acc * q + c)
    }

    /// `V'(q)`.
    pub fn derivative(&self, q: f64) -> f64 {
        let c = self.power_coeffs();
        let mut acc = 0.0;
        for k in (1..c.len()).rev() {
            acc = acc * q + k as f64 * c[k];
        }
        acc
    }

    pub fn energy(&self, q: f64, p: f64) -> f64 {
        p * p / (2.0 * self.mu) + self.value(q)
    }

    pub fn hamiltonian(&self) -> CommPoly<f64> {
        let mut h = CommPoly::term(0, 2, 0.5 / self.mu);
        for (k, c) in self.power_coeffs().into_iter().enumerate() {
            h.add_term(k as u32, 0, c);
        }
        h
    }

    pub fn hamiltonian_weyl(&self) -> WeylPoly<f64> {
        self.hamiltonian().to_weyl()
    }

    /// The Hamiltonian with `1/mu` and the non-zero `V_k` kept as symbols.
    pub fn symbolic_hamiltonian(&self) -> WeylPoly<Poly> {
        let ks: Vec<usize> = (1..self.coeffs.len()).filter(|&k| self.coeffs[k] != 0.0).collect();
        symbolic_hamiltonian(&ks)
    }
}

/// `p^2 / (2 mu) + sum_{k in ks} V_k q^k / k!` with symbolic coefficients.
pub fn symbolic_hamiltonian(ks: &[usize]) -> WeylPoly<Poly> {
    let mut h = WeylPoly::term(0, 2, 0, Poly::term_ratio(1, 2, &[(Var::InvMu, 1)]));
    for &k in ks {
        assert!(k <= MAX_DEGREE, "potential degree above cap");
        let fact: i64 = (1..=k as i64).product();
        h = h.add(&WeylPoly::term(k as u32, 0, 0, Poly::term_ratio(1, fact, &[(Var::V(k as u8), 1)])));
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn taylor_convention() {
        let v = PolynomialPotential::new(2.0, vec![1.0, -1.0, 2.0, 6.0]).unwrap();
        // 1 - q + q^2 + q^3
        assert!((v.value(2.0) - (1.0 - 2.0 + 4.0 + 8.0)).abs() < 1e-12);
        assert!((v.derivative(2.0) - (-1.0 + 4.0 + 12.0)).abs() < 1e-12);
        assert_eq!(v.degree(), 3);
    }

    #[test]
    fn validation() {
        assert!(PolynomialPotential::new(0.0, vec![1.0]).is_err());
        assert!(PolynomialPotential::new(1.0, vec![0.0; 14].into_iter().chain([1.0]).collect()).is_err());
        assert_eq!(PolynomialPotential::new(1.0, vec![0.0, 1.0, 0.0, 0.0]).unwrap().degree(), 1);
    }
}
