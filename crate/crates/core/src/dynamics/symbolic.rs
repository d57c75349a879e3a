//! Exact derivative iterates with `1/mu` and the potential coefficients kept
//! as symbols.

use super::potential::symbolic_hamiltonian;
use crate::error::Result;
use crate::weyl::{classical_expectation_symbolic, Adjoint, Coeff, CommPoly, Poly, SymbolicExpectation, Var, WeylPoly};

/// `X, [X,H]/(i hbar), ...` through `n` steps (`n + 1` entries).
pub fn heisenberg_iterates(x0: &WeylPoly<Poly>, h: &WeylPoly<Poly>, n: usize) -> Vec<WeylPoly<Poly>> {
    let mut out = vec![x0.clone()];
    for _ in 0..n {
        let next = out.last().unwrap().heisenberg_step(h);
        out.push(next);
    }
    out
}

/// `X, {X,H}, ...` through `n` steps.
pub fn poisson_iterates(x0: &CommPoly<Poly>, h: &CommPoly<Poly>, n: usize) -> Vec<CommPoly<Poly>> {
    let mut out = vec![x0.clone()];
    for _ in 0..n {
        let next = out.last().unwrap().poisson(h);
        out.push(next);
    }
    out
}

/// Derivatives at `t = 0` of `<q>`, `<p>`, `<q^2>`, `<p^2>` for both engines.
#[derive(Debug, Clone)]
pub struct SymbolicDerivatives {
    pub quantum: [Vec<Poly>; 4],
    pub classical: [Vec<Poly>; 4],
}

fn leibniz_variance(second: &[Poly], first: &[Poly]) -> Vec<Poly> {
    let mut out = Vec::with_capacity(second.len());
    for k in 0..second.len() {
        let mut v = second[k].clone();
        let mut binom: i64 = 1;
        for j in 0..=k {
            if j > 0 {
                binom = binom * (k - j + 1) as i64 / j as i64;
            }
            v = v.minus(&first[j].times(&first[k - j]).times(&Poly::int(binom)));
        }
        out.push(v);
    }
    out
}

impl SymbolicDerivatives {
    /// Potential `sum_{k in ks} V_k q^k / k!` through derivative `order`.
    pub fn compute(ks: &[usize], order: usize) -> Result<Self> {
        let h = symbolic_hamiltonian(ks);
        let hc = h.shadow();
        let one = Poly::int(1);
        let starts = [
            WeylPoly::term(1, 0, 0, one.clone()),
            WeylPoly::term(0, 1, 0, one.clone()),
            WeylPoly::term(2, 0, 0, one.clone()),
            WeylPoly::term(0, 2, 0, one),
        ];
        let mut ex = SymbolicExpectation::new();
        let mut quantum: [Vec<Poly>; 4] = Default::default();
        let mut classical: [Vec<Poly>; 4] = Default::default();
        for (i, x0) in starts.iter().enumerate() {
            for x in heisenberg_iterates(x0, &h, order) {
                quantum[i].push(ex.quantum(&x, Adjoint::Require)?);
            }
            for x in poisson_iterates(&x0.shadow(), &hc, order) {
                classical[i].push(classical_expectation_symbolic(&x));
            }
        }
        Ok(SymbolicDerivatives { quantum, classical })
    }

    /// Variance derivatives `(Var q, Var p)` for the quantum engine.
    pub fn quantum_variances(&self) -> (Vec<Poly>, Vec<Poly>) {
        let q = &self.quantum;
        (leibniz_variance(&q[2], &q[0]), leibniz_variance(&q[3], &q[1]))
    }

    pub fn classical_variances(&self) -> (Vec<Poly>, Vec<Poly>) {
        let c = &self.classical;
        (leibniz_variance(&c[2], &c[0]), leibniz_variance(&c[3], &c[1]))
    }
}

/// `(d^2 dQbar/dt^2)_0 = Var''(0) / (2 dQ)`, valid because `Var'(0) = 0`.
pub fn spread_second_derivative(variance: &[Poly], spread: Var) -> Poly {
    variance[2].times(&Poly::term_ratio(1, 2, &[(spread, -1)]))
}

/// Coefficient of `q^a p^b` (no `hbar`) in the `n`-th Heisenberg iterate of
/// `p` for the potential with terms `ks`.
pub fn momentum_iterate_coefficient(ks: &[usize], n: usize, a: u32, b: u32) -> Poly {
    let h = symbolic_hamiltonian(ks);
    let x = heisenberg_iterates(&WeylPoly::term(0, 1, 0, Poly::int(1)), &h, n);
    x[n].coefficient(a, b, 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ninth_derivative_landmark() {
        let c = momentum_iterate_coefficient(&[3], 9, 6, 0);
        let expected = Poly::term_ratio(-125, 4, &[(Var::V(3), 5), (Var::InvMu, 4)]);
        assert_eq!(c, expected);
    }

    #[test]
    fn first_derivatives() {
        let d = SymbolicDerivatives::compute(&[1, 2, 3, 4], 2).unwrap();
        // d<q>/dt = P / mu
        assert_eq!(d.quantum[0][1], Poly::term(1, &[(Var::P, 1), (Var::InvMu, 1)]));
        let (vq, vp) = d.quantum_variances();
        assert!(vq[1].is_empty() && vp[1].is_empty());
    }
}
