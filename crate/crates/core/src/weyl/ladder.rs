//! Normal-ordered polynomials in `A^dagger`, `A` and the number-operator
//! projection used for expectation values in the diagonal representation.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::algebra::WeylPoly;
use super::poly::{Poly, Var};
use super::ring::Coeff;

/// `sum c_{r,s} A^dagger^r A^s`.
#[derive(Clone, PartialEq)]
pub struct LadderPoly<C: Coeff> {
    terms: BTreeMap<(u32, u32), C>,
}

impl<C: Coeff> Default for LadderPoly<C> {
    fn default() -> Self {
        LadderPoly { terms: BTreeMap::new() }
    }
}

impl<C: Coeff> fmt::Debug for LadderPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

impl<C: Coeff> LadderPoly<C> {
    pub fn constant(c: C) -> Self {
        Self::term(0, 0, c)
    }

    pub fn a() -> Self {
        Self::term(0, 1, C::unit())
    }

    pub fn a_dag() -> Self {
        Self::term(1, 0, C::unit())
    }

    /// `c A^dagger^r A^s`.
    pub fn term(r: u32, s: u32, c: C) -> Self {
        let mut out = Self::default();
        out.add_term(r, s, c);
        out
    }

    pub fn add_term(&mut self, r: u32, s: u32, c: C) {
        if c.is_nil() {
            return;
        }
        match self.terms.get_mut(&(r, s)) {
            Some(v) => {
                *v = v.plus(&c);
                if v.is_nil() {
                    self.terms.remove(&(r, s));
                }
            }
            None => {
                self.terms.insert((r, s), c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &C)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, r: u32, s: u32) -> C {
        self.terms.get(&(r, s)).cloned().unwrap_or_else(C::nil)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for ((r, s), c) in &other.terms {
            out.add_term(*r, *s, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&C::from_int(-1)))
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::default();
        for ((r, s), v) in &self.terms {
            out.add_term(*r, *s, v.times(c));
        }
        out
    }

    /// Product in normal order, using `A^s A^dagger^u = sum_k C(s,k) C(u,k) k!
    /// A^dagger^(u-k) A^(s-k)`.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::default();
        for ((r1, s1), c1) in &self.terms {
            for ((r2, s2), c2) in &other.terms {
                let base = c1.times(c2);
                for k in 0..=(*s1).min(*r2) {
                    let f = C::contraction(*s1, *r2, k);
                    out.add_term(r1 + r2 - k, s1 + s2 - k, base.times(&f));
                }
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::constant(C::unit());
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// The map N: drop unbalanced words, then rewrite
    /// `A^dagger^r A^r = n (n-1) ... (n-r+1)` with `n = A^dagger A`.
    pub fn map_n(&self) -> NumberPoly<C> {
        let mut coeffs: Vec<C> = Vec::new();
        for ((r, s), c) in &self.terms {
            if r != s {
                continue;
            }
            let ff = falling_factorial_coeffs(*r);
            if coeffs.len() < ff.len() {
                coeffs.resize(ff.len(), C::nil());
            }
            for (k, z) in ff.iter().enumerate() {
                if !z.is_zero() {
                    coeffs[k] = coeffs[k].plus(&c.times(&C::from_bigint(z)));
                }
            }
        }
        NumberPoly::new(coeffs)
    }
}

/// Coefficients of `x (x-1) ... (x-r+1)` in powers of `x` (signed Stirling
/// numbers of the first kind).
pub fn falling_factorial_coeffs(r: u32) -> Vec<BigInt> {
    let mut c = vec![BigInt::from(1)];
    for j in 0..r {
        // multiply by (x - j)
        let mut next = vec![BigInt::zero(); c.len() + 1];
        for (k, v) in c.iter().enumerate() {
            next[k + 1] += v;
            next[k] -= v * BigInt::from(j);
        }
        c = next;
    }
    c
}

/// `sum z_k (A^dagger A)^k`.
#[derive(Clone, PartialEq)]
pub struct NumberPoly<C: Coeff> {
    coeffs: Vec<C>,
}

impl<C: Coeff> fmt::Debug for NumberPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.coeffs.iter()).finish()
    }
}

impl<C: Coeff> NumberPoly<C> {
    pub fn new(mut coeffs: Vec<C>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_nil()) {
            coeffs.pop();
        }
        NumberPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    /// Coefficient of `(A^dagger A)^k`.
    pub fn z(&self, k: usize) -> C {
        self.coeffs.get(k).cloned().unwrap_or_else(C::nil)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `sum_k z_k <n^k>` given the number moments.
    pub fn average(&self, moments: &[C]) -> C {
        self.coeffs.iter().zip(moments).fold(C::nil(), |acc, (z, m)| acc.plus(&z.times(m)))
    }
}

/// Images of `q`, `p` and `i hbar` used to carry Weyl polynomials into the
/// ladder algebra.
#[derive(Clone, Debug)]
pub struct LadderContext<C: Coeff> {
    pub q: LadderPoly<C>,
    pub p: LadderPoly<C>,
    pub ihbar: C,
}

impl LadderContext<Poly> {
    /// Symbolic packet context: `q = Q + dQ r (A + A^dagger)`,
    /// `p = P - i dP r (A - A^dagger)` with `r = nu^{-1/2}` and
    /// `hbar = 2 dQ dP r^2`.
    pub fn symbolic() -> Self {
        let s_q = Poly::term(1, &[(Var::DQ, 1), (Var::R, 1)]);
        let s_p = Poly::term(1, &[(Var::DP, 1), (Var::R, 1)]).times(&Poly::i());
        let q = LadderPoly::constant(Poly::var(Var::Q)).add(&LadderPoly::a().add(&LadderPoly::a_dag()).scale(&s_q));
        let p = LadderPoly::constant(Poly::var(Var::P)).sub(&LadderPoly::a().sub(&LadderPoly::a_dag()).scale(&s_p));
        let ihbar = Poly::term(2, &[(Var::DQ, 1), (Var::DP, 1), (Var::R, 2)]).times(&Poly::i());
        LadderContext { q, p, ihbar }
    }
}

impl LadderContext<num_complex::Complex64> {
    pub fn numeric(q0: f64, p0: f64, dq: f64, dp: f64, nu: f64) -> Self {
        use num_complex::Complex64 as C;
        let sq = C::new(dq / nu.sqrt(), 0.0);
        let sp = C::new(0.0, dp / nu.sqrt());
        let q = LadderPoly::constant(C::new(q0, 0.0)).add(&LadderPoly::a().add(&LadderPoly::a_dag()).scale(&sq));
        let p = LadderPoly::constant(C::new(p0, 0.0)).sub(&LadderPoly::a().sub(&LadderPoly::a_dag()).scale(&sp));
        LadderContext { q, p, ihbar: C::new(0.0, 2.0 * dq * dp / nu) }
    }
}

/// Substitute the ladder images into every term and normal-order.
pub fn to_ladder<C: Coeff, D: Coeff, F: Fn(&C) -> D>(
    x: &WeylPoly<C>,
    ctx: &LadderContext<D>,
    lift: F,
) -> LadderPoly<D> {
    let mut q_pows: Vec<LadderPoly<D>> = vec![LadderPoly::constant(D::unit())];
    let mut p_pows: Vec<LadderPoly<D>> = vec![LadderPoly::constant(D::unit())];
    let mut out = LadderPoly::default();
    for (m, c) in x.terms() {
        while q_pows.len() <= m.q as usize {
            let next = q_pows.last().unwrap().mul(&ctx.q);
            q_pows.push(next);
        }
        while p_pows.len() <= m.p as usize {
            let next = p_pows.last().unwrap().mul(&ctx.p);
            p_pows.push(next);
        }
        let mut coeff = lift(c);
        for _ in 0..m.h {
            coeff = coeff.times(&ctx.ihbar);
        }
        let t = q_pows[m.q as usize].mul(&p_pows[m.p as usize]).scale(&coeff);
        out = out.add(&t);
    }
    out
}

/// `<(A^dagger A)^k>` as exact polynomial coefficients in `nu` (index = power).
///
/// With `I_0 = (nu + 1)/2` and `I_{k+1} = ((nu^2 - 1)/2) dI_k/dnu`,
/// `<n^k> = 2 I_k / (nu + 1)`; the division is exact for `k >= 1`.
pub fn number_moment_poly(k: usize) -> Vec<BigRational> {
    let half = BigRational::new(1.into(), 2.into());
    let mut i: Vec<BigRational> = vec![half.clone(), half.clone()];
    for _ in 0..k {
        let deriv: Vec<BigRational> =
            (1..i.len()).map(|j| &i[j] * BigRational::from_integer(BigInt::from(j))).collect();
        // (nu^2 - 1)/2 * deriv
        let mut next = vec![BigRational::zero(); deriv.len() + 2];
        for (j, d) in deriv.iter().enumerate() {
            next[j + 2] += d * &half;
            next[j] -= d * &half;
        }
        i = next;
    }
    // synthetic division of 2 I_k by (nu + 1)
    let n = i.len();
    let mut quot = vec![BigRational::zero(); n - 1];
    let mut carry = BigRational::zero();
    for j in (1..n).rev() {
        let v = BigRational::from_integer(2.into()) * &i[j] - &carry;
        quot[j - 1] = v.clone();
        carry = v;
    }
    let remainder = BigRational::from_integer(2.into()) * &i[0] - &carry;
    debug_assert!(remainder.is_zero(), "number moment not divisible by nu + 1");
    while quot.len() > 1 && quot.last().is_some_and(|c| c.is_zero()) {
        quot.pop();
    }
    quot
}

/// `<(A^dagger A)^k>` at a numeric `nu >= 1`.
pub fn number_moment(k: usize, nu: f64) -> f64 {
    number_moment_poly(k).iter().rev().fold(0.0, |acc, c| acc * nu + c.to_f64().unwrap_or(f64::NAN))
}
