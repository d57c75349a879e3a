//! Polynomials in noncommuting `q`, `p` with `[q, p] = i hbar`.
//!
//! Terms are stored in q-left-of-p order. The key `(a, b, h)` stands for
//! `(i hbar)^h q^a p^b`, so the commutation constant never enters the
//! coefficient ring and the classical shadow is the `h = 0` part.

use std::collections::BTreeMap;
use std::fmt;

use super::ring::Coeff;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WeylMono {
    pub q: u32,
    pub p: u32,
    pub h: u32,
}

#[derive(Clone, PartialEq)]
pub struct WeylPoly<C: Coeff> {
    terms: BTreeMap<WeylMono, C>,
}

impl<C: Coeff> Default for WeylPoly<C> {
    fn default() -> Self {
        WeylPoly { terms: BTreeMap::new() }
    }
}

impl<C: Coeff> WeylPoly<C> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(C::unit())
    }

    pub fn constant(c: C) -> Self {
        Self::term(0, 0, 0, c)
    }

    pub fn q() -> Self {
        Self::term(1, 0, 0, C::unit())
    }

    pub fn p() -> Self {
        Self::term(0, 1, 0, C::unit())
    }

    /// `c (i hbar)^h q^a p^b`.
    pub fn term(a: u32, b: u32, h: u32, c: C) -> Self {
        let mut w = Self::default();
        w.add_term(WeylMono { q: a, p: b, h }, c);
        w
    }

    /// The word `x_1 x_2 ... x_n`, with `'q'`/`'p'` letters, in canonical form.
    pub fn word(letters: &str) -> Self {
        letters.chars().fold(Self::one(), |acc, ch| match ch {
            'q' => acc.mul(&Self::q()),
            'p' => acc.mul(&Self::p()),
            other => panic!("unknown letter {other:?} in word"),
        })
    }

    pub fn add_term(&mut self, m: WeylMono, c: C) {
        if c.is_nil() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v = v.plus(&c);
                if v.is_nil() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&WeylMono, &C)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, a: u32, b: u32, h: u32) -> C {
        self.terms.get(&WeylMono { q: a, p: b, h }).cloned().unwrap_or_else(C::nil)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree in `q`, `p`, counting each `hbar` as degree 2.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|m| m.q + m.p + 2 * m.h).max().unwrap_or(0)
    }

    /// Degree in `q` and `p` alone.
    pub fn qp_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.q + m.p).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&C::from_int(-1)))
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::default();
        for (m, v) in &self.terms {
            out.add_term(*m, v.times(c));
        }
        out
    }

    /// Canonical-form product.
    ///
    /// Moving `p^b` past `q^c` gives
    /// `p^b q^c = sum_k C(b,k) C(c,k) k! (-i hbar)^k q^(c-k) p^(b-k)`.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::default();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let base = c1.times(c2);
                for k in 0..=m1.p.min(m2.q) {
                    let mut f = C::contraction(m1.p, m2.q, k);
                    if k % 2 == 1 {
                        f = f.negate();
                    }
                    let m = WeylMono { q: m1.q + m2.q - k, p: m1.p + m2.p - k, h: m1.h + m2.h + k };
                    out.add_term(m, base.times(&f));
                }
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// `[self, other]`; every surviving term carries at least one `hbar`.
    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    /// `[self, H] / (i hbar)`, the Heisenberg time derivative generator.
    pub fn heisenberg_step(&self, hamiltonian: &Self) -> Self {
        let c = self.commutator(hamiltonian);
        let mut out = Self::default();
        for (m, v) in c.terms {
            // h = 0 terms cancel exactly; in floating point only roundoff is left.
            if m.h >= 1 {
                out.add_term(WeylMono { h: m.h - 1, ..m }, v);
            }
        }
        out
    }

    /// Adjoint for real coefficient rings: `(i hbar)^h -> (-i hbar)^h` and
    /// `q^a p^b -> p^b q^a`, then reordered.
    ///
    /// For complex coefficients use [`WeylPoly::dagger_with`].
    pub fn dagger(&self) -> Self {
        self.dagger_with(|c| c.clone())
    }

    pub fn dagger_with<F: Fn(&C) -> C>(&self, conj: F) -> Self {
        let mut out = Self::default();
        for (m, c) in &self.terms {
            let mut coeff = conj(c);
            if m.h % 2 == 1 {
                coeff = coeff.negate();
            }
            let pq = Self::term(0, m.p, 0, C::unit()).mul(&Self::term(m.q, 0, m.h, coeff));
            out = out.add(&pq);
        }
        out
    }

    pub fn is_self_adjoint(&self) -> bool {
        *self == self.dagger()
    }

    /// `(x + x^dagger) / 2`.
    pub fn symmetrized(&self) -> Self {
        self.add(&self.dagger()).scale(&C::from_ratio(1, 2))
    }

    /// The `hbar -> 0` limit as a commutative polynomial.
    pub fn shadow(&self) -> CommPoly<C> {
        let mut out = CommPoly::default();
        for (m, c) in &self.terms {
            if m.h == 0 {
                out.add_term(m.q, m.p, c.clone());
            }
        }
        out
    }

    /// Collapse the grading by substituting a value for `i hbar`.
    pub fn collapse(&self, ihbar: &C) -> BTreeMap<(u32, u32), C> {
        let mut out: BTreeMap<(u32, u32), C> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for _ in 0..m.h {
                v = v.times(ihbar);
            }
            let e = out.entry((m.q, m.p)).or_insert_with(C::nil);
            *e = e.plus(&v);
        }
        out.retain(|_, v| !v.is_nil());
        out
    }

    pub fn map_coeffs<D: Coeff, F: Fn(&C) -> D>(&self, f: F) -> WeylPoly<D> {
        let mut out = WeylPoly::default();
        for (m, c) in &self.terms {
            out.add_term(*m, f(c));
        }
        out
    }
}

impl<C: Coeff + fmt::Display> fmt::Display for WeylPoly<C> {
    /// One line per `q^a p^b`, collecting its `hbar` grades:
    /// `q^2 p^1: 3/4 + 1/2 (i hbar)^1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return writeln!(f, "0");
        }
        let mut rows: BTreeMap<(u32, u32), Vec<(u32, &C)>> = BTreeMap::new();
        for (m, c) in &self.terms {
            rows.entry((m.q, m.p)).or_default().push((m.h, c));
        }
        for ((a, b), grades) in rows.iter().rev() {
            let parts: Vec<String> = grades
                .iter()
                .map(|(h, c)| match h {
                    0 => format!("{c}"),
                    _ => format!("({c}) (i hbar)^{h}"),
                })
                .collect();
            writeln!(f, "q^{a} p^{b}: {}", parts.join(" + "))?;
        }
        Ok(())
    }
}

impl<C: Coeff> fmt::Debug for WeylPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter().map(|(m, c)| ((m.q, m.p, m.h), c))).finish()
    }
}

/// Commutative polynomial in `q`, `p`.
#[derive(Clone, PartialEq)]
pub struct CommPoly<C: Coeff> {
    terms: BTreeMap<(u32, u32), C>,
}

impl<C: Coeff> Default for CommPoly<C> {
    fn default() -> Self {
        CommPoly { terms: BTreeMap::new() }
    }
}

impl<C: Coeff> fmt::Debug for CommPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

impl<C: Coeff> CommPoly<C> {
    pub fn constant(c: C) -> Self {
        Self::term(0, 0, c)
    }

    pub fn q() -> Self {
        Self::term(1, 0, C::unit())
    }

    pub fn p() -> Self {
        Self::term(0, 1, C::unit())
    }

    pub fn term(a: u32, b: u32, c: C) -> Self {
        let mut out = Self::default();
        out.add_term(a, b, c);
        out
    }

    pub fn add_term(&mut self, a: u32, b: u32, c: C) {
        if c.is_nil() {
            return;
        }
        match self.terms.get_mut(&(a, b)) {
            Some(v) => {
                *v = v.plus(&c);
                if v.is_nil() {
                    self.terms.remove(&(a, b));
                }
            }
            None => {
                self.terms.insert((a, b), c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &C)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, a: u32, b: u32) -> C {
        self.terms.get(&(a, b)).cloned().unwrap_or_else(C::nil)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|(a, b)| a + b).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for ((a, b), c) in &other.terms {
            out.add_term(*a, *b, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&C::from_int(-1)))
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::default();
        for ((a, b), v) in &self.terms {
            out.add_term(*a, *b, v.times(c));
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::default();
        for ((a1, b1), c1) in &self.terms {
            for ((a2, b2), c2) in &other.terms {
                out.add_term(a1 + a2, b1 + b2, c1.times(c2));
            }
        }
        out
    }

    pub fn d_dq(&self) -> Self {
        let mut out = Self::default();
        for ((a, b), c) in &self.terms {
            if *a > 0 {
                out.add_term(a - 1, *b, c.times(&C::from_int(*a as i64)));
            }
        }
        out
    }

    pub fn d_dp(&self) -> Self {
        let mut out = Self::default();
        for ((a, b), c) in &self.terms {
            if *b > 0 {
                out.add_term(*a, b - 1, c.times(&C::from_int(*b as i64)));
            }
        }
        out
    }

    /// `{self, H}`: the classical counterpart of [`WeylPoly::heisenberg_step`].
    pub fn poisson(&self, hamiltonian: &Self) -> Self {
        self.d_dq().mul(&hamiltonian.d_dp()).sub(&self.d_dp().mul(&hamiltonian.d_dq()))
    }

    /// Embed into the Weyl algebra in q-left-of-p order.
    pub fn to_weyl(&self) -> WeylPoly<C> {
        let mut out = WeylPoly::default();
        for ((a, b), c) in &self.terms {
            out.add_term(WeylMono { q: *a, p: *b, h: 0 }, c.clone());
        }
        out
    }

    pub fn map_coeffs<D: Coeff, F: Fn(&C) -> D>(&self, f: F) -> CommPoly<D> {
        let mut out = CommPoly::default();
        for ((a, b), c) in &self.terms {
            out.add_term(*a, *b, f(c));
        }
        out
    }
}
