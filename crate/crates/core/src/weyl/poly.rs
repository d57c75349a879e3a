//! Multivariate Laurent polynomials with exact complex-rational coefficients.
//!
//! The variable set is fixed: packet parameters (`Q`, `P`, `dQ`, `dP`,
//! `r = nu^{-1/2}`), `hbar`, the inverse mass and the potential coefficients
//! `V_0..V_12`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::ring::{gq, gq_to_c64, Coeff, Gq};

pub const MAX_POTENTIAL_DEGREE: usize = 12;
pub const NVARS: usize = 7 + MAX_POTENTIAL_DEGREE + 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    Q,
    P,
    DQ,
    DP,
    /// `nu^{-1/2}`
    R,
    Hbar,
    InvMu,
    V(u8),
}

impl Var {
    pub fn index(self) -> usize {
        match self {
            Var::Q => 0,
            Var::P => 1,
            Var::DQ => 2,
            Var::DP => 3,
            Var::R => 4,
            Var::Hbar => 5,
            Var::InvMu => 6,
            Var::V(k) => 7 + k as usize,
        }
    }

    fn from_index(i: usize) -> Var {
        match i {
            0 => Var::Q,
            1 => Var::P,
            2 => Var::DQ,
            3 => Var::DP,
            4 => Var::R,
            5 => Var::Hbar,
            6 => Var::InvMu,
            k => Var::V((k - 7) as u8),
        }
    }

    fn name(self) -> String {
        match self {
            Var::Q => "Q".into(),
            Var::P => "P".into(),
            Var::DQ => "dQ".into(),
            Var::DP => "dP".into(),
            Var::R => "r".into(),
            Var::Hbar => "hbar".into(),
            Var::InvMu => "mu".into(),
            Var::V(k) => format!("V{k}"),
        }
    }
}

pub type Mono = [i16; NVARS];

pub fn mono_one() -> Mono {
    [0; NVARS]
}

pub fn mono(vars: &[(Var, i16)]) -> Mono {
    let mut m = mono_one();
    for &(v, e) in vars {
        m[v.index()] += e;
    }
    m
}

#[derive(Clone, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Mono, Gq>,
}

impl Poly {
    pub fn constant(c: Gq) -> Self {
        let mut terms = BTreeMap::new();
        if !Zero::is_zero(&c) {
            terms.insert(mono_one(), c);
        }
        Poly { terms }
    }

    pub fn int(n: i64) -> Self {
        Self::constant(gq(n, 1))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Self::constant(gq(n, d))
    }

    pub fn i() -> Self {
        Self::constant(Complex::new(BigRational::zero(), BigRational::one()))
    }

    pub fn var(v: Var) -> Self {
        Self::monomial(mono(&[(v, 1)]), gq(1, 1))
    }

    pub fn monomial(m: Mono, c: Gq) -> Self {
        let mut p = Poly::default();
        p.add_term(m, c);
        p
    }

    /// `c * prod vars^exps` with integer `c`.
    pub fn term(c: i64, vars: &[(Var, i16)]) -> Self {
        Self::monomial(mono(vars), gq(c, 1))
    }

    pub fn term_ratio(n: i64, d: i64, vars: &[(Var, i16)]) -> Self {
        Self::monomial(mono(vars), gq(n, d))
    }

    pub fn add_term(&mut self, m: Mono, c: Gq) {
        if Zero::is_zero(&c) {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(Zero::zero);
        *entry += c;
        if Zero::is_zero(entry) {
            self.terms.remove(&m);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Gq)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Mono) -> Gq {
        self.terms.get(m).cloned().unwrap_or_else(Zero::zero)
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut out = Poly::int(1);
        for _ in 0..n {
            out = out.times(self);
        }
        out
    }

    pub fn scale(&self, c: &Gq) -> Poly {
        let mut out = Poly::default();
        for (m, v) in &self.terms {
            out.add_term(*m, v * c);
        }
        out
    }

    /// Replace every occurrence of `v` (non-negative powers only) by `with`.
    pub fn substitute(&self, v: Var, with: &Poly) -> Poly {
        let idx = v.index();
        let mut out = Poly::default();
        let mut powers: Vec<Poly> = vec![Poly::int(1)];
        for (m, c) in &self.terms {
            let e = m[idx];
            assert!(e >= 0, "substitution of a negative power of {v:?}");
            while powers.len() <= e as usize {
                let next = powers.last().unwrap().times(with);
                powers.push(next);
            }
            let mut rest = *m;
            rest[idx] = 0;
            for (m2, c2) in &powers[e as usize].terms {
                let mut mm = rest;
                for k in 0..NVARS {
                    mm[k] += m2[k];
                }
                out.add_term(mm, c * c2);
            }
        }
        out
    }

    /// Terms with zero exponent in `v` (i.e. the value at `v = 0` when no
    /// negative powers occur).
    pub fn at_zero(&self, v: Var) -> Poly {
        let idx = v.index();
        let mut out = Poly::default();
        for (m, c) in &self.terms {
            assert!(m[idx] >= 0, "negative power of {v:?}");
            if m[idx] == 0 {
                out.add_term(*m, c.clone());
            }
        }
        out
    }

    pub fn max_degree(&self, v: Var) -> Option<i16> {
        self.terms.keys().map(|m| m[v.index()]).max()
    }

    pub fn min_degree(&self, v: Var) -> Option<i16> {
        self.terms.keys().map(|m| m[v.index()]).min()
    }

    pub fn is_real(&self) -> bool {
        self.terms.values().all(|c| Zero::is_zero(&c.im))
    }

    pub fn real_part(&self) -> Poly {
        let mut out = Poly::default();
        for (m, c) in &self.terms {
            out.add_term(*m, Complex::new(c.re.clone(), BigRational::zero()));
        }
        out
    }

    pub fn imag_part(&self) -> Poly {
        let mut out = Poly::default();
        for (m, c) in &self.terms {
            out.add_term(*m, Complex::new(c.im.clone(), BigRational::zero()));
        }
        out
    }

    pub fn conj(&self) -> Poly {
        let mut out = Poly::default();
        for (m, c) in &self.terms {
            out.add_term(*m, c.conj());
        }
        out
    }

    /// Numeric value; `values[i]` is the value of the variable with index `i`.
    pub fn eval(&self, values: &Values) -> Complex64 {
        let mut sum = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut t = gq_to_c64(c);
            for (i, &e) in m.iter().enumerate() {
                if e != 0 {
                    t *= values.0[i].powi(e as i32);
                }
            }
            sum += t;
        }
        sum
    }
}

/// Numeric assignment of the symbolic variables.
#[derive(Debug, Clone, Copy)]
pub struct Values(pub [f64; NVARS]);

impl Default for Values {
    fn default() -> Self {
        Values([0.0; NVARS])
    }
}

impl Values {
    pub fn set(mut self, v: Var, x: f64) -> Self {
        self.0[v.index()] = x;
        self
    }
}

impl Coeff for Poly {
    fn nil() -> Self {
        Poly::default()
    }
    fn unit() -> Self {
        Poly::int(1)
    }
    fn is_nil(&self) -> bool {
        self.terms.is_empty()
    }
    fn from_bigint(n: &BigInt) -> Self {
        Poly::constant(Complex::new(BigRational::from_integer(n.clone()), BigRational::zero()))
    }
    fn from_ratio(n: i64, d: i64) -> Self {
        Poly::ratio(n, d)
    }
    fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
    fn times(&self, other: &Self) -> Self {
        let mut out = Poly::default();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let mut m = *m1;
                for k in 0..NVARS {
                    m[k] += m2[k];
                }
                out.add_term(m, c1 * c2);
            }
        }
        out
    }
    fn negate(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -c.clone();
        }
        out
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn fmt_coeff(c: &Gq) -> String {
    match (Zero::is_zero(&c.re), Zero::is_zero(&c.im)) {
        (_, true) => fmt_rational(&c.re),
        (true, false) => format!("{} i", fmt_rational(&c.im)),
        _ => format!("({} + {} i)", fmt_rational(&c.re), fmt_rational(&c.im)),
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let (neg, shown) = if Zero::is_zero(&c.im) && c.re.is_negative() {
                (true, Complex::new(-c.re.clone(), BigRational::zero()))
            } else {
                (false, c.clone())
            };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let vars: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e != 0)
                .map(|(i, &e)| {
                    let name = Var::from_index(i).name();
                    if e == 1 {
                        name
                    } else {
                        format!("{name}^{e}")
                    }
                })
                .collect();
            let coeff = fmt_coeff(&shown);
            if vars.is_empty() {
                write!(f, "{coeff}")?;
            } else if coeff == "1" {
                write!(f, "{}", vars.join(" "))?;
            } else {
                write!(f, "{coeff} {}", vars.join(" "))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_display() {
        let x = Poly::var(Var::Q);
        let y = Poly::var(Var::DQ);
        let s = x.plus(&y).pow(2);
        assert_eq!(s.len(), 3);
        assert_eq!(s.coefficient(&mono(&[(Var::Q, 1), (Var::DQ, 1)])), gq(2, 1));
        let d = s.minus(&x.times(&x)).minus(&y.times(&y)).minus(&Poly::term(2, &[(Var::Q, 1), (Var::DQ, 1)]));
        assert!(Coeff::is_nil(&d));
        let c = Poly::term_ratio(-125, 4, &[(Var::V(3), 5), (Var::InvMu, 4)]);
        assert_eq!(c.to_string(), "-125/4 mu^4 V3^5");
    }

    #[test]
    fn substitution() {
        let h = Poly::var(Var::Hbar).pow(2);
        let with = Poly::term(2, &[(Var::DQ, 1), (Var::DP, 1), (Var::R, 2)]);
        let out = h.substitute(Var::Hbar, &with);
        assert_eq!(out, Poly::term(4, &[(Var::DQ, 2), (Var::DP, 2), (Var::R, 4)]));
    }

    #[test]
    fn evaluation() {
        let p = Poly::term(3, &[(Var::Q, 2), (Var::R, -2)]).plus(&Poly::i());
        let v = Values::default().set(Var::Q, 2.0).set(Var::R, 0.5);
        let z = p.eval(&v);
        assert!((z.re - 48.0).abs() < 1e-12 && (z.im - 1.0).abs() < 1e-12);
    }
}
