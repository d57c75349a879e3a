use std::fmt::Debug;

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Exact complex rational, `a + b i` with `a, b` in Q.
pub type Gq = Complex<BigRational>;

pub fn gq(n: i64, d: i64) -> Gq {
    Complex::new(BigRational::new(n.into(), d.into()), BigRational::zero())
}

pub fn gq_i() -> Gq {
    Complex::new(BigRational::zero(), BigRational::one())
}

/// Coefficient ring for the operator algebras.
///
/// Implemented for floating and exact scalars and for the symbolic
/// parameter polynomials, so one algebra serves both numeric and exact paths.
pub trait Coeff: Clone + PartialEq + Debug + Send + Sync + 'static {
    fn nil() -> Self;
    fn unit() -> Self;
    fn is_nil(&self) -> bool;
    fn from_bigint(n: &BigInt) -> Self;
    fn from_ratio(n: i64, d: i64) -> Self;
    fn plus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negate(&self) -> Self;

    fn from_int(n: i64) -> Self {
        Self::from_ratio(n, 1)
    }

    fn minus(&self, other: &Self) -> Self {
        self.plus(&other.negate())
    }

    /// `C(b, k) C(c, k) k!`, the number of ways to contract `k` pairs.
    fn contraction(b: u32, c: u32, k: u32) -> Self {
        Self::from_bigint(&contraction_bigint(b, c, k))
    }
}

pub fn contraction_bigint(b: u32, c: u32, k: u32) -> BigInt {
    let mut fact = BigInt::one();
    for j in 2..=k {
        fact *= j;
    }
    binomial(BigInt::from(b), BigInt::from(k)) * binomial(BigInt::from(c), BigInt::from(k)) * fact
}

fn contraction_f64(b: u32, c: u32, k: u32) -> f64 {
    // b!/(b-k)! * c!/(c-k)! / k!
    let mut v = 1.0;
    for j in 0..k {
        v *= (b - j) as f64 * (c - j) as f64 / (j + 1) as f64;
    }
    v
}

impl Coeff for f64 {
    fn nil() -> Self {
        0.0
    }
    fn unit() -> Self {
        1.0
    }
    fn is_nil(&self) -> bool {
        *self == 0.0
    }
    fn from_bigint(n: &BigInt) -> Self {
        n.to_f64().unwrap_or(f64::NAN)
    }
    fn from_ratio(n: i64, d: i64) -> Self {
        n as f64 / d as f64
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negate(&self) -> Self {
        -self
    }
    fn contraction(b: u32, c: u32, k: u32) -> Self {
        contraction_f64(b, c, k)
    }
}

impl Coeff for Complex64 {
    fn nil() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn unit() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn is_nil(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn from_bigint(n: &BigInt) -> Self {
        Complex64::new(n.to_f64().unwrap_or(f64::NAN), 0.0)
    }
    fn from_ratio(n: i64, d: i64) -> Self {
        Complex64::new(n as f64 / d as f64, 0.0)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negate(&self) -> Self {
        -self
    }
    fn contraction(b: u32, c: u32, k: u32) -> Self {
        Complex64::new(contraction_f64(b, c, k), 0.0)
    }
}

impl Coeff for BigRational {
    fn nil() -> Self {
        Zero::zero()
    }
    fn unit() -> Self {
        One::one()
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn from_bigint(n: &BigInt) -> Self {
        BigRational::from_integer(n.clone())
    }
    fn from_ratio(n: i64, d: i64) -> Self {
        BigRational::new(n.into(), d.into())
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negate(&self) -> Self {
        -self
    }
}

impl Coeff for Gq {
    fn nil() -> Self {
        Zero::zero()
    }
    fn unit() -> Self {
        One::one()
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn from_bigint(n: &BigInt) -> Self {
        Complex::new(BigRational::from_integer(n.clone()), BigRational::zero())
    }
    fn from_ratio(n: i64, d: i64) -> Self {
        gq(n, d)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negate(&self) -> Self {
        -self
    }
}

pub fn gq_to_c64(z: &Gq) -> Complex64 {
    Complex64::new(z.re.to_f64().unwrap_or(f64::NAN), z.im.to_f64().unwrap_or(f64::NAN))
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}
