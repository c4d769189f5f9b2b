//! Scalar fields and rings used by the polynomial and operator algebra.
//!
//! Two scalar fields are supported: `f64` for evaluation and
//! [`BigRational`] for exact identity checks. Any [`Ring`] can be fed to the
//! Bell polynomial evaluator, which is how polynomials, differential
//! operators and complex numbers share one code path.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A commutative ring with unit that supports multiplication by a
/// non-negative integer.
pub trait Ring: Clone + Zero + One + Add<Output = Self> + Mul<Output = Self> {
    fn scale_int(&self, n: u64) -> Self;
}

/// A field of coefficients.
pub trait Scalar:
    Ring
    + Debug
    + PartialEq
    + Sub<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_i64(v: i64) -> Self;
    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }
    fn to_f64(&self) -> f64;
    fn abs_f64(&self) -> f64 {
        self.to_f64().abs()
    }
    /// Whether the field is exact; float fields compare with a tolerance.
    fn is_exact() -> bool;

    fn powi(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = acc * self.clone();
        }
        acc
    }
}

impl Ring for f64 {
    fn scale_int(&self, n: u64) -> Self {
        self * n as f64
    }
}

impl Scalar for f64 {
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn is_exact() -> bool {
        false
    }
    fn powi(&self, n: u32) -> Self {
        f64::powi(*self, n as i32)
    }
}

impl Ring for BigRational {
    fn scale_int(&self, n: u64) -> Self {
        self * BigRational::from_integer(BigInt::from(n))
    }
}

impl Scalar for BigRational {
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
    fn to_f64(&self) -> f64 {
        self.to_f64_lossy()
    }
    fn abs_f64(&self) -> f64 {
        self.abs().to_f64_lossy()
    }
    fn is_exact() -> bool {
        true
    }
}

trait LossyF64 {
    fn to_f64_lossy(&self) -> f64;
}

impl LossyF64 for BigRational {
    fn to_f64_lossy(&self) -> f64 {
        match ToPrimitive::to_f64(self) {
            Some(v) => v,
            None => {
                let n = self.numer().to_f64().unwrap_or(f64::NAN);
                let d = self.denom().to_f64().unwrap_or(f64::NAN);
                n / d
            }
        }
    }
}

impl Ring for Complex64 {
    fn scale_int(&self, n: u64) -> Self {
        self * n as f64
    }
}

/// Binomial coefficient as `u64`; panics on overflow, which does not occur
/// for the orders used here (n <= 60).
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

pub fn factorial(n: u64) -> u64 {
    (1..=n).product()
}
