//! Constant-coefficient differential operators, stored as sparse
//! polynomials in the symbol `d/dx`.

use std::collections::BTreeMap;
use std::ops::{Add, Mul};

use num_traits::{One, Zero};

use crate::hermite::hermite_poly;
use crate::poly::Polynomial;
use crate::scalar::{Ring, Scalar};

/// `sum_k c_k (d/dx)^k`. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct DiffOperator<T> {
    coeffs: BTreeMap<u32, T>,
}

impl<T: Scalar> DiffOperator<T> {
    pub fn from_terms(terms: impl IntoIterator<Item = (u32, T)>) -> Self {
        let mut op = Self::zero();
        for (k, c) in terms {
            op.add_term(k, c);
        }
        op
    }

    /// `c (d/dx)^k`.
    pub fn monomial(c: T, order: u32) -> Self {
        Self::from_terms([(order, c)])
    }

    fn add_term(&mut self, order: u32, c: T) {
        if c.is_zero() {
            return;
        }
        let sum = match self.coeffs.remove(&order) {
            Some(prev) => prev + c,
            None => c,
        };
        if !sum.is_zero() {
            self.coeffs.insert(order, sum);
        }
    }

    pub fn coeff(&self, order: u32) -> T {
        self.coeffs.get(&order).cloned().unwrap_or_else(T::zero)
    }

    /// Populated derivative orders, ascending.
    pub fn orders(&self) -> impl Iterator<Item = u32> + '_ {
        self.coeffs.keys().copied()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &T)> {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    pub fn max_order(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::from_terms(self.coeffs.iter().map(|(k, a)| (*k, a.clone() * c.clone())))
    }

    /// Applies the operator to `exp(-x^2/2)` and divides the result by
    /// `exp(-x^2/2)`, using `(d/dx)^k exp(-x^2/2) = (-1)^k He_k(x) exp(-x^2/2)`.
    pub fn hermite_reduce(&self) -> Polynomial<T> {
        self.coeffs
            .iter()
            .fold(Polynomial::zero(), |acc, (k, c)| {
                let sign = if k % 2 == 0 { c.clone() } else { -c.clone() };
                acc + hermite_poly::<T>(*k as usize).scale(&sign)
            })
    }
}

impl<T: Scalar> Add for DiffOperator<T> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for (k, c) in rhs.coeffs {
            self.add_term(k, c);
        }
        self
    }
}

/// Composition; commutative because every coefficient is constant in `x`.
impl<T: Scalar> Mul for DiffOperator<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut out = Self::zero();
        for (i, a) in &self.coeffs {
            for (j, b) in &rhs.coeffs {
                out.add_term(i + j, a.clone() * b.clone());
            }
        }
        out
    }
}

impl<T: Scalar> Zero for DiffOperator<T> {
    fn zero() -> Self {
        DiffOperator {
            coeffs: BTreeMap::new(),
        }
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<T: Scalar> One for DiffOperator<T> {
    fn one() -> Self {
        Self::monomial(T::one(), 0)
    }
}

impl<T: Scalar> Ring for DiffOperator<T> {
    fn scale_int(&self, n: u64) -> Self {
        Self::from_terms(self.coeffs.iter().map(|(k, c)| (*k, c.scale_int(n))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;

    #[test]
    fn composition_commutes() {
        let a = DiffOperator::from_terms([(1, Q::from_ratio(1, 3)), (3, Q::from_i64(2))]);
        let b = DiffOperator::from_terms([(0, Q::from_i64(-1)), (2, Q::from_ratio(5, 7))]);
        assert_eq!(a.clone() * b.clone(), b * a);
    }

    #[test]
    fn cancellation_removes_order() {
        let a = DiffOperator::monomial(Q::from_i64(2), 4);
        let b = DiffOperator::monomial(Q::from_i64(-2), 4);
        assert!((a + b).is_zero());
    }

    #[test]
    fn reduce_single_derivative() {
        // d/dx e^{-x^2/2} = -x e^{-x^2/2}
        let d = DiffOperator::monomial(1.0, 1);
        assert_eq!(d.hermite_reduce().coeffs(), &[0.0, -1.0]);
    }
}
