//! Edgeworth correction polynomials and the expansion evaluators.
//!
//! `G_j(x) = (-1)^j / j! * e^{x^2/2} B_j(D_1, ..., D_j) e^{-x^2/2}` with
//!
//! ```text
//! D_j = kappa_{j+2} / ((j+1)(j+2)) (sigma^{-1} d/dx)^{j+2} + chi_j (sigma^{-1} d/dx)^j
//! ```
//!
//! The Bell polynomial is evaluated in the ring of differential operators and
//! then reduced to Hermite polynomials.

use std::f64::consts::PI;

use num_traits::Zero;

use crate::bell::{bell_eval, bell_sequence};
use crate::cumulants::CumulantSet;
use crate::error::{Error, Result};
use crate::operator::DiffOperator;
use crate::poly::Polynomial;
use crate::scalar::{factorial, Scalar};

/// Builds `D_1 .. D_order`.
pub fn build_operators<T: Scalar>(c: &CumulantSet<T>, order: usize) -> Result<Vec<DiffOperator<T>>> {
    let sigma = c.sigma();
    (1..=order)
        .map(|j| {
            let kappa = c.kappa(j + 2)?.clone();
            let chi = c.chi(j)?.clone();
            let hi = kappa / (T::from_i64(((j + 1) * (j + 2)) as i64) * sigma.powi(j as u32 + 2));
            let lo = chi / sigma.powi(j as u32);
            Ok(DiffOperator::from_terms([(j as u32 + 2, hi), (j as u32, lo)]))
        })
        .collect()
}

fn signed_inverse_factorial<T: Scalar>(j: usize) -> T {
    let f = T::from_i64(factorial(j as u64) as i64);
    let s = if j.is_multiple_of(2) { T::one() } else { -T::one() };
    s / f
}

/// The correction polynomial `G_j(x; beta)`; degree at most `3j`.
pub fn edgeworth_term<T: Scalar>(j: usize, c: &CumulantSet<T>) -> Result<Polynomial<T>> {
    if j == 0 {
        return Ok(Polynomial::constant(T::one()));
    }
    let ops = build_operators(c, j)?;
    Ok(bell_eval(&ops)
        .hermite_reduce()
        .scale(&signed_inverse_factorial(j)))
}

/// `G_0 .. G_r`, sharing one Bell recurrence.
pub fn edgeworth_terms<T: Scalar>(r: usize, c: &CumulantSet<T>) -> Result<Vec<Polynomial<T>>> {
    let ops = build_operators(c, r)?;
    Ok(bell_sequence(&ops)
        .into_iter()
        .enumerate()
        .map(|(j, b)| b.hermite_reduce().scale(&signed_inverse_factorial(j)))
        .collect())
}

/// Default tolerance for float identity checks.
pub const FLOAT_IDENTITY_TOL: f64 = 1e-12;

/// `F_j = W G_j` assembled from `W, W', ..., W^(j)` through the generating
/// function `exp{sum_k y^k kappa_{k+2} D^{k+2} / (k+2)!} * W(beta + y D)`,
/// whose `y^j` coefficient is a polynomial in `D = sigma^{-1} d/dx` with
/// coefficients linear in the derivatives of `W`.
///
/// The random cumulants in `c` must be the log-derivatives of the supplied
/// `W` values; this is checked to `FLOAT_IDENTITY_TOL` (exactly over an exact
/// field).
pub fn f_term<T: Scalar>(j: usize, c: &CumulantSet<T>, w_derivs: &[T]) -> Result<Polynomial<T>> {
    f_term_with_tol(j, c, w_derivs, FLOAT_IDENTITY_TOL)
}

pub fn f_term_with_tol<T: Scalar>(
    j: usize,
    c: &CumulantSet<T>,
    w_derivs: &[T],
    tol: f64,
) -> Result<Polynomial<T>> {
    if w_derivs.len() < j + 1 {
        return Err(Error::InsufficientCumulants {
            what: "W derivatives",
            needed: j,
            have: w_derivs.len().saturating_sub(1),
        });
    }
    check_w_consistency(c, &w_derivs[..=j], tol)?;

    let sigma = c.sigma();
    let d_pow = |k: usize, coeff: T| DiffOperator::monomial(coeff / sigma.powi(k as u32), k as u32);

    // a_k: y^k coefficient of the exponent, k = 1..j.
    let mut a: Vec<DiffOperator<T>> = vec![DiffOperator::zero()];
    for k in 1..=j {
        let kappa = c.kappa(k + 2)?.clone();
        let denom = T::from_i64(factorial(k as u64 + 2) as i64);
        a.push(d_pow(k + 2, kappa / denom));
    }
    // e = exp(a) as a truncated power series in y: k e_k = sum_i i a_i e_{k-i}.
    let mut e: Vec<DiffOperator<T>> = vec![DiffOperator::monomial(T::one(), 0)];
    for k in 1..=j {
        let mut acc = DiffOperator::zero();
        for i in 1..=k {
            acc = acc + (a[i].clone() * e[k - i].clone()).scale(&T::from_i64(i as i64));
        }
        e.push(acc.scale(&T::from_ratio(1, k as i64)));
    }
    // Taylor series of W(beta + yD).
    let taylor: Vec<DiffOperator<T>> = (0..=j)
        .map(|k| {
            let f = T::from_i64(factorial(k as u64) as i64);
            d_pow(k, w_derivs[k].clone() / f)
        })
        .collect();
    let coeff = (0..=j).fold(DiffOperator::zero(), |acc, i| {
        acc + e[i].clone() * taylor[j - i].clone()
    });
    let sign = if j.is_multiple_of(2) { T::one() } else { -T::one() };
    Ok(coeff.hermite_reduce().scale(&sign))
}

/// Checks `W^(i) = W * B_i(chi_1, ..., chi_i)` for `i = 1..` the supplied
/// derivatives.
fn check_w_consistency<T: Scalar>(c: &CumulantSet<T>, w: &[T], tol: f64) -> Result<()> {
    let order = w.len() - 1;
    let chi: Vec<T> = (1..=order).map(|i| c.chi(i).cloned()).collect::<Result<_>>()?;
    let b = bell_sequence(&chi);
    for i in 1..=order {
        let predicted = w[0].clone() * b[i].clone();
        let gap = (predicted - w[i].clone()).abs_f64();
        let bad = if T::is_exact() {
            gap != 0.0
        } else {
            gap > tol * w[i].abs_f64().max(1.0)
        };
        if bad {
            return Err(Error::InconsistentDerivatives { order: i, gap });
        }
    }
    Ok(())
}

/// Float evaluator for `W e^{-x^2/2} / (sigma sqrt(2 pi w_n)) sum_j G_j(x) w_n^{-j/2}`
/// with `x = (k - mu w_n) / (sigma sqrt(w_n))`.
#[derive(Clone, Debug)]
pub struct Expansion {
    polys: Vec<Polynomial<f64>>,
    w_inf: f64,
    mu: f64,
    sigma: f64,
}

impl Expansion {
    pub fn new(c: &CumulantSet<f64>, w_inf: f64, r: usize) -> Result<Self> {
        Ok(Expansion {
            polys: edgeworth_terms(r, c)?,
            w_inf,
            mu: *c.mu(),
            sigma: *c.sigma(),
        })
    }

    pub fn order(&self) -> usize {
        self.polys.len() - 1
    }

    pub fn polynomials(&self) -> &[Polynomial<f64>] {
        &self.polys
    }

    pub fn x(&self, w_n: f64, k: f64) -> f64 {
        (k - self.mu * w_n) / (self.sigma * w_n.sqrt())
    }

    /// The individual summands `j = 0..=r`.
    pub fn terms(&self, w_n: f64, k: f64) -> Result<Vec<f64>> {
        check_w_n(w_n)?;
        let x = self.x(w_n, k);
        let base = self.w_inf * (-0.5 * x * x).exp() / (self.sigma * (2.0 * PI * w_n).sqrt());
        Ok(self
            .polys
            .iter()
            .enumerate()
            .map(|(j, g)| base * g.eval(&x) / w_n.powf(j as f64 / 2.0))
            .collect())
    }

    pub fn value(&self, w_n: f64, k: f64) -> Result<f64> {
        Ok(self.terms(w_n, k)?.iter().sum())
    }
}

fn check_w_n(w_n: f64) -> Result<()> {
    if w_n > 0.0 && w_n.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("w_n must be positive, got {w_n}")))
    }
}

/// Approximation of `e^{beta k - phi(beta) w_n} L_n(k)` by the first `r + 1`
/// expansion terms.
pub fn expansion_value(r: usize, c: &CumulantSet<f64>, w_inf: f64, w_n: f64, k: f64) -> Result<f64> {
    check_w_n(w_n)?;
    Expansion::new(c, w_inf, r)?.value(w_n, k)
}

/// Relative tolerance of the saddle-point condition `kappa_1 w_n = k`.
pub const SADDLE_TOL: f64 = 1e-9;

/// Saddle-point form: with `kappa_1(beta) w_n = k` the variable `x` vanishes
/// and only `G_{2j}(0)` survives,
/// `W / (sigma sqrt(2 pi w_n)) sum_{j<=r} G_{2j}(0) / w_n^j`.
pub fn saddle_expansion_value(
    r: usize,
    c: &CumulantSet<f64>,
    w_inf: f64,
    w_n: f64,
    k: f64,
) -> Result<f64> {
    check_w_n(w_n)?;
    let got = c.mu() * w_n;
    if (got - k).abs() > SADDLE_TOL * k.abs().max(1.0) {
        return Err(Error::NotAtSaddle { got, k });
    }
    let polys = edgeworth_terms(2 * r, c)?;
    let sum: f64 = (0..=r).map(|j| polys[2 * j].coeff(0) / w_n.powi(j as i32)).sum();
    Ok(w_inf * sum / (c.sigma() * (2.0 * PI * w_n).sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermite::hermite_poly;
    use num_rational::BigRational as Q;

    fn q(n: i64, d: i64) -> Q {
        Q::from_ratio(n, d)
    }

    fn sample_rational() -> CumulantSet<Q> {
        let sigma = q(3, 2);
        let kappa = vec![q(1, 3), sigma.clone() * sigma.clone(), q(-2, 5), q(7, 3), q(1, 9), q(-4, 7)];
        let chi = vec![q(5, 4), q(-1, 6), q(2, 3), q(3, 11)];
        CumulantSet::new(0.1, kappa, chi, sigma).unwrap()
    }

    #[test]
    fn g0_is_one() {
        assert_eq!(edgeworth_term(0, &sample_rational()).unwrap().coeffs(), &[Q::from_i64(1)]);
    }

    #[test]
    fn g1_closed_form() {
        let c = sample_rational();
        let s = c.sigma().clone();
        let expected = Polynomial::monomial(c.chi(1).unwrap().clone() / s.clone(), 1)
            + hermite_poly::<Q>(3).scale(&(c.kappa(3).unwrap().clone() / (Q::from_i64(6) * s.powi(3))));
        assert_eq!(edgeworth_term(1, &c).unwrap(), expected);
    }

    #[test]
    fn operator_coefficients() {
        let c = sample_rational();
        let ops = build_operators(&c, 2).unwrap();
        let s = c.sigma().clone();
        assert_eq!(ops[0].coeff(3), q(-2, 5) / (Q::from_i64(6) * s.powi(3)));
        assert_eq!(ops[0].coeff(1), q(5, 4) / s.clone());
        assert_eq!(ops[1].orders().collect::<Vec<_>>(), vec![2, 4]);
    }

    #[test]
    fn insufficient_cumulants_reported() {
        let c = CumulantSet::from_kappa(0.0, vec![2.0, 2.0, 2.0], vec![0.0]).unwrap();
        assert!(matches!(
            edgeworth_term(2, &c),
            Err(Error::InsufficientCumulants { .. })
        ));
    }

    #[test]
    fn gaussian_case_vanishes() {
        let c = CumulantSet::from_kappa(0.0, vec![0.0, 1.0, 0.0, 0.0, 0.0, 0.0], vec![0.0; 4]).unwrap();
        for j in 1..=4 {
            assert!(edgeworth_term(j, &c).unwrap().is_zero());
        }
        assert!(build_operators(&c, 4).unwrap().iter().all(|d| d.is_zero()));
    }

    #[test]
    fn f_term_matches_w_times_g() {
        let sigma = q(2, 1);
        let kappa = vec![q(1, 1), q(4, 1), q(1, 2), q(-3, 4), q(5, 6), q(1, 7)];
        let chi = vec![q(1, 3), q(-2, 5), q(1, 4), q(2, 9)];
        let c = CumulantSet::new(0.0, kappa, chi.clone(), sigma).unwrap();
        let w0 = q(3, 2);
        let w: Vec<Q> = bell_sequence(&chi).into_iter().map(|b| b * w0.clone()).collect();
        for j in 0..=4 {
            let f = f_term(j, &c, &w).unwrap();
            let g = edgeworth_term(j, &c).unwrap().scale(&w0);
            assert_eq!(f, g, "j = {j}");
        }
    }

    #[test]
    fn f_term_rejects_inconsistent_w() {
        let c = CumulantSet::from_kappa(0.0, vec![2.0, 2.0, 2.0, 2.0], vec![0.5, 0.1]).unwrap();
        // W chi_1 should equal W' = 0.5
        let err = f_term(1, &c, &[1.0, 0.7]).unwrap_err();
        assert!(matches!(err, Error::InconsistentDerivatives { order: 1, .. }));
    }

    #[test]
    fn expansion_at_mean_is_gaussian_peak() {
        let c = CumulantSet::from_kappa(0.0, vec![2.0, 2.0, 2.0], vec![0.3]).unwrap();
        let w_n = 10.0;
        let v = expansion_value(0, &c, 1.5, w_n, 2.0 * w_n).unwrap();
        let expect = 1.5 / (2f64.sqrt() * (2.0 * PI * w_n).sqrt());
        assert!((v - expect).abs() < 1e-15);
        assert!(expansion_value(0, &c, 1.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn pure_gaussian_symmetric() {
        let c = CumulantSet::from_kappa(0.0, vec![0.0, 1.0, 0.0, 0.0], vec![0.0, 0.0]).unwrap();
        let e = Expansion::new(&c, 1.0, 2).unwrap();
        for k in 1..6 {
            let a = e.value(9.0, k as f64).unwrap();
            let b = e.value(9.0, -(k as f64)).unwrap();
            assert!((a - b).abs() < 1e-16);
        }
    }

    #[test]
    fn saddle_requires_saddle() {
        let c = CumulantSet::from_kappa(0.2, vec![3.0, 3.0, 3.0, 3.0, 3.0, 3.0], vec![0.0; 4]).unwrap();
        assert!(matches!(
            saddle_expansion_value(1, &c, 1.0, 10.0, 29.0),
            Err(Error::NotAtSaddle { .. })
        ));
        let r0 = saddle_expansion_value(0, &c, 2.0, 10.0, 30.0).unwrap();
        assert!((r0 - 2.0 / (3f64.sqrt() * (20.0 * PI).sqrt())).abs() < 1e-15);
        // odd terms vanish at the origin
        let g = edgeworth_terms(3, &c).unwrap();
        assert_eq!(g[1].coeff(0), 0.0);
        assert_eq!(g[3].coeff(0), 0.0);
    }
}
