use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Deterministic cumulants `kappa_j(beta) = phi^(j)(beta)` together with
/// the random cumulants `chi_j(beta) = (log W)^(j)(beta)` at one tilt.
///
/// Orders are 1-based in the accessors: `kappa(1)` is the drift,
/// `kappa(2) = sigma^2` the variance.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "T: Serialize")]
pub struct CumulantSet<T> {
    pub beta: f64,
    kappa: Vec<T>,
    chi: Vec<T>,
    sigma: T,
    log_w: Option<f64>,
}

impl<T: Scalar> CumulantSet<T> {
    /// `kappa[i]` is `kappa_{i+1}`, `chi[i]` is `chi_{i+1}`. `sigma` must
    /// satisfy `sigma^2 = kappa_2 > 0` (exactly over an exact field).
    pub fn new(beta: f64, kappa: Vec<T>, chi: Vec<T>, sigma: T) -> Result<Self> {
        let k2 = kappa.get(1).ok_or(Error::InsufficientCumulants {
            what: "kappa",
            needed: 2,
            have: kappa.len(),
        })?;
        if k2.to_f64() <= 0.0 || sigma.to_f64() <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "variance must be positive (kappa_2 = {:?}, sigma = {:?})",
                k2, sigma
            )));
        }
        let sq = sigma.clone() * sigma.clone();
        let consistent = if T::is_exact() {
            sq == *k2
        } else {
            (sq.to_f64() - k2.to_f64()).abs() <= 1e-12 * k2.to_f64()
        };
        if !consistent {
            return Err(Error::InvalidInput(format!(
                "sigma^2 = {:?} differs from kappa_2 = {:?}",
                sq, k2
            )));
        }
        Ok(CumulantSet {
            beta,
            kappa,
            chi,
            sigma,
            log_w: None,
        })
    }

    pub fn with_log_w(mut self, log_w: f64) -> Self {
        self.log_w = Some(log_w);
        self
    }

    pub fn kappa(&self, j: usize) -> Result<&T> {
        j.checked_sub(1)
            .and_then(|i| self.kappa.get(i))
            .ok_or(Error::InsufficientCumulants {
                what: "kappa",
                needed: j,
                have: self.kappa.len(),
            })
    }

    pub fn chi(&self, j: usize) -> Result<&T> {
        j.checked_sub(1)
            .and_then(|i| self.chi.get(i))
            .ok_or(Error::InsufficientCumulants {
                what: "chi",
                needed: j,
                have: self.chi.len(),
            })
    }

    pub fn kappas(&self) -> &[T] {
        &self.kappa
    }

    pub fn chis(&self) -> &[T] {
        &self.chi
    }

    pub fn sigma(&self) -> &T {
        &self.sigma
    }

    pub fn mu(&self) -> &T {
        &self.kappa[0]
    }

    /// `chi_0 = log W`, when known.
    pub fn log_w(&self) -> Option<f64> {
        self.log_w
    }

    /// Same deterministic cumulants with every random cumulant set to zero;
    /// this is the i.i.d. specialisation in which `W == 1`.
    pub fn without_chi(&self) -> Self {
        CumulantSet {
            chi: vec![T::zero(); self.chi.len()],
            log_w: Some(0.0),
            ..self.clone()
        }
    }
}

impl CumulantSet<f64> {
    /// Float constructor taking `sigma = sqrt(kappa_2)`.
    pub fn from_kappa(beta: f64, kappa: Vec<f64>, chi: Vec<f64>) -> Result<Self> {
        let sigma = kappa.get(1).copied().unwrap_or(f64::NAN).sqrt();
        if !sigma.is_finite() {
            return Self::new(beta, kappa, chi, 0.0);
        }
        Self::new(beta, kappa, chi, sigma)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational as Q;

    #[test]
    fn exact_sigma_check() {
        let k = vec![Q::from_i64(1), Q::from_ratio(9, 4), Q::from_i64(3)];
        assert!(CumulantSet::new(0.0, k.clone(), vec![], Q::from_ratio(3, 2)).is_ok());
        assert!(CumulantSet::new(0.0, k, vec![], Q::from_ratio(3, 1)).is_err());
    }

    #[test]
    fn nonpositive_variance_rejected() {
        assert!(CumulantSet::from_kappa(0.0, vec![1.0, 0.0], vec![]).is_err());
        assert!(CumulantSet::from_kappa(0.0, vec![1.0, -2.0], vec![]).is_err());
    }

    #[test]
    fn missing_orders() {
        let c = CumulantSet::from_kappa(0.0, vec![2.0, 2.0, 2.0], vec![0.1]).unwrap();
        assert!(c.kappa(4).is_err());
        assert!(c.chi(2).is_err());
        assert_eq!(*c.chi(1).unwrap(), 0.1);
        assert!(c.kappa(0).is_err());
    }
}
