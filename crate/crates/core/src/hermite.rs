use crate::poly::Polynomial;
use crate::scalar::Scalar;

/// Probabilists' Hermite polynomial `He_n`, built from
/// `He_{n+1} = x He_n - n He_{n-1}`.
pub fn hermite_poly<T: Scalar>(n: usize) -> Polynomial<T> {
    let mut prev: Vec<i64> = vec![1];
    if n == 0 {
        return from_ints(&prev);
    }
    let mut cur: Vec<i64> = vec![0, 1];
    for m in 1..n {
        let mut next = vec![0i64; m + 2];
        for (k, c) in cur.iter().enumerate() {
            next[k + 1] += c;
        }
        for (k, c) in prev.iter().enumerate() {
            next[k] -= m as i64 * c;
        }
        prev = std::mem::replace(&mut cur, next);
    }
    from_ints(&cur)
}

fn from_ints<T: Scalar>(c: &[i64]) -> Polynomial<T> {
    Polynomial::new(c.iter().map(|v| T::from_i64(*v)).collect())
}

/// Evaluates `He_0(x) .. He_n(x)` in floating point.
pub fn hermite_values(n: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(1.0);
    if n >= 1 {
        out.push(x);
    }
    for m in 1..n {
        let next = x * out[m] - m as f64 * out[m - 1];
        out.push(next);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_orders() {
        assert_eq!(hermite_poly::<f64>(0).coeffs(), &[1.0]);
        assert_eq!(hermite_poly::<f64>(2).coeffs(), &[-1.0, 0.0, 1.0]);
        assert_eq!(hermite_poly::<f64>(3).coeffs(), &[0.0, -3.0, 0.0, 1.0]);
        assert_eq!(hermite_poly::<f64>(4).coeffs(), &[3.0, 0.0, -6.0, 0.0, 1.0]);
        assert_eq!(
            hermite_poly::<f64>(6).coeffs(),
            &[-15.0, 0.0, 45.0, 0.0, -15.0, 0.0, 1.0]
        );
    }

    #[test]
    fn values_match_polynomials() {
        let v = hermite_values(9, 0.7);
        for (n, val) in v.iter().enumerate() {
            let p = hermite_poly::<f64>(n);
            assert!((p.eval(&0.7) - val).abs() < 1e-12);
        }
    }

    #[test]
    fn parity() {
        for n in 0..10 {
            let p = hermite_poly::<f64>(n);
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            assert_eq!(p.reflect(), p.scale(&sign));
        }
    }
}
