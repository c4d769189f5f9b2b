//! Complete and partial Bell polynomials over an arbitrary commutative ring.

use crate::scalar::{binomial, Ring};

/// `B_0, B_1(z_1), ..., B_J(z_1..z_J)` where `J = z.len()`, via
/// `B_{n+1} = sum_{k=0}^{n} C(n,k) B_{n-k} z_{k+1}`.
pub fn bell_sequence<R: Ring>(z: &[R]) -> Vec<R> {
    let mut b: Vec<R> = Vec::with_capacity(z.len() + 1);
    b.push(R::one());
    for n in 0..z.len() {
        let mut acc = R::zero();
        for k in 0..=n {
            let term = b[n - k].clone() * z[k].clone();
            acc = acc + term.scale_int(binomial(n as u64, k as u64));
        }
        b.push(acc);
    }
    b
}

/// Complete Bell polynomial `B_J(z_1, ..., z_J)` with `J = z.len()`.
/// The empty input gives `B_0 = 1`.
pub fn bell_eval<R: Ring>(z: &[R]) -> R {
    bell_sequence(z).pop().expect("sequence holds B_0")
}

/// Table of partial Bell polynomials `B_{n,k}(x_1, ..., x_{n-k+1})` for
/// `0 <= k <= n <= x.len()`; entry `[n][k]`.
pub fn partial_bell_table<R: Ring>(x: &[R]) -> Vec<Vec<R>> {
    let big_n = x.len();
    let mut t = vec![vec![R::zero(); big_n + 1]; big_n + 1];
    t[0][0] = R::one();
    for n in 1..=big_n {
        for k in 1..=n {
            let mut acc = R::zero();
            for i in 1..=(n - k + 1) {
                let term = x[i - 1].clone() * t[n - i][k - 1].clone();
                acc = acc + term.scale_int(binomial(n as u64 - 1, i as u64 - 1));
            }
            t[n][k] = acc;
        }
    }
    t
}
