//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use edgeworth::poly::Polynomial;
use edgeworth::scalar::Ring;
use num_bigint::BigInt;
use num_rational::BigRational as Q;
use rand::Rng;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Complete Bell polynomial as a sum over set partitions of `{1..n}`:
/// every block of size `s` contributes a factor `z_s`. Partitions are
/// enumerated one by one and tallied by their sorted block sizes.
pub fn partition_bell<R: Ring>(z: &[R], n: usize) -> R {
    fn walk(remaining: usize, blocks: &mut Vec<usize>, tally: &mut BTreeMap<Vec<usize>, u64>) {
        if remaining == 0 {
            let mut shape = blocks.clone();
            shape.sort_unstable();
            *tally.entry(shape).or_insert(0) += 1;
            return;
        }
        // place the next element into an existing block or a new one
        for i in 0..blocks.len() {
            blocks[i] += 1;
            walk(remaining - 1, blocks, tally);
            blocks[i] -= 1;
        }
        blocks.push(1);
        walk(remaining - 1, blocks, tally);
        blocks.pop();
    }
    if n == 0 {
        return R::one();
    }
    let mut tally = BTreeMap::new();
    walk(n - 1, &mut vec![1], &mut tally);
    tally.iter().fold(R::zero(), |acc, (shape, &count)| {
        let term = shape.iter().fold(R::one(), |t, &s| t * z[s - 1].clone());
        acc + term.scale_int(count)
    })
}

/// Probabilists' Hermite polynomials written out by hand.
pub fn he(n: usize) -> Polynomial<Q> {
    let c: Vec<i64> = match n {
        0 => vec![1],
        1 => vec![0, 1],
        2 => vec![-1, 0, 1],
        3 => vec![0, -3, 0, 1],
        4 => vec![3, 0, -6, 0, 1],
        6 => vec![-15, 0, 45, 0, -15, 0, 1],
        _ => panic!("not tabulated"),
    };
    Polynomial::new(c.into_iter().map(|v| q(v, 1)).collect())
}

/// `G_0`, `G_1`, `G_2` in closed form from `sigma`, `kappa_3`, `kappa_4`,
/// `chi_1`, `chi_2`.
pub fn closed_g(sigma: &Q, k3: &Q, k4: &Q, x1: &Q, x2: &Q) -> [Polynomial<Q>; 3] {
    let s2 = sigma * sigma;
    let s3 = &s2 * sigma;
    let s4 = &s2 * &s2;
    let s6 = &s4 * &s2;
    let g0 = he(0);
    let g1 = he(1).scale(&(x1 / sigma)) + he(3).scale(&(k3 / (q(6, 1) * &s3)));
    let g2 = he(2).scale(&((x1 * x1 + x2) / (q(2, 1) * &s2)))
        + he(4).scale(&(k4 / (q(24, 1) * &s4) + k3 * x1 / (q(6, 1) * &s4)))
        + he(6).scale(&(k3 * k3 / (q(72, 1) * &s6)));
    [g0, g1, g2]
}

/// A random rational with numerator in `[-30, 30]` and denominator in `[1, 12]`.
pub fn random_q<R: Rng>(rng: &mut R) -> Q {
    q(rng.random_range(-30..=30), rng.random_range(1..=12))
}

/// A random positive rational.
pub fn random_positive_q<R: Rng>(rng: &mut R) -> Q {
    q(rng.random_range(1..=30), rng.random_range(1..=12))
}
