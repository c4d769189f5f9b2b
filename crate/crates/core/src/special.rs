//! Log-gamma differences and polygamma functions on the positive axis.

use std::f64::consts::PI;

/// `B_2, B_4, ..., B_20`.
const BERNOULLI_EVEN: [f64; 10] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
];

const SHIFT: f64 = 20.0;

/// Stirling correction `ln Gamma(x) - [(x - 1/2) ln x - x + ln(2 pi)/2]`.
fn stirling_tail(x: f64) -> f64 {
    let x2 = x * x;
    let mut pow = x;
    let mut acc = 0.0;
    for (i, b) in BERNOULLI_EVEN.iter().enumerate() {
        let k = (i + 1) as f64;
        acc += b / (2.0 * k * (2.0 * k - 1.0) * pow);
        pow *= x2;
    }
    acc
}

/// `ln Gamma(x) - ln Gamma(y)` for `x, y > 0`, accurate when `x` and `y`
/// are large and close.
pub fn ln_gamma_diff(mut x: f64, mut y: f64) -> f64 {
    assert!(x > 0.0 && y > 0.0, "ln_gamma_diff needs positive arguments");
    let mut acc = 0.0;
    while x.min(y) < SHIFT {
        acc += y.ln() - x.ln();
        x += 1.0;
        y += 1.0;
    }
    let d = x - y;
    acc + d * y.ln() + (x - 0.5) * (d / y).ln_1p() - d + stirling_tail(x) - stirling_tail(y)
}

/// `ln Gamma(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    let mut x = x;
    let mut acc = 0.0;
    while x < SHIFT {
        acc -= x.ln();
        x += 1.0;
    }
    acc + (x - 0.5) * x.ln() - x + 0.5 * (2.0 * PI).ln() + stirling_tail(x)
}

/// Polygamma `psi^(m)(x)` for `x > 0`; `m = 0` is the digamma function.
pub fn polygamma(m: u32, x: f64) -> f64 {
    assert!(x > 0.0, "polygamma needs a positive argument");
    let mf = m as f64;
    let m_fact: f64 = (1..=m).map(|i| i as f64).product();
    let sign = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
    // psi^(m)(x) = psi^(m)(x + 1) - (-1)^m m! / x^(m+1)
    let threshold = 10.0 + 2.0 * mf;
    let mut x = x;
    let mut acc = 0.0;
    while x < threshold {
        acc -= sign * m_fact / x.powi(m as i32 + 1);
        x += 1.0;
    }
    let tail = if m == 0 {
        let mut s = x.ln() - 0.5 / x;
        let x2 = x * x;
        let mut pow = x2;
        for (i, b) in BERNOULLI_EVEN.iter().enumerate() {
            let k = (i + 1) as f64;
            s -= b / (2.0 * k * pow);
            pow *= x2;
        }
        s
    } else {
        // (-1)^(m+1) [ (m-1)!/x^m + m!/(2 x^(m+1)) + sum_k B_2k (2k+m-1)!/((2k)! x^(2k+m)) ]
        let m1_fact = m_fact / mf;
        let mut s = m1_fact / x.powi(m as i32) + m_fact / (2.0 * x.powi(m as i32 + 1));
        // ratio (2k+m-1)!/(2k)! built incrementally
        let mut ratio: f64 = (1..m).map(|i| (2 + i) as f64).product();
        let mut pow = x.powi(m as i32 + 2);
        for (i, b) in BERNOULLI_EVEN.iter().enumerate() {
            let k = i + 1;
            if k > 1 {
                let lo = (2 * k - 1) as f64;
                let hi_a = (2 * k + m as usize - 2) as f64;
                let hi_b = (2 * k + m as usize - 1) as f64;
                ratio *= hi_a * hi_b / (lo * (lo + 1.0));
            }
            s += b * ratio / pow;
            pow *= x * x;
        }
        -sign * s
    };
    acc + tail
}
