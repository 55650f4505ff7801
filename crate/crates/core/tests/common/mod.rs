#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;

pub fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn qr(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn random_ints<R: Rng>(rng: &mut R, len: usize, lo: i64, hi: i64) -> Vec<BigRational> {
    (0..len).map(|_| q(rng.gen_range(lo..=hi))).collect()
}

/// Random rational with numerator in [-9, 9] and denominator in [1, 6].
pub fn random_rational<R: Rng>(rng: &mut R) -> BigRational {
    qr(rng.gen_range(-9..=9), rng.gen_range(1..=6))
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Central difference `Σ_j (-1)^j C(k,j) f(x + (k/2 - j) h) / h^k`,
/// error O(h²).
pub fn central_difference(f: &dyn Fn(f64) -> f64, x: f64, k: usize, h: f64) -> f64 {
    let half = k as f64 / 2.0;
    let sum: f64 = (0..=k)
        .map(|j| {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            sign * binomial(k, j) * f(x + (half - j as f64) * h)
        })
        .sum();
    sum / h.powi(k as i32)
}

/// k-th derivative from central differences at steps 4h, 2h and h with two
/// Richardson extrapolation levels (error O(h⁶)).
pub fn fd_derivative(f: &dyn Fn(f64) -> f64, x: f64, k: usize, h: f64) -> f64 {
    if k == 0 {
        return f(x);
    }
    let d4 = central_difference(f, x, k, 4.0 * h);
    let d2 = central_difference(f, x, k, 2.0 * h);
    let d1 = central_difference(f, x, k, h);
    let r_coarse = (4.0 * d2 - d4) / 3.0;
    let r_fine = (4.0 * d1 - d2) / 3.0;
    (16.0 * r_fine - r_coarse) / 15.0
}

pub fn factorial(k: usize) -> f64 {
    (1..=k).fold(1.0, |acc, i| acc * i as f64)
}

/// `|a - b| ≤ tol · max(|b|, 1)`.
pub fn close_scaled(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1.0)
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs()
    }
}
