//! Small exact combinatorial helpers shared by the counting and basis code.

use num_bigint::BigInt;
use num_traits::{One, Zero};

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// Generalized binomial coefficient `C(n, k)` for any integer `n` and `k >= 0`.
///
/// For negative `n` this is the falling-factorial definition
/// `n (n-1) ... (n-k+1) / k!`, so `C(-1, k) = (-1)^k`.
pub fn binomial(n: i64, k: usize) -> BigInt {
    if k == 0 {
        return BigInt::one();
    }
    if n >= 0 && (k as i64) > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= n - i as i64;
        acc /= i + 1;
    }
    acc
}

/// Falling factorial `x (x-1) ... (x-m+1)` as ascending power coefficients.
pub fn falling_factorial_coeffs(m: usize) -> Vec<BigInt> {
    let mut coeffs = vec![BigInt::one()];
    for i in 0..m {
        // multiply by (x - i)
        let mut next = vec![BigInt::zero(); coeffs.len() + 1];
        for (k, c) in coeffs.iter().enumerate() {
            next[k + 1] += c;
            next[k] -= c * i;
        }
        coeffs = next;
    }
    coeffs
}
