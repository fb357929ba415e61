//! Integer and real helpers: exact roots and power comparisons, divisor
//! counts, prime factor counts and zeta values.

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

/// `floor(n^(1/k))` for `k >= 1`.
pub fn iroot(n: u64, k: u32) -> u64 {
    assert!(k >= 1, "root of order zero");
    if k == 1 || n < 2 {
        return n;
    }
    let mut r = (n as f64).powf(1.0 / f64::from(k)) as u64;
    // Float estimate can be off by a few units either way.
    while r > 0 && !pow_le(r, k, n) {
        r -= 1;
    }
    while pow_le(r + 1, k, n) {
        r += 1;
    }
    r
}

/// `x^k <= n` without overflow.
#[inline]
pub fn pow_le(x: u64, k: u32, n: u64) -> bool {
    checked_pow(x, k).is_some_and(|p| p <= n)
}

#[inline]
pub fn checked_pow(x: u64, k: u32) -> Option<u64> {
    x.checked_pow(k)
}

/// `floor(n^(1/k))` in arbitrary precision.
pub fn big_iroot(n: &BigUint, k: u32) -> BigUint {
    n.nth_root(k)
}

/// Compares `x^p` with `y^q` exactly.
pub fn cmp_powers(x: &BigUint, p: u32, y: &BigUint, q: u32) -> Ordering {
    x.pow(p).cmp(&y.pow(q))
}

/// Largest integer `n` with `n^q * 2^s <= N^p`, i.e. `floor((N^p / 2^s)^(1/q))`.
pub fn floor_power_bound(n: u64, p: u32, s: u32, q: u32) -> u64 {
    let num = BigUint::from(n).pow(p) >> s;
    big_iroot(&num, q).to_u64().expect("bound below N fits in u64")
}

/// Number of positive divisors of `n >= 1` by trial division up to `sqrt(n)`.
pub fn divisor_count(n: u64) -> u64 {
    assert!(n >= 1, "divisor_count needs n >= 1");
    let mut count = 0;
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            count += if d * d == n { 1 } else { 2 };
        }
        d += 1;
    }
    count
}

/// Number of prime factors counted with multiplicity (`Omega(1) = 0`).
pub fn big_omega(mut n: u64) -> u32 {
    let mut count = 0;
    let mut p = 2u64;
    while p * p <= n {
        while n.is_multiple_of(p) {
            n /= p;
            count += 1;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        count += 1;
    }
    count
}

/// `Omega(n)` for every `n` in `0..=limit`, by a smallest-prime-factor sieve.
pub fn big_omega_table(limit: u64) -> Vec<u8> {
    let limit = limit as usize;
    let mut omega = vec![0u8; limit + 1];
    for p in 2..=limit {
        // No smaller prime has touched p, so p is prime.
        if omega[p] == 0 {
            let mut pk = p;
            loop {
                for m in (pk..=limit).step_by(pk) {
                    omega[m] += 1;
                }
                match pk.checked_mul(p) {
                    Some(next) if next <= limit => pk = next,
                    _ => break,
                }
            }
        }
    }
    omega
}

pub fn factorial(n: u64) -> BigUint {
    (2..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// Riemann zeta at an integer `s >= 2`, by Euler-Maclaurin summation.
pub fn zeta(s: u32) -> f64 {
    assert!(s >= 2, "zeta diverges at s = {s}");
    const N: u32 = 32;
    // B_{2j} / (2j)!
    const BERNOULLI_OVER_FACT: [f64; 6] = [
        1.0 / 12.0,
        -1.0 / 720.0,
        1.0 / 30240.0,
        -1.0 / 1209600.0,
        1.0 / 47900160.0,
        -691.0 / 1307674368000.0,
    ];
    let sf = f64::from(s);
    let n = f64::from(N);
    let mut head = 0.0;
    for k in (1..N).rev() {
        head += f64::from(k).powf(-sf);
    }
    let mut tail = n.powf(1.0 - sf) / (sf - 1.0) + 0.5 * n.powf(-sf);
    // Rising product s (s+1) ... (s + 2j - 2).
    let mut rising = sf;
    for (j, c) in BERNOULLI_OVER_FACT.iter().enumerate() {
        let order = 2 * j as i32 + 1;
        tail += c * rising * n.powi(-order) * n.powf(-sf);
        rising *= (sf + 2.0 * j as f64 + 1.0) * (sf + 2.0 * j as f64 + 2.0);
    }
    head + tail
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_roots() {
        assert_eq!(iroot(50, 2), 7);
        assert_eq!(iroot(49, 2), 7);
        assert_eq!(iroot(48, 2), 6);
        assert_eq!(iroot(100_000, 5), 10);
        assert_eq!(iroot(99_999, 5), 9);
        assert_eq!(iroot(u64::MAX, 2), 4_294_967_295);
        assert_eq!(iroot(u64::MAX, 64), 1);
        for n in 0..2000u64 {
            for k in 1..6 {
                let r = iroot(n, k);
                assert!(r.pow(k) <= n && (r + 1).pow(k) > n, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn power_bounds() {
        // (100/2)^(1/2) -> 7
        assert_eq!(floor_power_bound(100, 1, 1, 2), 7);
        // N^(1/5) / 2^(4/5) at N = 10^6: (10^6 / 16)^(1/5) = 9.1...
        assert_eq!(floor_power_bound(1_000_000, 1, 4, 5), 9);
        assert_eq!(floor_power_bound(100_000, 4, 0, 5), 10_000);
        assert_eq!(cmp_powers(&BigUint::from(10u32), 5, &BigUint::from(100_000u32), 1), Ordering::Equal);
    }

    #[test]
    fn divisors() {
        assert_eq!(divisor_count(1), 1);
        assert_eq!(divisor_count(12), 6);
        assert_eq!(divisor_count(97), 2);
        assert_eq!(divisor_count(36), 9);
    }

    #[test]
    fn omega() {
        assert_eq!(big_omega(12), 3);
        assert_eq!(big_omega(1), 0);
        assert_eq!(big_omega(32), 5);
        assert_eq!(big_omega(97), 1);
        let table = big_omega_table(5000);
        for n in 1..=5000u64 {
            assert_eq!(u32::from(table[n as usize]), big_omega(n), "n={n}");
        }
    }

    #[test]
    fn zeta_values() {
        let pi = std::f64::consts::PI;
        assert!((zeta(2) - pi * pi / 6.0).abs() < 1e-14);
        assert!((zeta(4) - pi.powi(4) / 90.0).abs() < 1e-14);
        assert!((zeta(3) - 1.202_056_903_159_594_2).abs() < 1e-14);
        assert!((zeta(20) - 1.000_000_953_962_033_9).abs() < 1e-14);
    }
}
