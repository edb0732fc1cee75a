//! Primality testing.
//!
//! Below 2^64 the answer is exact: a strong-pseudoprime test to the first
//! twelve prime bases has no counterexamples in that range. Above 2^64 we run
//! Baillie-PSW (strong base-2 test plus a strong Lucas test with Selfridge
//! parameters) followed by a fixed schedule of further prime bases, so the
//! verdict is reproducible and needs no randomness.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::modular::{mul_mod, pow_mod};

const SMALL_PRIMES: [u64; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89,
    97,
];

/// Number of extra strong-pseudoprime bases run after BPSW for `n >= 2^64`.
pub const DEFAULT_MR_ROUNDS: u32 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimalityConfig {
    pub mr_rounds: u32,
}

impl Default for PrimalityConfig {
    fn default() -> Self {
        Self {
            mr_rounds: DEFAULT_MR_ROUNDS,
        }
    }
}

/// How a positive verdict was reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Evidence {
    /// Exact: deterministic witness set below 2^64.
    Deterministic,
    /// BPSW plus this many further fixed-base rounds.
    ProbablePrime { rounds: u32 },
}

fn strong_probable_prime_u64(n: u64, a: u64) -> bool {
    let a = a % n;
    if a == 0 {
        return true;
    }
    let d = (n - 1) >> (n - 1).trailing_zeros();
    let s = (n - 1).trailing_zeros();
    let mut x = pow_mod(a, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = mul_mod(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

/// Deterministic primality for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &SMALL_PRIMES {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    if n < 97 * 97 {
        return true;
    }
    SMALL_PRIMES[..12]
        .iter()
        .all(|&a| strong_probable_prime_u64(n, a))
}

fn strong_probable_prime(n: &BigUint, a: &BigUint) -> bool {
    let one = BigUint::one();
    let n1 = n - &one;
    let s = n1.trailing_zeros().unwrap_or(0);
    let d = &n1 >> s;
    let mut x = a.modpow(&d, n);
    if x.is_one() || x == n1 {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if x == n1 {
            return true;
        }
    }
    false
}

/// Jacobi symbol (d / n) for odd positive n and small signed d.
fn jacobi(d: i64, n: &BigUint) -> i32 {
    let mut a = BigUint::from(d.unsigned_abs()) % n;
    let mut n = n.clone();
    let mut result = 1i32;
    // (-1/n) = (-1)^((n-1)/2)
    if d < 0 && (&n % 4u32) == BigUint::from(3u32) {
        result = -result;
    }
    while !a.is_zero() {
        while a.is_even() {
            a >>= 1;
            let r = (&n % 8u32).to_u32().unwrap();
            if r == 3 || r == 5 {
                result = -result;
            }
        }
        core::mem::swap(&mut a, &mut n);
        if (&a % 4u32) == BigUint::from(3u32) && (&n % 4u32) == BigUint::from(3u32) {
            result = -result;
        }
        a %= &n;
    }
    if n.is_one() {
        result
    } else {
        0
    }
}

fn is_square(n: &BigUint) -> bool {
    let r = n.sqrt();
    &(&r * &r) == n
}

fn mod_sub(a: &BigUint, b: &BigUint, n: &BigUint) -> BigUint {
    if a >= b {
        (a - b) % n
    } else {
        n - ((b - a) % n)
    }
}

fn half_mod(x: BigUint, n: &BigUint) -> BigUint {
    if x.is_even() {
        x >> 1
    } else {
        (x + n) >> 1
    }
}

/// Strong Lucas probable-prime test with Selfridge's method A parameters.
fn strong_lucas(n: &BigUint) -> bool {
    if is_square(n) {
        return false;
    }
    let mut d: i64 = 5;
    loop {
        match jacobi(d, n) {
            -1 => break,
            0 => {
                // d shares a factor with n
                if BigUint::from(d.unsigned_abs()) != *n {
                    return false;
                }
            }
            _ => {}
        }
        d = if d > 0 { -(d + 2) } else { -d + 2 };
    }
    // P = 1, Q = (1 - D) / 4
    let q_signed = (1 - d) / 4;
    let q = if q_signed >= 0 {
        BigUint::from(q_signed as u64) % n
    } else {
        mod_sub(&BigUint::zero(), &BigUint::from(q_signed.unsigned_abs()), n)
    };
    let d_mod = if d >= 0 {
        BigUint::from(d as u64) % n
    } else {
        mod_sub(&BigUint::zero(), &BigUint::from(d.unsigned_abs()), n)
    };
    let n1 = n + 1u32;
    let s = n1.trailing_zeros().unwrap_or(0);
    let k = &n1 >> s;

    // binary ladder on k computing U_k, V_k, Q^k
    let mut u = BigUint::one();
    let mut v = BigUint::one();
    let mut qk = q.clone();
    let bits = k.bits();
    for i in (0..bits - 1).rev() {
        // doubling
        u = (&u * &v) % n;
        v = mod_sub(&(&v * &v), &(&qk * 2u32), n);
        qk = (&qk * &qk) % n;
        if k.bit(i) {
            // add one: U' = (U + V)/2, V' = (D U + V)/2 with P = 1
            let nu = half_mod(&u + &v, n);
            let nv = half_mod(&d_mod * &u + &v, n);
            u = nu % n;
            v = nv % n;
            qk = (&qk * &q) % n;
        }
    }
    if u.is_zero() || v.is_zero() {
        return true;
    }
    for _ in 1..s {
        v = mod_sub(&(&v * &v), &(&qk * 2u32), n);
        if v.is_zero() {
            return true;
        }
        qk = (&qk * &qk) % n;
    }
    false
}

/// Primality for arbitrary naturals; see the module docs for the schedule.
pub fn is_prime(n: &BigUint) -> bool {
    is_prime_with(n, PrimalityConfig::default())
}

pub fn is_prime_with(n: &BigUint, cfg: PrimalityConfig) -> bool {
    prime_evidence(n, cfg).is_some()
}

/// Like [`is_prime_with`] but reports how the verdict was reached.
pub fn prime_evidence(n: &BigUint, cfg: PrimalityConfig) -> Option<Evidence> {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small).then_some(Evidence::Deterministic);
    }
    for &p in &SMALL_PRIMES {
        if (n % p).is_zero() {
            return None;
        }
    }
    if !strong_probable_prime(n, &BigUint::from(2u32)) {
        return None;
    }
    if !strong_lucas(n) {
        return None;
    }
    for &a in SMALL_PRIMES[1..].iter().take(cfg.mr_rounds as usize) {
        if !strong_probable_prime(n, &BigUint::from(a)) {
            return None;
        }
    }
    Some(Evidence::ProbablePrime {
        rounds: cfg.mr_rounds,
    })
}

/// Smallest prime factor of `n` not exceeding `bound`, if any.
pub fn small_divisor(n: &BigUint, bound: u64, primes: &[u64]) -> Option<u64> {
    for &p in primes {
        if p > bound {
            break;
        }
        if (n % p).is_zero() && n != &BigUint::from(p) {
            return Some(p);
        }
    }
    None
}
