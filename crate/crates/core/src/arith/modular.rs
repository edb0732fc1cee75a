//! Word-sized modular arithmetic, CRT over arbitrary moduli, primitive roots
//! and baby-step/giant-step discrete logarithms.

use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::{math, Error, Result};

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

/// Reduces a signed value into `[0, m)`.
#[inline]
pub fn reduce(n: i64, m: u64) -> u64 {
    (n as i128).rem_euclid(m as i128) as u64
}

/// Distinct prime factors of `n` by trial division (ascending).
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Euler's totient by trial factorisation.
pub fn euler_phi(n: u64) -> u64 {
    prime_factors(n)
        .into_iter()
        .fold(n, |acc, p| acc / p * (p - 1))
}

/// A residue class `residue (mod modulus)` with `0 <= residue < modulus`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Congruence {
    pub residue: BigUint,
    pub modulus: BigUint,
}

impl Congruence {
    /// Builds a reduced class. Panics on a zero modulus.
    pub fn new(residue: BigUint, modulus: BigUint) -> Self {
        assert!(!modulus.is_zero(), "zero modulus");
        Self {
            residue: residue % &modulus,
            modulus,
        }
    }

    pub fn small(residue: u64, modulus: u64) -> Self {
        Self::new(BigUint::from(residue), BigUint::from(modulus))
    }

    pub fn contains(&self, n: &BigUint) -> bool {
        &(n % &self.modulus) == &self.residue
    }
}

fn combine_pair(a: &Congruence, b: &Congruence) -> Option<Congruence> {
    // x = a.r + a.m * t,  t = (b.r - a.r) * a.m^{-1}  (mod b.m)
    let inv = (&a.modulus % &b.modulus).modinv(&b.modulus);
    let inv = match inv {
        Some(i) => i,
        None if b.modulus.is_one() => BigUint::zero(),
        None => return None,
    };
    let ar = &a.residue % &b.modulus;
    let diff = if b.residue >= ar {
        &b.residue - &ar
    } else {
        &b.residue + &b.modulus - &ar
    };
    let t = (diff * inv) % &b.modulus;
    let modulus = &a.modulus * &b.modulus;
    let residue = &a.residue + &a.modulus * t;
    Some(Congruence { residue, modulus })
}

fn combine_range(classes: &[Congruence]) -> Option<Congruence> {
    match classes.len() {
        0 => Some(Congruence::small(0, 1)),
        1 => Some(classes[0].clone()),
        n => {
            let (lo, hi) = classes.split_at(n / 2);
            let l = combine_range(lo)?;
            let h = combine_range(hi)?;
            combine_pair(&l, &h)
        }
    }
}

/// Chinese remaindering over pairwise coprime moduli.
///
/// Combines by a balanced product tree. When the moduli are not pairwise
/// coprime the error names one offending pair.
pub fn crt_combine(classes: &[Congruence]) -> Result<Congruence> {
    if let Some(c) = combine_range(classes) {
        return Ok(c);
    }
    for (i, a) in classes.iter().enumerate() {
        for b in &classes[i + 1..] {
            if !a.modulus.gcd(&b.modulus).is_one() {
                return Err(Error::NotCoprime(
                    format!("{}", a.modulus),
                    format!("{}", b.modulus),
                ));
            }
        }
    }
    unreachable!("product tree failed without a non-coprime pair")
}

/// Smallest primitive root modulo the prime `p` (1 for `p = 2`).
pub fn primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let order = p - 1;
    let factors = prime_factors(order);
    (2..p)
        .find(|&g| factors.iter().all(|&q| pow_mod(g, order / q, p) != 1))
        .expect("prime modulus has a primitive root")
}

/// The unique `s` in `[0, p-2]` with `rho^s = a (mod p)`.
///
/// Baby-step/giant-step with a sorted baby table.
pub fn discrete_log(p: u64, rho: u64, a: u64) -> Result<u64> {
    let a = a % p;
    if a == 0 {
        return Err(Error::Domain(format!("discrete log of 0 mod {p}")));
    }
    if p == 2 {
        return Ok(0);
    }
    let order = p - 1;
    let m = math::ceil(math::sqrt(order as f64)) as u64 + 1;
    let mut baby: Vec<(u64, u64)> = Vec::with_capacity(m as usize);
    let mut cur = 1u64;
    for j in 0..m {
        baby.push((cur, j));
        cur = mul_mod(cur, rho, p);
    }
    // keep the smallest exponent for duplicate values
    baby.sort_unstable();
    baby.dedup_by_key(|e| e.0);
    let giant = pow_mod(inv_mod(rho, p).expect("rho is a unit"), m, p);
    let mut gamma = a;
    for i in 0..=m {
        if let Ok(pos) = baby.binary_search_by_key(&gamma, |e| e.0) {
            let s = (i * m + baby[pos].1) % order;
            return Ok(s);
        }
        gamma = mul_mod(gamma, giant, p);
    }
    Err(Error::Domain(format!("{rho} does not generate {a} mod {p}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn crt_examples() {
        let c = crt_combine(&[Congruence::small(2, 3), Congruence::small(3, 5)]).unwrap();
        assert_eq!(c, Congruence::small(8, 15));
        let c = crt_combine(&[Congruence::small(0, 7)]).unwrap();
        assert_eq!(c, Congruence::small(0, 7));
        let c = crt_combine(&[
            Congruence::small(1, 2),
            Congruence::small(1, 3),
            Congruence::small(1, 5),
        ])
        .unwrap();
        assert_eq!(c, Congruence::small(1, 30));
    }

    #[test]
    fn crt_exhaustive_small() {
        // oracle: scan 0..15
        let want = (0..15u64).find(|n| n % 3 == 2 && n % 5 == 3).unwrap();
        assert_eq!(want, 8);
    }

    #[test]
    fn crt_rejects_non_coprime() {
        let err = crt_combine(&[
            Congruence::small(1, 5),
            Congruence::small(1, 6),
            Congruence::small(0, 4),
        ])
        .unwrap_err();
        assert_eq!(err, Error::NotCoprime("6".into(), "4".into()));
    }

    #[test]
    fn primitive_roots() {
        assert_eq!(primitive_root(7), 3);
        assert_eq!(primitive_root(2), 1);
        let g = primitive_root(41);
        assert!(pow_mod(g, 20, 41) != 1 && pow_mod(g, 8, 41) != 1);
        assert_eq!(g, 6);
    }

    #[test]
    fn dlog_examples() {
        assert_eq!(discrete_log(7, 3, 1).unwrap(), 0);
        assert_eq!(discrete_log(7, 3, 3).unwrap(), 1);
        assert_eq!(discrete_log(7, 3, 6).unwrap(), 3);
        assert!(discrete_log(7, 3, 14).is_err());
    }

    #[test]
    fn dlog_large_prime() {
        let p = 1_000_000_007u64;
        let g = primitive_root(p);
        for s in [0u64, 1, 12345, 999_999_999, 500_000_003] {
            assert_eq!(discrete_log(p, g, pow_mod(g, s, p)).unwrap(), s);
        }
    }

    #[test]
    fn inverse_and_phi() {
        assert_eq!(inv_mod(3, 7), Some(5));
        assert_eq!(inv_mod(2, 4), None);
        assert_eq!(euler_phi(210), 48);
        assert_eq!(prime_factors(360), [2, 3, 5]);
    }
}
