//! k-th power residues and the shifted-power congruence `n = 1 - (e+1)^k (mod p)`.
//!
//! Throughout, `e` is the shift witness and `c = e + 1` the base, so the
//! condition `e != -1 (mod p)` is `p` not dividing `c`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::arith::modular::{discrete_log, gcd, inv_mod, pow_mod, reduce};
use crate::arith::primitive_root;
use crate::math::{ln, sqrt};

const ENUMERATE_BELOW: u64 = 100;
const SCAN_WITNESS_BELOW: u64 = 1 << 16;

#[inline]
fn one_minus(n: i64, p: u64) -> u64 {
    let r = reduce(n, p);
    if r <= 1 {
        1 - r
    } else {
        p + 1 - r
    }
}

/// `gcd(p - 1, k)`.
pub fn residue_degree(p: u64, k: u64) -> u64 {
    gcd(p - 1, k)
}

/// Whether `a` is a nonzero k-th power mod the prime `p`.
pub fn is_kth_power_residue(a: u64, p: u64, k: u64) -> bool {
    let a = a % p;
    if a == 0 {
        return false;
    }
    if p < ENUMERATE_BELOW || k % p == 0 {
        return (1..p).any(|c| pow_mod(c, k, p) == a);
    }
    let d = residue_degree(p, k);
    pow_mod(a, (p - 1) / d, p) == 1
}

/// True iff some `c` with `p` not dividing `c` has `c^k = 1 - n (mod p)`.
pub fn shift_solvable(n: i64, p: u64, k: u64) -> bool {
    is_kth_power_residue(one_minus(n, p), p, k)
}

/// Smallest `e` in `[0, p - 2]` with `(e+1)^k = 1 - n (mod p)`.
pub fn shift_witness(n: i64, p: u64, k: u64) -> Option<u64> {
    let target = one_minus(n, p);
    if target == 0 {
        return None;
    }
    if p < SCAN_WITNESS_BELOW {
        return (1..p).find(|&c| pow_mod(c, k, p) == target).map(|c| c - 1);
    }
    if !is_kth_power_residue(target, p, k) {
        return None;
    }
    // roots of c^k = target are rho^t with k t = s (mod p-1)
    let rho = primitive_root(p);
    let s = discrete_log(p, rho, target).ok()?;
    let d = residue_degree(p, k);
    let m = (p - 1) / d;
    let inv = inv_mod((k / d) % m, m).unwrap_or(0);
    let t0 = ((s / d) as u128 * inv as u128 % m.max(1) as u128) as u64;
    (0..d)
        .map(|j| pow_mod(rho, t0 + j * m, p))
        .min()
        .map(|c| c - 1)
}

/// Character-side criterion: with `s = ind_rho(1 - n)`, solvable iff `D | s`.
pub fn indicator_via_characters(n: i64, p: u64, k: u64) -> u8 {
    let target = one_minus(n, p);
    if target == 0 {
        return 0;
    }
    let rho = primitive_root(p);
    let s = match discrete_log(p, rho, target) {
        Ok(s) => s,
        Err(_) => return 0,
    };
    (s % residue_degree(p, k) == 0) as u8
}

/// Solvable residues of the shifted congruence modulo one prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftSolvability {
    pub p: u64,
    pub k: u64,
    pub d: u64,
    pub solvable_residues: BTreeSet<u64>,
}

impl ShiftSolvability {
    /// Enumerates `1 - c^k` for `c = 1..p-1`.
    pub fn new(p: u64, k: u64) -> Self {
        let solvable_residues = (1..p)
            .map(|c| one_minus(pow_mod(c, k, p) as i64, p))
            .collect();
        Self {
            p,
            k,
            d: residue_degree(p, k),
            solvable_residues,
        }
    }

    pub fn contains(&self, n: i64) -> bool {
        self.solvable_residues.contains(&reduce(n, self.p))
    }
}

/// The classes `a = 1 - (e+1)^k (mod s)` usable for sieving mod `s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdmissibleClassFamily {
    pub s: u64,
    pub k: u64,
    pub classes: BTreeSet<u64>,
    /// Class to its smallest shift witness `e`.
    pub witnesses: BTreeMap<u64, u64>,
}

impl AdmissibleClassFamily {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn contains(&self, a: u64) -> bool {
        self.classes.contains(&(a % self.s))
    }

    pub fn witness(&self, a: u64) -> Option<u64> {
        self.witnesses.get(&(a % self.s)).copied()
    }
}

/// All admissible classes mod `s`. For `s = 2` this is `{0}` with witness 0.
pub fn admissible_classes(s: u64, k: u64) -> AdmissibleClassFamily {
    let mut witnesses = BTreeMap::new();
    for e in 0..s.saturating_sub(1) {
        let a = one_minus(pow_mod(e + 1, k, s) as i64, s);
        witnesses.entry(a).or_insert(e);
    }
    AdmissibleClassFamily {
        s,
        k,
        classes: witnesses.keys().copied().collect(),
        witnesses,
    }
}

/// Membership in the auxiliary prime window used for pairing leftovers.
///
/// `x < p <= C0 x`, and `p = 2 (mod 3)` for odd `k`, `p = 3 (mod 2k)` for even `k`.
pub fn ptilde_member(p: u64, x: u64, c0: f64, k: u64) -> bool {
    if p <= x || (p as f64) > c0 * x as f64 {
        return false;
    }
    if k % 2 == 1 {
        p % 3 == 2
    } else {
        p % (2 * k) == 3
    }
}

/// Legendre symbol by Euler's criterion: returns -1, 0 or 1.
pub fn legendre(a: i64, p: u64) -> i8 {
    let a = reduce(a, p);
    if a == 0 {
        return 0;
    }
    if p == 2 {
        return 1;
    }
    if pow_mod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Number of `p` in `ptilde` with `(-u / p) = 1`.
pub fn qr_count(u: u64, ptilde: &[u64]) -> usize {
    let neg = -(u as i128);
    ptilde
        .iter()
        .filter(|&&p| legendre((neg % p as i128) as i64, p) == 1)
        .count()
}

/// True iff more than `delta_threshold` primes of `ptilde` have `(-u / p) = 1`.
pub fn qr_good(u: u64, ptilde: &[u64], delta_threshold: usize) -> bool {
    qr_count(u, ptilde) > delta_threshold
}

/// The character `n -> e(l ind(n) / D)` mod a prime, with `D | p - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PowerCharacter {
    pub p: u64,
    pub d: u64,
    pub l: u64,
    rho: u64,
}

impl PowerCharacter {
    pub fn new(p: u64, d: u64, l: u64) -> Option<Self> {
        if d == 0 || (p - 1) % d != 0 {
            return None;
        }
        Some(Self {
            p,
            d,
            l: l % d,
            rho: primitive_root(p),
        })
    }

    pub fn is_principal(&self) -> bool {
        self.l == 0
    }

    /// Value as `(re, im)`; zero on multiples of `p`.
    pub fn eval(&self, n: u64) -> (f64, f64) {
        let n = n % self.p;
        if n == 0 {
            return (0.0, 0.0);
        }
        let s = discrete_log(self.p, self.rho, n).unwrap_or(0);
        let phase = ((self.l * (s % self.d)) % self.d) as f64 / self.d as f64;
        let ang = 2.0 * core::f64::consts::PI * phase;
        (libm::cos(ang), libm::sin(ang))
    }

    /// Values on `0..p`, built by walking powers of the primitive root.
    pub fn table(&self) -> Vec<(f64, f64)> {
        let mut out = alloc::vec![(0.0, 0.0); self.p as usize];
        let mut g = 1u64;
        for s in 0..self.p - 1 {
            let phase = ((self.l * (s % self.d)) % self.d) as f64 / self.d as f64;
            let ang = 2.0 * core::f64::consts::PI * phase;
            out[g as usize] = (libm::cos(ang), libm::sin(ang));
            g = g * self.rho % self.p;
        }
        out
    }

    /// Largest modulus of a partial sum `sum_{n <= N} chi(n)` over one period.
    pub fn max_partial_sum(&self) -> f64 {
        let t = self.table();
        let (mut re, mut im, mut best) = (0.0f64, 0.0f64, 0.0f64);
        for v in t.iter().skip(1) {
            re += v.0;
            im += v.1;
            best = best.max(sqrt(re * re + im * im));
        }
        best
    }

    pub fn polya_vinogradov_bound(&self) -> f64 {
        let q = self.p as f64;
        sqrt(q) * ln(q)
    }
}
