//! Matrix rows `a_{r,u} = q0^k + u - 1` with `q0 = m0 + 1 + r M`.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use super::context::SieveContext;
use crate::arith::{is_prime, pow_mod, primes_up_to};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RowStatus {
    /// No prime among `a_{r,u}`, `2 <= u <= y`.
    Clean,
    /// Positions `u` where `a_{r,u}` is prime.
    Dirty(Vec<u64>),
}

impl RowStatus {
    pub fn is_clean(&self) -> bool {
        matches!(self, RowStatus::Clean)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowResult {
    pub r: u64,
    pub q0: BigUint,
    pub status: RowStatus,
}

/// Per-row data independent of `r`: the class each prime kills and which
/// positions are left uncovered.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanPlan {
    pub k: u64,
    pub y: u64,
    pub m0: BigUint,
    pub modulus: BigUint,
    /// `(pi, class)` with `a_{r,u} = 0 (mod pi)` whenever `u = class (mod pi)`.
    pub kills: Vec<(u64, u64)>,
    /// Smallest killing prime for `u = 2..=y` (index `u - 2`), 0 when uncovered.
    pub cover: Vec<u64>,
    pub uncovered: Vec<u64>,
}

impl ScanPlan {
    /// Kill classes come straight from `m0`: since `q0 = m0 + 1 (mod pi)` for
    /// every `pi` dividing the modulus, `pi | a_{r,u}` iff `u = 1 - (m0+1)^k`.
    pub fn new(ctx: &SieveContext, m0: &BigUint, modulus: &BigUint) -> Self {
        let k = ctx.k;
        let y = ctx.y;
        let mut kills = Vec::new();
        for p in primes_up_to(ctx.c0x()) {
            if (modulus % p).to_u64() != Some(0) {
                continue;
            }
            let base = ((m0 % p).to_u64().unwrap() + 1) % p;
            let class = (1 + p - pow_mod(base, k, p)) % p;
            kills.push((p, class));
        }
        let mut cover = vec![0u64; y.saturating_sub(1) as usize];
        for &(p, class) in &kills {
            let first = if class >= 2 { class } else { class + p };
            let mut u = first;
            while u <= y {
                let slot = &mut cover[(u - 2) as usize];
                if *slot == 0 {
                    *slot = p;
                }
                u += p;
            }
        }
        let uncovered = cover
            .iter()
            .enumerate()
            .filter(|(_, &c)| c == 0)
            .map(|(i, _)| i as u64 + 2)
            .collect();
        Self {
            k,
            y,
            m0: m0.clone(),
            modulus: modulus.clone(),
            kills,
            cover,
            uncovered,
        }
    }

    pub fn q0(&self, r: u64) -> BigUint {
        &self.m0 + 1u32 + &self.modulus * r
    }

    /// Tests row `r`. Returns `None` when `q0` is not prime.
    pub fn scan_row(&self, r: u64) -> Result<Option<RowResult>> {
        let q0 = self.q0(r);
        if !is_prime(&q0) {
            return Ok(None);
        }
        self.check_sieved(&q0)?;
        let base = q0.pow(self.k as u32);
        let mut primes = Vec::new();
        for &u in &self.uncovered {
            let a = &base + (u - 1);
            if is_prime(&a) {
                primes.push(u);
            }
        }
        let status = if primes.is_empty() {
            RowStatus::Clean
        } else {
            RowStatus::Dirty(primes)
        };
        Ok(Some(RowResult { r, q0, status }))
    }

    /// Re-derives `pi | a_{r,u}` from `q0 mod pi` for every covered position.
    fn check_sieved(&self, q0: &BigUint) -> Result<()> {
        for (i, &p) in self.cover.iter().enumerate() {
            if p == 0 {
                continue;
            }
            let u = i as u64 + 2;
            let qr = (q0 % p).to_u64().unwrap();
            if (pow_mod(qr, self.k, p) + (u - 1) % p) % p != 0 {
                return Err(Error::Verification(alloc::format!(
                    "a_(r,{u}) is not divisible by its sieving prime {p}"
                )));
            }
        }
        Ok(())
    }

    /// Rows `r0..r1` with prime `q0`, in order.
    pub fn scan_range(&self, r0: u64, r1: u64) -> Result<Vec<RowResult>> {
        let mut out = Vec::new();
        for r in r0..r1 {
            if let Some(row) = self.scan_row(r)? {
                out.push(row);
            }
        }
        Ok(out)
    }
}

/// Rows `1..=r_max` whose `q0` is prime, with their status.
pub fn scan_rows(ctx: &SieveContext, m0: &BigUint, modulus: &BigUint, r_max: u64) -> Result<Vec<RowResult>> {
    ScanPlan::new(ctx, m0, modulus).scan_range(1, r_max + 1)
}
