//! Sieves of Eratosthenes: a plain sieve for base primes and a segmented
//! sieve for windows far from the origin.

use alloc::vec;
use alloc::vec::Vec;

use crate::{math, Error, Result};

/// Knobs for the segmented sieve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SieveConfig {
    /// Numbers per segment.
    pub block_size: usize,
    /// Upper bound on the size of the returned prime list, in bytes.
    pub memory_budget: u64,
}

impl Default for SieveConfig {
    fn default() -> Self {
        Self {
            block_size: 1 << 20,
            memory_budget: 1 << 30,
        }
    }
}

/// All primes `<= limit`, ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
}

impl PrimeTable {
    pub fn new(limit: u64) -> Self {
        Self {
            limit,
            primes: primes_up_to(limit),
        }
    }

    /// Wraps an externally produced list (e.g. a cache file). The list must be
    /// exactly the primes up to `limit`.
    pub fn from_parts(limit: u64, primes: Vec<u64>) -> Result<Self> {
        let sorted = primes.windows(2).all(|w| w[0] < w[1]);
        let bounded = primes.last().map_or(true, |&p| p <= limit);
        if !sorted || !bounded {
            return Err(Error::Domain("prime list is not ascending within limit".into()));
        }
        Ok(Self { limit, primes })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// Primes in `(lo, hi]`, with `hi <= limit`.
    pub fn range(&self, lo: u64, hi: u64) -> &[u64] {
        debug_assert!(hi <= self.limit);
        let a = self.primes.partition_point(|&p| p <= lo);
        let b = self.primes.partition_point(|&p| p <= hi);
        &self.primes[a..b.max(a)]
    }

    pub fn contains(&self, n: u64) -> bool {
        self.primes.binary_search(&n).is_ok()
    }
}

/// Primes `<= limit` by a bit-per-odd sieve.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let limit = limit as usize;
    // index i stands for 2i+1
    let half = limit / 2 + 1;
    let mut composite = vec![false; half];
    let mut i = 1;
    while (2 * i + 1) * (2 * i + 1) <= limit {
        if !composite[i] {
            let p = 2 * i + 1;
            let mut j = p * p / 2;
            while j < half {
                composite[j] = true;
                j += p;
            }
        }
        i += 1;
    }
    let mut out = Vec::with_capacity(estimate_count(limit as u64) as usize);
    out.push(2);
    out.extend(
        (1..half)
            .filter(|&i| !composite[i] && 2 * i + 1 <= limit)
            .map(|i| (2 * i + 1) as u64),
    );
    out
}

fn estimate_count(n: u64) -> u64 {
    if n < 17 {
        return 8;
    }
    let l = math::ln(n as f64);
    (1.26 * n as f64 / l) as u64
}

/// Primes `p` with `lo < p <= hi`, ascending.
pub fn prime_range(lo: u64, hi: u64) -> Result<Vec<u64>> {
    prime_range_with(lo, hi, SieveConfig::default())
}

pub fn prime_range_with(lo: u64, hi: u64, cfg: SieveConfig) -> Result<Vec<u64>> {
    if lo > hi {
        return Err(Error::Domain("prime_range needs lo <= hi".into()));
    }
    let expected = estimate_count(hi).saturating_sub(if lo > 17 { (lo as f64 / math::ln(lo as f64)) as u64 } else { 0 });
    let needed = expected.saturating_mul(8);
    if needed > cfg.memory_budget {
        return Err(Error::Capacity {
            what: "prime_range output",
            needed,
            budget: cfg.memory_budget,
        });
    }
    let root = isqrt(hi);
    let base = primes_up_to(root);
    let mut out = Vec::new();
    let block = cfg.block_size.max(64) as u64;
    let mut seg_lo = lo + 1;
    let mut flags = vec![true; block as usize];
    while seg_lo <= hi {
        let seg_hi = (seg_lo + block - 1).min(hi);
        let len = (seg_hi - seg_lo + 1) as usize;
        flags[..len].fill(true);
        for &p in &base {
            if p * p > seg_hi {
                break;
            }
            let mut start = seg_lo.div_ceil(p) * p;
            if start < p * p {
                start = p * p;
            }
            let mut m = start;
            while m <= seg_hi {
                flags[(m - seg_lo) as usize] = false;
                m += p;
            }
        }
        for (i, &f) in flags[..len].iter().enumerate() {
            let n = seg_lo + i as u64;
            if f && n >= 2 {
                out.push(n);
            }
        }
        seg_lo = seg_hi + 1;
    }
    Ok(out)
}

/// Integer square root.
pub fn isqrt(n: u64) -> u64 {
    let mut r = math::sqrt(n as f64) as u64;
    while r.saturating_mul(r) > n {
        r -= 1;
    }
    while (r + 1).saturating_mul(r + 1) <= n {
        r += 1;
    }
    r
}
