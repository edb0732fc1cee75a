//! Good integers: how evenly `n` meets the admissible classes of the sieving
//! primes, and the Monte-Carlo harness for survival under random classes.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use rand::Rng;

use crate::arith::gcd;
use crate::gap::SieveContext;
use crate::math::{ln, powf, sqrt};
use crate::residues::{admissible_classes, shift_solvable};
use crate::seed::{rng, streams};
use crate::{Error, Result};

/// Default exponent `e` in the deviation bound `(log x)^{-e}`.
pub const DEFAULT_TOLERANCE_EXPONENT: f64 = 1.0 / 40.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Tolerance {
    /// Bound `(log x)^{-e}`.
    Exponent(f64),
    /// Fixed bound.
    Absolute(f64),
}

/// One unit class `u mod k`: its primes `S_u`, `d(u) = gcd(u-1, k)` and `r*(u)`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitClass {
    pub u: u64,
    pub d: u64,
    pub primes: Vec<u64>,
    pub r_star: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GoodSetParams {
    pub x: u64,
    pub y: u64,
    pub k: u64,
    pub s: Vec<u64>,
    pub tolerance: Tolerance,
    /// Translates leaving `[x, y]` fail membership when true.
    pub strict: bool,
    pub classes: Vec<UnitClass>,
    /// Admissible classes per sieving prime, ascending.
    families: BTreeMap<u64, Vec<u64>>,
}

impl GoodSetParams {
    pub fn new(x: u64, y: u64, k: u64, s: Vec<u64>, tolerance: Tolerance) -> Self {
        let mut classes = Vec::new();
        for u in 1..=k {
            let u = u % k;
            if gcd(u, k) != 1 && k != 1 {
                continue;
            }
            let primes: Vec<u64> = s.iter().copied().filter(|&p| p % k == u % k).collect();
            let d = gcd((u + k - 1) % k, k);
            let d = if d == 0 { k } else { d };
            let r_star = primes.iter().map(|&p| 1.0 / p as f64).sum::<f64>() / d as f64;
            classes.push(UnitClass { u, d, primes, r_star });
        }
        classes.sort_by_key(|c| c.u);
        let families = s
            .iter()
            .map(|&p| (p, admissible_classes(p, k).classes.into_iter().collect()))
            .collect();
        Self {
            x,
            y,
            k,
            s,
            tolerance,
            strict: true,
            classes,
            families,
        }
    }

    pub fn from_context(ctx: &SieveContext, tolerance: Tolerance) -> Self {
        Self::new(ctx.x, ctx.y, ctx.k, ctx.s.clone(), tolerance)
    }

    pub fn lenient(mut self) -> Self {
        self.strict = false;
        self
    }

    pub fn threshold(&self) -> f64 {
        match self.tolerance {
            Tolerance::Exponent(e) => powf(ln(self.x as f64), -e),
            Tolerance::Absolute(t) => t,
        }
    }

    pub fn unit_class(&self, u: u64) -> Option<&UnitClass> {
        self.classes.iter().find(|c| c.u == u % self.k)
    }

    pub fn family(&self, s: u64) -> Option<&[u64]> {
        self.families.get(&s).map(|v| v.as_slice())
    }

    fn in_window(&self, n: i128) -> bool {
        n >= self.x as i128 && n <= self.y as i128
    }

    fn deviation_ok(&self, n: u64) -> bool {
        let t = self.threshold();
        self.classes
            .iter()
            .all(|c| (r_sum(n, &c.primes, self.k) - c.r_star).abs() <= t)
    }
}

fn r_sum(n: u64, primes: &[u64], k: u64) -> f64 {
    primes
        .iter()
        .filter(|&&s| shift_solvable((n % s) as i64, s, k))
        .map(|&s| 1.0 / s as f64)
        .sum()
}

/// `r(n, u)`: the sum of `1/s` over `s` in `S_u` for which `n` is an admissible class.
pub fn r_of(n: u64, u: u64, params: &GoodSetParams) -> f64 {
    params
        .unit_class(u)
        .map_or(0.0, |c| r_sum(n, &c.primes, params.k))
}

pub fn in_g(n: u64, params: &GoodSetParams) -> Result<bool> {
    if !params.in_window(n as i128) {
        return Err(Error::Domain(format!(
            "n = {n} outside [{}, {}]",
            params.x, params.y
        )));
    }
    Ok(params.deviation_ok(n))
}

/// `n` is good and so is every translate `n + (h_i - h_l) p`.
pub fn in_gp(n: u64, p: u64, tuple: &[i64], params: &GoodSetParams) -> Result<bool> {
    if !in_g(n, params)? {
        return Ok(false);
    }
    for &hi in tuple {
        for &hl in tuple {
            if hi == hl {
                continue;
            }
            let m = n as i128 + (hi - hl) as i128 * p as i128;
            if !params.in_window(m) {
                if params.strict {
                    return Ok(false);
                }
                continue;
            }
            if !params.deviation_ok(m as u64) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Independent uniform admissible class per sieving prime.
pub fn sample_a(params: &GoodSetParams, seed: u64) -> BTreeMap<u64, u64> {
    sample_a_indexed(params, seed, 0)
}

fn sample_a_indexed(params: &GoodSetParams, seed: u64, index: u64) -> BTreeMap<u64, u64> {
    let mut g = rng(seed, streams::SAMPLE_A, index);
    params
        .families
        .iter()
        .map(|(&s, fam)| (s, fam[g.gen_range(0..fam.len())]))
        .collect()
}

/// One Monte-Carlo trial: do all of `ns` avoid a freshly drawn class vector?
pub fn membership_trial(ns: &[u64], params: &GoodSetParams, seed: u64, trial: u64) -> bool {
    let mut g = rng(seed, streams::MEMBERSHIP, trial);
    let mut ok = true;
    // draw every class even after a hit so the stream layout is fixed
    for (&s, fam) in &params.families {
        let a = fam[g.gen_range(0..fam.len())];
        if ok && ns.iter().any(|&n| n % s == a) {
            ok = false;
        }
    }
    ok
}

/// `(estimate, binomial standard error)` from a hit count.
pub fn binomial_estimate(hits: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (1.0, 0.0);
    }
    let p = hits as f64 / trials as f64;
    (p, sqrt(p * (1.0 - p) / trials as f64))
}

/// Monte-Carlo estimate of `P(all n in S(a))`, single threaded.
pub fn mc_membership(ns: &[u64], params: &GoodSetParams, trials: u64, seed: u64) -> (f64, f64) {
    if ns.is_empty() {
        return (1.0, 0.0);
    }
    let hits = (0..trials)
        .filter(|&t| membership_trial(ns, params, seed, t))
        .count() as u64;
    binomial_estimate(hits, trials)
}

/// Exact `P(all n in S(a))`, using independence across sieving primes.
pub fn exact_membership(ns: &[u64], params: &GoodSetParams) -> f64 {
    let mut prob = 1.0;
    for (&s, fam) in params.families.iter().rev() {
        let mut hit: Vec<u64> = ns.iter().map(|&n| n % s).filter(|r| fam.binary_search(r).is_ok()).collect();
        hit.sort_unstable();
        hit.dedup();
        prob *= 1.0 - hit.len() as f64 / fam.len() as f64;
    }
    prob
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SigmaValue {
    pub sigma: f64,
    pub terms: usize,
}

/// `prod (1 - 1/s)` over the sieving primes, largest first.
pub fn sigma(params: &GoodSetParams) -> SigmaValue {
    sigma_of(&params.s)
}

pub fn sigma_of(primes: &[u64]) -> SigmaValue {
    let mut sorted = primes.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let sigma = sorted.iter().fold(1.0, |acc, &s| acc * (1.0 - 1.0 / s as f64));
    SigmaValue {
        sigma,
        terms: sorted.len(),
    }
}

/// The first `t` members of the good set at or after `start`.
pub fn first_good(params: &GoodSetParams, start: u64, t: usize) -> Vec<u64> {
    (start.max(params.x)..=params.y)
        .filter(|&n| params.deviation_ok(n))
        .take(t)
        .collect()
}

/// Fraction of `n` in `[lo, hi]` that are good.
pub fn good_fraction(params: &GoodSetParams, lo: u64, hi: u64) -> f64 {
    let lo = lo.max(params.x);
    let hi = hi.min(params.y);
    if hi < lo {
        return 0.0;
    }
    let good = (lo..=hi).filter(|&n| params.deviation_ok(n)).count();
    good as f64 / (hi - lo + 1) as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::prime_range;

    fn params(k: u64, s: Vec<u64>) -> GoodSetParams {
        GoodSetParams::new(1_000_000, 1_060_000, k, s, Tolerance::Absolute(0.01))
    }

    #[test]
    fn r_examples() {
        let p = params(3, Vec::new());
        assert_eq!(r_of(1_000_002, 1, &p), 0.0);
        // 7 = 1 (mod 3), S_1 = {7}; n = 2 (mod 7) is admissible
        let p = params(3, alloc::vec![7]);
        let n = 1_000_000 + ((2 + 7 - 1_000_000 % 7) % 7);
        assert!((r_of(n, 1, &p) - 1.0 / 7.0).abs() < 1e-15);
        assert_eq!(r_of(n, 2, &p), 0.0);
    }

    #[test]
    fn r_is_additive() {
        let s = prime_range(7, 300).unwrap();
        let p = params(2, s.clone());
        let (a, b) = s.split_at(s.len() / 2);
        for n in 1_000_000..1_000_050 {
            let whole = r_of(n, 1, &p);
            let halves = r_sum(n, a, 2) + r_sum(n, b, 2);
            assert!((whole - halves).abs() < 1e-14);
        }
    }

    #[test]
    fn unit_classes() {
        let s = prime_range(7, 300).unwrap();
        let p = params(2, s.clone());
        assert_eq!(p.classes.len(), 1);
        assert_eq!(p.classes[0].d, 2);
        let p = params(3, s.clone());
        assert_eq!(p.classes.iter().map(|c| (c.u, c.d)).collect::<Vec<_>>(), [(1, 3), (2, 1)]);
        let p = params(4, s.clone());
        assert_eq!(p.classes.iter().map(|c| (c.u, c.d)).collect::<Vec<_>>(), [(1, 4), (3, 2)]);
        // gcd(u - 1, k) agrees with gcd(s - 1, k) for s = u (mod k)
        for k in 2..=6u64 {
            let p = params(k, s.clone());
            for c in &p.classes {
                for &q in &c.primes {
                    assert_eq!(gcd(q - 1, k), c.d);
                }
            }
        }
    }

    #[test]
    fn exact_density_relation() {
        let s = prime_range(7, 300).unwrap();
        for k in 2..=6u64 {
            let p = params(k, s.clone());
            for c in &p.classes {
                let mut mean = 0.0;
                for &q in &c.primes {
                    let count = (0..q).filter(|&n| shift_solvable(n as i64, q, k)).count() as u64;
                    assert_eq!(count, (q - 1) / gcd(q - 1, k));
                    mean += count as f64 / q as f64 / q as f64;
                }
                let correction: f64 = c.primes.iter().map(|&q| 1.0 / (c.d * q * q) as f64).sum();
                assert!((mean - (c.r_star - correction)).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn window_and_translates() {
        let p = params(2, prime_range(7, 300).unwrap());
        assert!(in_g(999_999, &p).is_err());
        let n = first_good(&p, 1_000_000, 1)[0];
        assert_eq!(in_gp(n, 600_011, &[0], &p).unwrap(), in_g(n, &p).unwrap());
        // translate n - 2p falls below x: strict fails, lenient ignores
        assert!(!in_gp(n, 600_011, &[0, 2], &p).unwrap());
        let lenient = p.clone().lenient();
        let direct = in_g(n, &lenient).unwrap()
            && [(n as i128) + 2 * 600_011]
                .iter()
                .all(|&m| m > 1_060_000 || in_g(m as u64, &lenient).unwrap());
        assert_eq!(in_gp(n, 600_011, &[0, 2], &lenient).unwrap(), direct);
    }

    #[test]
    fn gp_brute_force() {
        let p = params(3, prime_range(7, 300).unwrap());
        let tuple = [0i64, 2, 6];
        let prime = 1009;
        for n in 1_020_000..1_020_300u64 {
            let mut want = in_g(n, &p).unwrap();
            for i in tuple {
                for l in tuple {
                    let m = n as i64 + (i - l) * prime as i64;
                    want &= in_g(m as u64, &p).unwrap();
                }
            }
            assert_eq!(in_gp(n, prime, &tuple, &p).unwrap(), want);
            if want {
                assert!(in_g(n, &p).unwrap());
            }
        }
    }

    #[test]
    fn sample_a_uniform() {
        let p = params(3, alloc::vec![7]);
        assert_eq!(sample_a(&p, 3), sample_a(&p, 3));
        let mut counts = BTreeMap::new();
        for i in 0..10_000 {
            *counts.entry(sample_a_indexed(&p, 1, i)[&7]).or_insert(0u32) += 1;
        }
        assert_eq!(counts.keys().copied().collect::<Vec<_>>(), [0, 2]);
        for &c in counts.values() {
            let sd = sqrt(10_000.0 * 0.25);
            assert!((c as f64 - 5000.0).abs() < 5.0 * sd);
        }
        assert!(sample_a(&params(3, Vec::new()), 0).is_empty());
    }

    #[test]
    fn membership_examples() {
        let p = params(2, alloc::vec![5]);
        assert_eq!(mc_membership(&[], &p, 100, 0), (1.0, 0.0));
        // 1_000_001 = 1 (mod 5), outside {0, 2}
        assert_eq!(mc_membership(&[1_000_001], &p, 1000, 0), (1.0, 0.0));
        assert_eq!(exact_membership(&[1_000_001], &p), 1.0);
        let (est, se) = mc_membership(&[1_000_002], &p, 20_000, 9);
        assert!((est - 0.5).abs() < 3.0 * se + 1e-3);
        assert_eq!(exact_membership(&[1_000_000, 1_000_002], &p), 0.0);
    }

    #[test]
    fn sigma_values() {
        assert_eq!(sigma_of(&[]).sigma, 1.0);
        assert!((sigma_of(&[2, 3]).sigma - 1.0 / 3.0).abs() < 1e-16);
        let s = prime_range(7, 300).unwrap();
        // exact rational product with u128 numerator/denominator reduced by gcd
        let (mut num, mut den) = (1u128, 1u128);
        let mut f = 1.0f64;
        for &q in &s {
            num *= (q - 1) as u128;
            den *= q as u128;
            let g = gcd128(num, den);
            num /= g;
            den /= g;
            if den > 1 << 100 {
                f *= num as f64 / den as f64;
                num = 1;
                den = 1;
            }
        }
        f *= num as f64 / den as f64;
        let got = sigma_of(&s).sigma;
        assert!((got / f - 1.0).abs() < 1e-12);
        assert_eq!(sigma_of(&s).terms, s.len());
    }

    fn gcd128(mut a: u128, mut b: u128) -> u128 {
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a
    }
}
