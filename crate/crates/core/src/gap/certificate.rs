//! Gap certificates and their independent verification.

use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::growth::g2_big;
use crate::arith::primality::{is_prime_with, PrimalityConfig};
use crate::arith::primes_up_to;
use crate::{Error, Result};

/// Trial-division bound for divisor witnesses.
pub const TRIAL_DIVISION_BOUND: u64 = 100_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// A nontrivial divisor.
    Divisor(BigUint),
    /// The number failed the fixed-schedule probable-prime test with this many rounds.
    PrpRounds(u32),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranscriptEntry {
    pub n: BigUint,
    pub witness: Witness,
}

/// Construction parameters recorded alongside a gap.
#[derive(Debug, Clone, PartialEq)]
pub struct Provenance {
    pub x: u64,
    pub c: f64,
    pub c0: f64,
    pub m0: BigUint,
    pub p_x: BigUint,
    pub r: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Window {
    pub lo: BigUint,
    pub hi: BigUint,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GapCertificate {
    pub x: u64,
    pub k: u64,
    pub c: f64,
    pub c0: f64,
    pub m0: BigUint,
    pub p_x: BigUint,
    pub r: u64,
    pub q0: BigUint,
    pub window: Window,
    pub left_prime: BigUint,
    pub right_prime: BigUint,
    pub gap_length: BigUint,
    /// `None` when `log_4` of the left prime is not positive.
    pub g2_value: Option<f64>,
    pub ratio: Option<f64>,
    pub transcript: Vec<TranscriptEntry>,
}

/// Reusable state for producing certificates.
#[derive(Debug, Clone)]
pub struct Certifier {
    small_primes: Vec<u64>,
    cfg: PrimalityConfig,
}

impl Default for Certifier {
    fn default() -> Self {
        Self::new(PrimalityConfig::default())
    }
}

impl Certifier {
    pub fn new(cfg: PrimalityConfig) -> Self {
        Self {
            small_primes: primes_up_to(TRIAL_DIVISION_BOUND),
            cfg,
        }
    }

    fn witness(&self, n: &BigUint) -> Witness {
        for &p in &self.small_primes {
            if (n % p).is_zero() && n != &BigUint::from(p) {
                return Witness::Divisor(BigUint::from(p));
            }
        }
        Witness::PrpRounds(self.cfg.mr_rounds)
    }

    /// Certifies the maximal gap around `q0^k` with window `[q0^k, q0^k + y_window - 1]`.
    pub fn certify_gap(&self, q0: &BigUint, k: u64, y_window: u64) -> Result<GapCertificate> {
        let m0 = if q0.is_zero() { BigUint::zero() } else { q0 - 1u32 };
        let prov = Provenance {
            x: 0,
            c: 0.0,
            c0: 0.0,
            m0,
            p_x: BigUint::zero(),
            r: 0,
        };
        self.certify_with(q0, k, y_window, prov)
    }

    pub fn certify_with(
        &self,
        q0: &BigUint,
        k: u64,
        y_window: u64,
        prov: Provenance,
    ) -> Result<GapCertificate> {
        if !is_prime_with(q0, self.cfg) {
            return Err(Error::NotPrime(q0.to_string()));
        }
        if k < 2 || y_window < 1 {
            return Err(Error::Domain(format!("need k >= 2 and y_window >= 1, got k = {k}, y_window = {y_window}")));
        }
        let lo = q0.pow(k as u32);
        let hi = &lo + (y_window - 1);
        let mut transcript = Vec::new();

        let mut left = &lo - 1u32;
        let mut lower = Vec::new();
        while !is_prime_with(&left, self.cfg) {
            if left < BigUint::from(2u32) {
                return Err(Error::Domain("no prime below q0^k".into()));
            }
            lower.push(TranscriptEntry {
                witness: self.witness(&left),
                n: left.clone(),
            });
            left -= 1u32;
        }
        lower.reverse();
        transcript.extend(lower);

        let mut right = lo.clone();
        while !is_prime_with(&right, self.cfg) {
            transcript.push(TranscriptEntry {
                witness: self.witness(&right),
                n: right.clone(),
            });
            right += 1u32;
        }
        if hi >= right {
            return Err(Error::Verification(format!(
                "window end {hi} reaches the prime {right}"
            )));
        }
        let gap_length = &right - &left;
        let g2_value = g2_big(&left);
        let ratio = g2_value.map(|g| to_f64(&gap_length) / g);
        Ok(GapCertificate {
            x: prov.x,
            k,
            c: prov.c,
            c0: prov.c0,
            m0: prov.m0,
            p_x: prov.p_x,
            r: prov.r,
            q0: q0.clone(),
            window: Window { lo, hi },
            left_prime: left,
            right_prime: right,
            gap_length,
            g2_value,
            ratio,
            transcript,
        })
    }
}

fn to_f64(n: &BigUint) -> f64 {
    num_traits::ToPrimitive::to_f64(n).unwrap_or(f64::INFINITY)
}

/// Standalone certificate for `q0` with default trial-division and round settings.
pub fn certify_gap(q0: &BigUint, k: u64, y_window: u64) -> Result<GapCertificate> {
    Certifier::default().certify_gap(q0, k, y_window)
}

fn fail<T>(msg: impl Into<alloc::string::String>) -> Result<T> {
    Err(Error::Verification(msg.into()))
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
}

/// Re-checks every claim of a certificate from scratch.
pub fn verify_certificate(cert: &GapCertificate) -> Result<()> {
    let cfg = PrimalityConfig::default();
    if cert.k < 2 {
        return fail("k must be at least 2");
    }
    if !is_prime_with(&cert.q0, cfg) {
        return fail(format!("q0 = {} is not prime", cert.q0));
    }
    if &cert.m0 + 1u32 + &cert.p_x * cert.r != cert.q0 {
        return fail("q0 != m0 + 1 + r P_x");
    }
    let lo = cert.q0.pow(cert.k as u32);
    if cert.window.lo != lo {
        return fail("window.lo is not q0^k");
    }
    if cert.window.hi < cert.window.lo {
        return fail("window.hi is below window.lo");
    }
    if !(cert.left_prime < lo && cert.window.hi < cert.right_prime) {
        return fail("window does not sit strictly inside (left_prime, right_prime)");
    }
    if !is_prime_with(&cert.left_prime, cfg) {
        return fail(format!("left_prime {} is not prime", cert.left_prime));
    }
    if !is_prime_with(&cert.right_prime, cfg) {
        return fail(format!("right_prime {} is not prime", cert.right_prime));
    }
    if &cert.right_prime - &cert.left_prime != cert.gap_length {
        return fail("gap_length != right_prime - left_prime");
    }
    let mut expect = &cert.left_prime + 1u32;
    for entry in &cert.transcript {
        if entry.n != expect {
            return fail(format!("transcript expected {expect}, found {}", entry.n));
        }
        match &entry.witness {
            Witness::Divisor(d) => {
                let one = BigUint::one();
                if d <= &one || d >= &entry.n || !(&entry.n % d).is_zero() {
                    return fail(format!("{d} is not a nontrivial divisor of {}", entry.n));
                }
            }
            Witness::PrpRounds(rounds) => {
                if is_prime_with(&entry.n, PrimalityConfig { mr_rounds: *rounds }) {
                    return fail(format!("{} passes the probable-prime test", entry.n));
                }
            }
        }
        expect += 1u32;
    }
    if expect != cert.right_prime {
        return fail(format!("transcript stops before {}", cert.right_prime));
    }
    let g2 = g2_big(&cert.left_prime);
    match (g2, cert.g2_value, cert.ratio) {
        (None, None, None) => {}
        (Some(g), Some(stored), Some(ratio)) => {
            if !close(g, stored) {
                return fail("g2_value does not match left_prime");
            }
            if !close(to_f64(&cert.gap_length) / g, ratio) {
                return fail("ratio != gap_length / g2_value");
            }
        }
        _ => return fail("g2_value / ratio presence does not match the log_4 guard"),
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_examples() {
        let c = certify_gap(&BigUint::from(5u32), 2, 1).unwrap();
        assert_eq!(c.left_prime, BigUint::from(23u32));
        assert_eq!(c.right_prime, BigUint::from(29u32));
        assert_eq!(c.gap_length, BigUint::from(6u32));
        assert_eq!(c.transcript.len(), 5);
        assert!(c.g2_value.is_none() && c.ratio.is_none());
        verify_certificate(&c).unwrap();

        let c = certify_gap(&BigUint::from(3u32), 2, 2).unwrap();
        assert_eq!((c.left_prime.clone(), c.right_prime.clone()), (BigUint::from(7u32), BigUint::from(11u32)));
        assert_eq!(c.gap_length, BigUint::from(4u32));
        verify_certificate(&c).unwrap();

        assert!(matches!(certify_gap(&BigUint::from(9u32), 2, 1), Err(Error::NotPrime(_))));
        assert!(certify_gap(&BigUint::from(5u32), 2, 4).is_ok());
        assert!(certify_gap(&BigUint::from(5u32), 2, 5).is_err());
    }

    #[test]
    fn tampering_is_caught() {
        let good = certify_gap(&BigUint::from(5u32), 2, 1).unwrap();
        let mut bad = good.clone();
        bad.transcript[1].witness = Witness::Divisor(BigUint::from(2u32)); // 2 does not divide 25
        assert!(verify_certificate(&bad).is_err());
        let mut bad = good.clone();
        bad.transcript.remove(1);
        assert!(verify_certificate(&bad).is_err());
        let mut bad = good.clone();
        bad.gap_length = BigUint::from(7u32);
        assert!(verify_certificate(&bad).is_err());
        let mut bad = good.clone();
        bad.right_prime = BigUint::from(31u32);
        assert!(verify_certificate(&bad).is_err());
        let mut bad = good;
        bad.m0 = BigUint::from(3u32);
        assert!(verify_certificate(&bad).is_err());
    }

    #[test]
    fn large_gap_has_g2() {
        // 10^12 + 39 is prime
        let q = BigUint::from(1_000_000_000_039u64);
        let c = certify_gap(&q, 3, 1).unwrap();
        assert!(c.g2_value.is_some());
        verify_certificate(&c).unwrap();
        let mut bad = c.clone();
        bad.ratio = Some(bad.ratio.unwrap() * 1.01);
        assert!(verify_certificate(&bad).is_err());
        // every interior number is witnessed
        assert_eq!(c.transcript.len() as u64 + 1, num_traits::ToPrimitive::to_u64(&c.gap_length).unwrap());
    }
}
