//! The singular series `G_D(L) = prod_{p not | D} (1 - omega(p)/p) (1 - 1/p)^{-g}`.

use crate::arith::primes_up_to;
use crate::math::{exp, ln};
use crate::weights::forms::LinearSystem;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularSeries {
    pub value: f64,
    /// The excluded modulus `D`.
    pub excluded: u64,
    pub cutoff: u64,
    /// Bound on `|true value - value|`.
    pub tail_bound: f64,
}

fn local_factor(omega: u64, p: u64, g: usize) -> f64 {
    let pf = p as f64;
    (1.0 - omega as f64 / pf) * exp(-(g as f64) * ln(1.0 - 1.0 / pf))
}

/// Exact factors for `p <= cutoff` and for the special primes above it.
///
/// Beyond the cutoff every remaining factor has `omega(p) = g`, so its log is
/// at most `g^2 / p^2` in size; summing gives the `g^2 / cutoff` tail.
pub fn singular_series(system: &LinearSystem, d: u64, cutoff: u64) -> Result<SingularSeries> {
    series_with(system, d, cutoff, |p| d != 0 && d % p == 0)
}

/// `G_{WB}(L)`; `excluded` is 0 when `W B` does not fit in a word.
pub fn singular_series_wb(system: &LinearSystem, cutoff: u64) -> Result<SingularSeries> {
    let wb = system.w().and_then(|w| w.checked_mul(system.b)).unwrap_or(0);
    series_with(system, wb, cutoff, |p| system.divides_wb(p))
}

fn series_with(
    system: &LinearSystem,
    d: u64,
    cutoff: u64,
    skip: impl Fn(u64) -> bool,
) -> Result<SingularSeries> {
    let g = system.g();
    let mut log_value = 0.0;
    for p in primes_up_to(cutoff) {
        if skip(p) {
            continue;
        }
        let omega = system.omega(p);
        if omega >= p {
            return Err(Error::NotAdmissible(p));
        }
        log_value += ln(local_factor(omega, p, g));
    }
    for p in system.special_primes() {
        if p <= cutoff || skip(p) {
            continue;
        }
        let omega = system.omega(p);
        if omega >= p {
            return Err(Error::NotAdmissible(p));
        }
        log_value += ln(local_factor(omega, p, g));
    }
    let value = exp(log_value);
    let g2 = (g * g) as f64;
    let tail_bound = value * (exp(g2 / cutoff.max(1) as f64) - 1.0);
    Ok(SingularSeries {
        value,
        excluded: d,
        cutoff,
        tail_bound,
    })
}
