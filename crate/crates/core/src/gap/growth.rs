//! Gap growth functions and logarithms of big integers.

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::math::ln;

/// Natural log of a big integer, valid far beyond the `f64` range.
pub fn ln_big(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        if let Some(f) = n.to_f64() {
            if f.is_finite() {
                return ln(f);
            }
        }
    }
    let shift = bits.saturating_sub(64);
    let top = (n >> shift).to_f64().unwrap_or(f64::INFINITY);
    ln(top) + shift as f64 * core::f64::consts::LN_2
}

fn iterated_from_log(log_x: f64) -> Option<(f64, f64, f64, f64)> {
    if !(log_x > 0.0) {
        return None;
    }
    let l2 = ln(log_x);
    if !(l2 > 0.0) {
        return None;
    }
    let l3 = ln(l2);
    if !(l3 > 0.0) {
        return None;
    }
    let l4 = ln(l3);
    Some((log_x, l2, l3, l4))
}

/// `log x log_2 x log_4 x / log_3 x`, given `log x`. `None` unless `log_4 x > 0`.
pub fn g2_from_log(log_x: f64) -> Option<f64> {
    let (l1, l2, l3, l4) = iterated_from_log(log_x)?;
    (l4 > 0.0).then(|| l1 * l2 * l4 / l3)
}

/// `log x log_2 x log_4 x / (log_3 x)^2`, given `log x`.
pub fn g1_from_log(log_x: f64) -> Option<f64> {
    let (l1, l2, l3, l4) = iterated_from_log(log_x)?;
    (l4 > 0.0).then(|| l1 * l2 * l4 / (l3 * l3))
}

pub fn g1(x: f64) -> Option<f64> {
    g1_from_log(ln(x))
}

pub fn g2(x: f64) -> Option<f64> {
    g2_from_log(ln(x))
}

pub fn g2_big(n: &BigUint) -> Option<f64> {
    g2_from_log(ln_big(n))
}
