//! Scale parameters and the prime sets they induce.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::arith::{prime_range, primes_up_to};
use crate::math::{ceil, floor, iter_log, ln, powf};
use crate::residues::ptilde_member;
use crate::{Error, Result};

/// Explicit values replacing the asymptotic window formulas.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Overrides {
    pub y: Option<u64>,
    pub z: Option<u64>,
    pub s_floor: Option<u64>,
}

impl Overrides {
    pub fn all(y: u64, z: u64, s_floor: u64) -> Self {
        Self {
            y: Some(y),
            z: Some(z),
            s_floor: Some(s_floor),
        }
    }

    fn complete(&self) -> bool {
        self.y.is_some() && self.z.is_some() && self.s_floor.is_some()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SieveContext {
    pub x: u64,
    pub k: u64,
    pub c: f64,
    pub c0: f64,
    pub y: u64,
    pub z: u64,
    pub s_floor: u64,
    /// Sieving primes in `(s_floor, z]`.
    pub s: Vec<u64>,
    /// Primes in `(x/2, x]`.
    pub p: Vec<u64>,
    /// Primes in `(x, y]`.
    pub q: Vec<u64>,
    /// Pairing primes in `(x, C0 x]` with the congruence condition on `k`.
    pub ptilde: Vec<u64>,
    pub overrides: Overrides,
}

impl SieveContext {
    /// `floor(C0 x)`, the largest prime entering the CRT modulus.
    pub fn c0x(&self) -> u64 {
        floor(self.c0 * self.x as f64) as u64
    }

    /// Primes `<= x` outside `S` and `P`; these get the zero class.
    pub fn zero_class_primes(&self) -> Vec<u64> {
        primes_up_to(self.x)
            .into_iter()
            .filter(|q| self.s.binary_search(q).is_err() && self.p.binary_search(q).is_err())
            .collect()
    }
}

/// `ceil(c x log x log_3 x / log_2 x)`, or `None` when `log_3 x <= 0`.
pub fn default_y(x: f64, c: f64) -> Option<f64> {
    let l3 = iter_log(x, 3)?;
    if !(l3 > 0.0) {
        return None;
    }
    Some(ceil(c * x * ln(x) * l3 / iter_log(x, 2)?))
}

/// `ceil(x^{log_3 x / (4 log_2 x)})`, or `None` when `log_3 x <= 0`.
pub fn default_z(x: f64) -> Option<f64> {
    let l3 = iter_log(x, 3)?;
    if !(l3 > 0.0) {
        return None;
    }
    Some(ceil(powf(x, l3 / (4.0 * iter_log(x, 2)?))))
}

/// `max(7, floor((log x)^20))`.
pub fn default_s_floor(x: f64) -> f64 {
    let v = floor(powf(ln(x), 20.0));
    if v > 7.0 {
        v
    } else {
        7.0
    }
}

pub fn build_context(x: u64, k: u64, c: f64, c0: f64, overrides: Overrides) -> Result<SieveContext> {
    if k < 2 {
        return Err(Error::Domain(format!("k must be at least 2, got {k}")));
    }
    if !(c > 0.0) {
        return Err(Error::Domain(format!("c must be positive, got {c}")));
    }
    if !(c0 > 1.0) {
        return Err(Error::Domain(format!("C0 must exceed 1, got {c0}")));
    }
    let min_x = if overrides.complete() { 2 } else { 100 };
    if x < min_x {
        return Err(Error::Domain(format!(
            "x must be at least {min_x} (all of y, z, s_floor overridden allows x >= 2), got {x}"
        )));
    }
    let xf = x as f64;
    let mut problems: Vec<String> = Vec::new();

    let y = match overrides.y {
        Some(y) => y,
        None => match default_y(xf, c) {
            Some(v) if v >= xf + 2.0 && v < u64::MAX as f64 => v as u64,
            Some(v) => {
                problems.push(format!("y = c x log x log_3 x / log_2 x = {v} is below x + 2"));
                0
            }
            None => {
                problems.push(String::from("y: log_3 x <= 0"));
                0
            }
        },
    };
    let z = match overrides.z {
        Some(z) => z,
        None => match default_z(xf) {
            Some(v) if v >= 2.0 => v as u64,
            Some(v) => {
                problems.push(format!("z = x^(log_3 x / (4 log_2 x)) = {v} is below 2"));
                0
            }
            None => {
                problems.push(String::from("z: log_3 x <= 0"));
                0
            }
        },
    };
    let s_floor = match overrides.s_floor {
        Some(s) => s,
        None => {
            let v = default_s_floor(xf);
            if z > 0 && v >= z as f64 {
                problems.push(format!("s_floor = max(7, (log x)^20) = {v} leaves (s_floor, z] empty"));
            }
            if v >= u64::MAX as f64 {
                u64::MAX
            } else {
                v as u64
            }
        }
    };
    if !problems.is_empty() {
        return Err(Error::Degenerate(problems.join("; ")));
    }

    if y < x + 2 {
        return Err(Error::Domain(format!("y = {y} must be at least x + 2 = {}", x + 2)));
    }
    if z < 2 {
        return Err(Error::Domain(format!("z = {z} must be at least 2")));
    }
    if 2 * z > x {
        return Err(Error::Domain(format!("z = {z} overlaps (x/2, x]; need z <= x/2")));
    }
    let c0x = floor(c0 * xf) as u64;
    let s = if s_floor < z {
        prime_range(s_floor, z)?
    } else {
        Vec::new()
    };
    let p = prime_range(x / 2, x)?;
    let q = prime_range(x, y)?;
    let ptilde = prime_range(x, c0x)?
        .into_iter()
        .filter(|&p| ptilde_member(p, x, c0, k))
        .collect();
    Ok(SieveContext {
        x,
        k,
        c,
        c0,
        y,
        z,
        s_floor,
        s,
        p,
        q,
        ptilde,
        overrides,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn million_example() {
        let ctx = build_context(1_000_000, 2, 1.0, 2.0, Overrides::all(1_060_000, 300, 7)).unwrap();
        assert_eq!(ctx.s, prime_range(7, 300).unwrap());
        assert_eq!(ctx.p, prime_range(500_000, 1_000_000).unwrap());
        assert_eq!(ctx.q, prime_range(1_000_000, 1_060_000).unwrap());
        assert!(ctx.ptilde.iter().all(|&p| p % 4 == 3 && p > 1_000_000 && p <= 2_000_000));
        assert_eq!(*ctx.s.first().unwrap(), 11);
        assert_eq!(*ctx.s.last().unwrap(), 293);
    }

    #[test]
    fn degenerate_defaults_refused() {
        let err = build_context(1_000_000, 2, 1.0, 2.0, Overrides::default()).unwrap_err();
        match err {
            Error::Degenerate(msg) => assert!(msg.contains("s_floor")),
            e => panic!("unexpected {e:?}"),
        }
        // log_3 x <= 0 needs x <= e^e; possible only with relaxed x
        assert!(default_y(10.0, 1.0).is_none());
        assert!(default_z(15.0).is_none());
        let err = build_context(
            10,
            2,
            1.0,
            2.0,
            Overrides {
                y: Some(40),
                ..Default::default()
            },
        )
        .unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
    }

    #[test]
    fn formula_evaluation_only() {
        // y / x = c log x log_3 x / log_2 x
        let x = 1e40;
        let y = default_y(x, 0.5).unwrap();
        let want = 0.5 * ln(x) * iter_log(x, 3).unwrap() / iter_log(x, 2).unwrap();
        assert!((y / x / want - 1.0).abs() < 1e-12);
    }

    #[test]
    fn small_overridden_context() {
        let ctx = build_context(20, 2, 1.0, 2.4, Overrides::all(100, 7, 2)).unwrap();
        assert_eq!(ctx.s, [3, 5, 7]);
        assert_eq!(ctx.p, [11, 13, 17, 19]);
        assert_eq!(ctx.ptilde, [23, 31, 43, 47]);
        assert_eq!(ctx.zero_class_primes(), [2]);
        assert_eq!(ctx.c0x(), 48);
    }

    #[test]
    fn bad_parameters() {
        let o = Overrides::all(100, 7, 2);
        assert!(build_context(20, 1, 1.0, 2.0, o).is_err());
        assert!(build_context(20, 2, 0.0, 2.0, o).is_err());
        assert!(build_context(20, 2, 1.0, 1.0, o).is_err());
        assert!(build_context(20, 2, 1.0, 2.0, Overrides::all(21, 7, 2)).is_err());
        assert!(build_context(20, 2, 1.0, 2.0, Overrides::all(40, 11, 2)).is_err());
    }
}
