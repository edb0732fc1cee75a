//! Linear forms, admissibility and root counts.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use crate::arith::{gcd, inv_mod, prime_factors, primes_up_to};
use crate::{Error, Result};

/// `L(n) = a n + b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Form {
    pub a: u64,
    pub b: u64,
}

impl Form {
    pub fn new(a: u64, b: u64) -> Self {
        Self { a, b }
    }

    pub fn eval(&self, n: u64) -> u128 {
        self.a as u128 * n as u128 + self.b as u128
    }

    /// Residue class of `n` killed by `p`, `None` if the form is never
    /// divisible by `p`; `Some(None)` encodes "always divisible".
    fn root(&self, p: u64) -> Option<Option<u64>> {
        let a = self.a % p;
        let b = self.b % p;
        if a == 0 {
            return if b == 0 { Some(None) } else { None };
        }
        let inv = inv_mod(a, p).expect("p prime");
        Some(Some((p - b) % p * inv % p))
    }
}

/// The forms, the excluded modulus `B`, the primes of `W = prod_{p <= 2 g^2, p not | B} p`,
/// and the level `R`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSystem {
    pub forms: Vec<Form>,
    pub b: u64,
    pub w_primes: Vec<u64>,
    pub r: u64,
}

impl LinearSystem {
    pub fn new(forms: Vec<Form>, b: u64, r: u64) -> Result<Self> {
        if forms.is_empty() {
            return Err(Error::Domain("a system needs at least one form".into()));
        }
        if b == 0 {
            return Err(Error::Domain("B must be positive".into()));
        }
        if r < 2 {
            return Err(Error::Domain(format!("R must be at least 2, got {r}")));
        }
        let mut sorted = forms.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != forms.len() {
            return Err(Error::Domain("forms must be distinct".into()));
        }
        if forms.iter().any(|f| f.a == 0) {
            return Err(Error::Domain("leading coefficients must be positive".into()));
        }
        let g = forms.len() as u64;
        let w_primes = primes_up_to(2 * g * g)
            .into_iter()
            .filter(|p| b % p != 0)
            .collect();
        Ok(Self {
            forms,
            b,
            w_primes,
            r,
        })
    }

    /// Forms `n + h_i` of an integer tuple.
    pub fn from_tuple(tuple: &[u64], b: u64, r: u64) -> Result<Self> {
        Self::new(tuple.iter().map(|&h| Form::new(1, h)).collect(), b, r)
    }

    /// Forms `n + h_i p`.
    pub fn shifted_tuple(tuple: &[u64], p: u64, b: u64, r: u64) -> Result<Self> {
        Self::new(tuple.iter().map(|&h| Form::new(1, h * p)).collect(), b, r)
    }

    pub fn g(&self) -> usize {
        self.forms.len()
    }

    /// `W`, if it fits in a word (it does up to `g = 4`).
    pub fn w(&self) -> Option<u64> {
        self.w_primes.iter().try_fold(1u64, |acc, &p| acc.checked_mul(p))
    }

    /// Whether `p` divides `W B`.
    pub fn divides_wb(&self, p: u64) -> bool {
        self.b % p == 0 || self.w_primes.binary_search(&p).is_ok()
    }

    /// `W B / phi(W B)`.
    pub fn wb_ratio(&self) -> f64 {
        let mut primes = self.w_primes.clone();
        primes.extend(prime_factors(self.b));
        primes.sort_unstable();
        primes.dedup();
        primes.iter().map(|&p| p as f64 / (p - 1) as f64).product()
    }

    pub fn product_at(&self, n: u64) -> Vec<u128> {
        self.forms.iter().map(|f| f.eval(n)).collect()
    }

    /// Root data of `prod L_i` modulo `p`.
    pub fn omega_entry(&self, p: u64) -> OmegaEntry {
        let mut roots: BTreeMap<u64, usize> = BTreeMap::new();
        let mut always = false;
        for (i, f) in self.forms.iter().enumerate() {
            match f.root(p) {
                None => {}
                Some(None) => always = true,
                Some(Some(r)) => {
                    let r = if r == 0 { p } else { r };
                    roots.entry(r).or_insert(i + 1);
                }
            }
        }
        if always {
            return OmegaEntry {
                omega: p,
                roots: (1..=p).collect(),
                j: Vec::new(),
            };
        }
        OmegaEntry {
            omega: roots.len() as u64,
            roots: roots.keys().copied().collect(),
            j: roots.values().copied().collect(),
        }
    }

    pub fn omega(&self, p: u64) -> u64 {
        self.omega_entry(p).omega
    }

    /// Primes where `omega(p)` can differ from `g`: those dividing some `a_i`
    /// or some `a_i b_j - a_j b_i`.
    pub fn special_primes(&self) -> Vec<u64> {
        let mut out = Vec::new();
        for (i, f) in self.forms.iter().enumerate() {
            out.extend(prime_factors(f.a));
            for h in &self.forms[i + 1..] {
                let det = (f.a as i128 * h.b as i128 - h.a as i128 * f.b as i128).unsigned_abs();
                if det != 0 {
                    out.extend(prime_factors(det as u64));
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// No prime divides `prod L_i(n)` for every `n`.
    pub fn is_admissible(&self) -> bool {
        self.inadmissible_prime().is_none()
    }

    pub fn inadmissible_prime(&self) -> Option<u64> {
        let g = self.g() as u64;
        let mut check = primes_up_to(g);
        for f in &self.forms {
            check.extend(prime_factors(gcd(f.a, f.b)));
        }
        check.sort_unstable();
        check.dedup();
        check.into_iter().find(|&p| self.omega(p) >= p)
    }
}

/// Roots of `prod L_i` mod `p` listed in `1..=p`, and for each root the least
/// (1-based) index of a form vanishing there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmegaEntry {
    pub omega: u64,
    pub roots: Vec<u64>,
    pub j: Vec<usize>,
}

impl OmegaEntry {
    /// Whether slot `i` (0-based) may carry the prime.
    pub fn allows(&self, i: usize) -> bool {
        self.j.contains(&(i + 1))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmegaTable {
    pub p_max: u64,
    pub entries: BTreeMap<u64, OmegaEntry>,
}

pub fn omega_table(system: &LinearSystem, p_max: u64) -> OmegaTable {
    OmegaTable {
        p_max,
        entries: primes_up_to(p_max)
            .into_iter()
            .map(|p| (p, system.omega_entry(p)))
            .collect(),
    }
}

/// Distinct integers missing some class modulo every prime.
pub fn is_admissible(tuple: &[u64]) -> bool {
    let mut sorted = tuple.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != tuple.len() {
        return false;
    }
    primes_up_to(tuple.len() as u64).into_iter().all(|p| {
        let mut seen = alloc::vec![false; p as usize];
        for &h in tuple {
            seen[(h % p) as usize] = true;
        }
        seen.iter().any(|&s| !s)
    })
}

/// Greedy smallest-next admissible `r`-tuple inside `[0, 2 r^2]`.
pub fn find_admissible_tuple(r: usize) -> Result<Vec<u64>> {
    if r == 0 {
        return Err(Error::Domain("tuple size must be positive".into()));
    }
    let bound = 2 * (r as u64) * (r as u64);
    let mut tuple = alloc::vec![0u64];
    let mut c = 1;
    while tuple.len() < r {
        if c > bound {
            return Err(Error::Domain(format!("no greedy admissible {r}-tuple in [0, {bound}]")));
        }
        tuple.push(c);
        if !is_admissible(&tuple) {
            tuple.pop();
        }
        c += 1;
    }
    Ok(tuple)
}
