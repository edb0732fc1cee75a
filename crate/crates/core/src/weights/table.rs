//! The `lambda` lattice over `D_g` and the weights `w_n`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use crate::arith::{mul_mod, prime_factors, primes_up_to};
use crate::math::ln;
use crate::weights::cutoff::{f_eval, profile_params};
use crate::weights::forms::{LinearSystem, OmegaEntry};
use crate::weights::series::{singular_series_wb, SingularSeries};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LatticeConfig {
    /// Prime cutoff for `G_{WB}`.
    pub series_cutoff: u64,
    /// Maximum number of tuples in the support of `y`.
    pub budget: u64,
}

impl Default for LatticeConfig {
    fn default() -> Self {
        Self {
            series_cutoff: 100_000,
            budget: 4_000_000,
        }
    }
}

/// One nonzero `lambda_d` with the class `n0 mod prod d_i` on which
/// `d_i | L_i(n)` for every `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaEntry {
    pub d: Vec<u64>,
    pub value: f64,
    pub modulus: u64,
    pub residue: u64,
}

/// The frozen `y` and `lambda` data of a system; cheap to share across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct Lattice {
    pub system: LinearSystem,
    pub series: SingularSeries,
    /// `(W B / phi(W B))^g G_{WB}`.
    pub prefactor: f64,
    pub log_r: f64,
    pub y: BTreeMap<Vec<u64>, f64>,
    pub lambda: Vec<LambdaEntry>,
}

struct Slotted {
    prime: u64,
    slot: usize,
}

struct Walker<'a> {
    primes: &'a [(u64, OmegaEntry)],
    g: usize,
    r: u64,
    log_r: f64,
    u_g: f64,
    budget: u64,
    tuple: Vec<u64>,
    chosen: Vec<Slotted>,
    count: u64,
    visit: &'a mut dyn FnMut(&[u64], &[Slotted]),
}

impl Walker<'_> {
    fn slot_ok(&self, ri: u64) -> bool {
        ri == 1 || ln(ri as f64) / self.log_r / self.u_g < 1.0
    }

    fn walk(&mut self, start: usize, product: u64) -> bool {
        self.count += 1;
        if self.count > self.budget {
            return false;
        }
        (self.visit)(&self.tuple, &self.chosen);
        for idx in start..self.primes.len() {
            let (p, ref entry) = self.primes[idx];
            let Some(next) = product.checked_mul(p).filter(|&m| m < self.r) else {
                break;
            };
            for slot in 0..self.g {
                if !entry.allows(slot) {
                    continue;
                }
                self.tuple[slot] *= p;
                if self.slot_ok(self.tuple[slot]) {
                    self.chosen.push(Slotted { prime: p, slot });
                    let ok = self.walk(idx + 1, next);
                    self.chosen.pop();
                    if !ok {
                        self.tuple[slot] /= p;
                        return false;
                    }
                }
                self.tuple[slot] /= p;
            }
        }
        true
    }
}

fn root_of(system: &LinearSystem, slot: usize, p: u64) -> u64 {
    let f = system.forms[slot];
    let inv = crate::arith::inv_mod(f.a % p, p).expect("slot prime does not divide a_i");
    mul_mod((p - f.b % p) % p, inv, p)
}

impl Lattice {
    pub fn build(system: &LinearSystem, cfg: LatticeConfig) -> Result<Self> {
        if let Some(p) = system.inadmissible_prime() {
            return Err(Error::NotAdmissible(p));
        }
        let g = system.g();
        let series = singular_series_wb(system, cfg.series_cutoff.max(system.r))?;
        let prefactor = libm::pow(system.wb_ratio(), g as f64) * series.value;
        let log_r = ln(system.r as f64);
        let (_, u_g) = profile_params(g);
        let primes: Vec<(u64, OmegaEntry)> = primes_up_to(system.r)
            .into_iter()
            .filter(|&p| !system.divides_wb(p))
            .map(|p| (p, system.omega_entry(p)))
            .collect();
        let omega: BTreeMap<u64, u64> = primes.iter().map(|(p, e)| (*p, e.omega)).collect();

        let mut y = BTreeMap::new();
        let mut acc: BTreeMap<Vec<u64>, f64> = BTreeMap::new();
        let mut visit = |tuple: &[u64], chosen: &[Slotted]| {
            let t: Vec<f64> = tuple.iter().map(|&ri| ln(ri as f64) / log_r).collect();
            let f = f_eval(&t);
            if f == 0.0 {
                return;
            }
            let yr = prefactor * f;
            y.insert(tuple.to_vec(), yr);
            let phi: f64 = chosen
                .iter()
                .map(|c| (c.prime - omega[&c.prime]) as f64)
                .product();
            let share = yr / phi;
            for mask in 0u64..(1 << chosen.len()) {
                let mut d = alloc::vec![1u64; g];
                for (bit, c) in chosen.iter().enumerate() {
                    if mask >> bit & 1 == 1 {
                        d[c.slot] *= c.prime;
                    }
                }
                *acc.entry(d).or_insert(0.0) += share;
            }
        };
        let mut walker = Walker {
            primes: &primes,
            g,
            r: system.r,
            log_r,
            u_g,
            budget: cfg.budget,
            tuple: alloc::vec![1; g],
            chosen: Vec::new(),
            count: 0,
            visit: &mut visit,
        };
        if !walker.walk(0, 1) {
            return Err(Error::Capacity {
                what: "lambda lattice",
                needed: estimate_support(system, primes.len() as u64),
                budget: cfg.budget,
            });
        }

        let lambda = acc
            .into_iter()
            .map(|(d, a)| {
                let mut modulus = 1u64;
                let mut residue = 0u64;
                let mut sign = 1.0;
                for (slot, &di) in d.iter().enumerate() {
                    for p in prime_factors(di) {
                        sign = -sign;
                        let root = root_of(system, slot, p);
                        residue = crt_step(residue, modulus, root, p);
                        modulus *= p;
                    }
                }
                LambdaEntry {
                    value: sign * modulus as f64 * a,
                    d,
                    modulus,
                    residue,
                }
            })
            .collect();
        Ok(Self {
            system: system.clone(),
            series,
            prefactor,
            log_r,
            y,
            lambda,
        })
    }

    /// `w_n` for `n` in `[lo, hi)`. Deterministic regardless of how a range is
    /// split, since every `n` accumulates the lattice in the same order.
    pub fn weights(&self, lo: u64, hi: u64) -> Vec<f64> {
        let len = hi.saturating_sub(lo) as usize;
        let mut s = alloc::vec![0.0f64; len];
        for e in &self.lambda {
            let m = e.modulus;
            let first = lo + (e.residue + m - lo % m) % m;
            let mut n = first;
            while n < hi {
                s[(n - lo) as usize] += e.value;
                n += m;
            }
        }
        for (i, v) in s.iter_mut().enumerate() {
            if self.w_blocked(lo + i as u64) {
                *v = 0.0;
            } else {
                *v *= *v;
            }
        }
        s
    }

    /// Some `L_i(n)` shares a prime with `W`.
    pub fn w_blocked(&self, n: u64) -> bool {
        self.system.w_primes.iter().any(|&p| {
            self.system
                .forms
                .iter()
                .any(|f| (mul_mod(f.a % p, n % p, p) + f.b % p) % p == 0)
        })
    }

    /// Stored `d` violating squarefreeness, coprimality with `W B`, `prod d_i <= R`,
    /// or the least-index slot restriction.
    pub fn support_violations(&self) -> usize {
        let sys = &self.system;
        self.lambda
            .iter()
            .filter(|e| {
                let mut seen = Vec::new();
                let mut bad = e.modulus > sys.r || e.d.len() != sys.g();
                for (slot, &di) in e.d.iter().enumerate() {
                    let mut rest = di;
                    for p in prime_factors(di) {
                        rest /= p;
                        bad |= rest % p == 0 || seen.contains(&p) || sys.divides_wb(p);
                        bad |= !sys.omega_entry(p).allows(slot);
                        seen.push(p);
                    }
                }
                bad
            })
            .count()
    }
}

fn crt_step(r1: u64, m1: u64, r2: u64, m2: u64) -> u64 {
    // n = r1 + m1 t with t = (r2 - r1) / m1 mod m2
    let inv = crate::arith::inv_mod(m1 % m2, m2).expect("coprime moduli");
    let t = mul_mod((r2 + m2 - r1 % m2) % m2, inv, m2);
    r1 + m1 * t
}

/// Rough size of the support: squarefree counts times `g` slot choices per prime.
fn estimate_support(system: &LinearSystem, primes: u64) -> u64 {
    let g = system.g() as f64;
    let r = system.r as f64;
    let per = libm::pow(g, libm::log(r) / libm::log(libm::log(r).max(2.0)));
    (r * per).min(u64::MAX as f64).max(primes as f64) as u64
}

/// `w_n` over a window together with the lattice that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightTable {
    pub lattice: Lattice,
    pub lo: u64,
    pub w: Vec<f64>,
}

impl WeightTable {
    pub fn hi(&self) -> u64 {
        self.lo + self.w.len() as u64
    }

    pub fn w_at(&self, n: u64) -> Option<f64> {
        n.checked_sub(self.lo)
            .and_then(|i| self.w.get(i as usize))
            .copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.w.iter().enumerate().map(|(i, &w)| (self.lo + i as u64, w))
    }

    pub fn sum(&self) -> f64 {
        self.w.iter().sum()
    }
}

/// Maximum window accepted by [`weight_table`].
pub const RANGE_LIMIT: u64 = 200_000_000;

pub fn weight_table(system: &LinearSystem, lo: u64, hi: u64, cfg: LatticeConfig) -> Result<WeightTable> {
    if hi < lo {
        return Err(Error::Domain(format!("empty range {lo}:{hi}")));
    }
    if hi - lo > RANGE_LIMIT {
        return Err(Error::Capacity {
            what: "weight window",
            needed: hi - lo,
            budget: RANGE_LIMIT,
        });
    }
    let lattice = Lattice::build(system, cfg)?;
    let w = lattice.weights(lo, hi);
    Ok(WeightTable { lattice, lo, w })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::gcd;
    use crate::weights::forms::Form;

    #[test]
    fn single_form_small_r() {
        let s = LinearSystem::from_tuple(&[0], 1, 10).unwrap();
        let lat = Lattice::build(&s, LatticeConfig::default()).unwrap();
        // D_1 below 10, coprime to W = 2: 1, 3, 5, 7
        let ds: Vec<u64> = lat.lambda.iter().map(|e| e.d[0]).collect();
        assert_eq!(ds, [1, 3, 5, 7]);
        assert_eq!(lat.support_violations(), 0);
        assert!((lat.prefactor - 2.0).abs() < 1e-12);
        let w = lat.weights(1, 200);
        assert!(w.iter().all(|&v| v >= 0.0));
        for (i, &v) in w.iter().enumerate() {
            let n = 1 + i as u64;
            let direct: f64 = lat.lambda.iter().filter(|e| n % e.d[0] == 0).map(|e| e.value).sum();
            let expect = if n % 2 == 0 { 0.0 } else { direct * direct };
            assert!((v - expect).abs() <= 1e-12 * expect.max(1.0));
        }
    }

    #[test]
    fn split_ranges_agree() {
        let s = LinearSystem::from_tuple(&[0, 2, 6], 1, 40).unwrap();
        let lat = Lattice::build(&s, LatticeConfig::default()).unwrap();
        let whole = lat.weights(1000, 3000);
        let mut parts = lat.weights(1000, 1777);
        parts.extend(lat.weights(1777, 3000));
        assert_eq!(whole, parts);
    }

    #[test]
    fn residues_hit_divisibility() {
        let s = LinearSystem::new(alloc::vec![Form::new(1, 1), Form::new(3, 5)], 1, 60).unwrap();
        let lat = Lattice::build(&s, LatticeConfig::default()).unwrap();
        assert_eq!(lat.support_violations(), 0);
        for e in &lat.lambda {
            let n = e.residue + 5 * e.modulus;
            for (f, &di) in s.forms.iter().zip(&e.d) {
                assert_eq!(f.eval(n) % di as u128, 0);
            }
            assert_eq!(e.d.iter().product::<u64>(), e.modulus);
            assert!(e.modulus < 60);
            assert_eq!(gcd(e.modulus, 2 * 3 * 5 * 7), 1);
        }
    }

    #[test]
    fn capacity_error() {
        let s = LinearSystem::from_tuple(&[0, 2, 6], 1, 10_000).unwrap();
        let cfg = LatticeConfig {
            budget: 100,
            ..LatticeConfig::default()
        };
        match Lattice::build(&s, cfg) {
            Err(Error::Capacity { needed, budget, .. }) => {
                assert_eq!(budget, 100);
                assert!(needed > 100);
            }
            other => panic!("{other:?}"),
        }
        assert!(weight_table(&s, 0, RANGE_LIMIT + 1, LatticeConfig::default()).is_err());
    }

    #[test]
    fn inadmissible_rejected() {
        let s = LinearSystem::from_tuple(&[0, 2, 4], 1, 30).unwrap();
        assert_eq!(Lattice::build(&s, LatticeConfig::default()).unwrap_err(), Error::NotAdmissible(3));
    }
}
