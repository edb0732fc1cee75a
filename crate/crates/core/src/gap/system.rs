//! Residue systems, the sifted set, pairing and the CRT assembly of `m0`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::Zero;
use rand::Rng;

use super::context::SieveContext;
use crate::arith::{crt_combine, is_prime_u64, pow_mod, primes_up_to, Congruence};
use crate::residues::{qr_good, shift_solvable, shift_witness};
use crate::seed::{rng, streams};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Greedy,
    Random,
}

/// Chosen classes with their shift witnesses: prime -> (class, witness).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ResidueSystem {
    pub a: BTreeMap<u64, (u64, u64)>,
    pub b: BTreeMap<u64, (u64, u64)>,
}

impl ResidueSystem {
    pub fn class_of(&self, prime: u64) -> Option<u64> {
        self.a
            .get(&prime)
            .or_else(|| self.b.get(&prime))
            .map(|&(c, _)| c)
    }

    /// Checks `class = 1 - (witness+1)^k` and `witness != -1` for every entry.
    pub fn is_consistent(&self, k: u64) -> bool {
        self.a.iter().chain(self.b.iter()).all(|(&p, &(a, e))| {
            e + 1 < p.max(2) && (a + pow_mod(e + 1, k, p)) % p == 1 % p
        })
    }
}

/// Survivors of `(x, y]` after the zero classes of primes `<= x` outside `S u P`.
fn initial_survivors(ctx: &SieveContext) -> Vec<bool> {
    let len = (ctx.y - ctx.x) as usize;
    let mut alive = vec![true; len];
    for q in ctx.zero_class_primes() {
        strike(&mut alive, ctx.x, ctx.y, q, 0);
    }
    alive
}

/// Clears every `n` in `(x, y]` with `n = class (mod p)`.
fn strike(alive: &mut [bool], x: u64, y: u64, p: u64, class: u64) {
    let lo = x + 1;
    let off = (class + p - lo % p) % p;
    let mut n = lo + off;
    while n <= y {
        alive[(n - lo) as usize] = false;
        n += p;
    }
}

/// The admissible class mod `p` containing the most of `survivors`; ties and
/// the no-hit case go to the smallest class.
pub fn greedy_class(survivors: impl Iterator<Item = u64>, p: u64, k: u64) -> u64 {
    let mut hits: BTreeMap<u64, usize> = BTreeMap::new();
    for n in survivors {
        let r = n % p;
        if shift_solvable(r as i64, p, k) {
            *hits.entry(r).or_default() += 1;
        }
    }
    let mut best = (0u64, 0usize);
    for (&r, &h) in &hits {
        if h > best.1 {
            best = (r, h);
        }
    }
    best.0
}

fn random_class(p: u64, k: u64, seed: u64) -> u64 {
    let mut g = rng(seed, streams::VECTORS, p);
    loop {
        let a = g.gen_range(0..p);
        if shift_solvable(a as i64, p, k) {
            return a;
        }
    }
}

/// Picks one admissible class per prime of `S` and `P`.
///
/// Greedy walks the primes in decreasing order and takes the class hitting the
/// most current survivors of `(x, y]`, ties going to the smallest class.
pub fn choose_vectors(ctx: &SieveContext, strategy: Strategy, seed: u64) -> ResidueSystem {
    let lo = ctx.x + 1;
    let mut survivors: Vec<u64> = initial_survivors(ctx)
        .iter()
        .enumerate()
        .filter(|(_, &a)| a)
        .map(|(i, _)| lo + i as u64)
        .collect();
    let mut primes: Vec<(u64, bool)> = ctx
        .s
        .iter()
        .map(|&s| (s, true))
        .chain(ctx.p.iter().map(|&p| (p, false)))
        .collect();
    primes.sort_unstable_by(|a, b| b.0.cmp(&a.0));
    let mut system = ResidueSystem::default();
    for (p, in_s) in primes {
        let class = match strategy {
            Strategy::Random => random_class(p, ctx.k, seed),
            Strategy::Greedy => greedy_class(survivors.iter().copied(), p, ctx.k),
        };
        let Some(witness) = shift_witness(class as i64, p, ctx.k) else {
            log::warn!("prime {p} has no admissible class; skipped");
            continue;
        };
        survivors.retain(|&n| n % p != class);
        if in_s {
            system.a.insert(p, (class, witness));
        } else {
            system.b.insert(p, (class, witness));
        }
    }
    system
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SurvivorTag {
    /// All prime factors are `<= z`.
    Smooth,
    /// A prime in `(x, y]`.
    QPrime,
    /// Neither; possible only when `y` is large against `x min(S u P)`.
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SiftedSet {
    pub members: Vec<u64>,
    pub tags: Vec<SurvivorTag>,
}

impl SiftedSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn count(&self, tag: SurvivorTag) -> usize {
        self.tags.iter().filter(|&&t| t == tag).count()
    }

    /// `#T log x / x`.
    pub fn density_ratio(&self, x: u64) -> f64 {
        self.len() as f64 * crate::math::ln(x as f64) / x as f64
    }
}

fn is_smooth(mut n: u64, z: u64) -> bool {
    let mut p = 2;
    while p <= z && p * p <= n {
        while n % p == 0 {
            n /= p;
        }
        p += 1;
    }
    n <= z
}

/// Whether `n` in `(x, y]` survives every class of the system and the zero classes.
pub fn survives(ctx: &SieveContext, system: &ResidueSystem, zero_primes: &[u64], n: u64) -> bool {
    system
        .a
        .iter()
        .chain(system.b.iter())
        .all(|(&p, &(c, _))| n % p != c)
        && zero_primes.iter().all(|&q| n % q != 0)
        && n > ctx.x
        && n <= ctx.y
}

pub fn sift(ctx: &SieveContext, system: &ResidueSystem) -> SiftedSet {
    let mut alive = initial_survivors(ctx);
    for (&p, &(c, _)) in system.a.iter().chain(system.b.iter()) {
        strike(&mut alive, ctx.x, ctx.y, p, c);
    }
    let lo = ctx.x + 1;
    let members: Vec<u64> = alive
        .iter()
        .enumerate()
        .filter(|(_, &a)| a)
        .map(|(i, _)| lo + i as u64)
        .collect();
    let tags = members
        .iter()
        .map(|&n| {
            if is_smooth(n, ctx.z) {
                SurvivorTag::Smooth
            } else if is_prime_u64(n) {
                SurvivorTag::QPrime
            } else {
                SurvivorTag::Other
            }
        })
        .collect();
    SiftedSet { members, tags }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PairingResult {
    /// `u -> (p_u, e_u)`.
    pub pairs: BTreeMap<u64, (u64, u64)>,
    /// Members left unpaired.
    pub exceptional: Vec<u64>,
}

/// Greedy assignment of each sifted `u`, ascending, to the smallest unused
/// pairing prime `p` for which `u = 1 - (e+1)^k (mod p)` is solvable.
pub fn pair_exceptions(ctx: &SieveContext, sifted: &SiftedSet) -> PairingResult {
    pair_with(&ctx.ptilde, ctx.k, &sifted.members)
}

pub fn pair_with(ptilde: &[u64], k: u64, members: &[u64]) -> PairingResult {
    let mut used = vec![false; ptilde.len()];
    let mut out = PairingResult::default();
    for &u in members {
        let slot = ptilde
            .iter()
            .enumerate()
            .find(|&(i, &p)| !used[i] && shift_solvable((u % p) as i64, p, k));
        match slot {
            Some((i, &p)) => {
                used[i] = true;
                let e = shift_witness((u % p) as i64, p, k).expect("solvable shift has a witness");
                out.pairs.insert(u, (p, e));
            }
            None => out.exceptional.push(u),
        }
    }
    out
}

/// Members not passing the quadratic-residue filter with threshold `delta`.
pub fn qr_exceptional(ctx: &SieveContext, sifted: &SiftedSet, delta: usize) -> Vec<u64> {
    sifted
        .members
        .iter()
        .copied()
        .filter(|&u| !qr_good(u, &ctx.ptilde, delta))
        .collect()
}

/// Residue assignments for every prime `<= C0 x`, before CRT.
pub fn assignments(
    ctx: &SieveContext,
    system: &ResidueSystem,
    pairing: &PairingResult,
) -> Result<BTreeMap<u64, u64>> {
    let mut map: BTreeMap<u64, u64> = BTreeMap::new();
    let mut put = |p: u64, r: u64| -> Result<()> {
        if map.insert(p, r % p).is_some() {
            return Err(Error::Conflict(p));
        }
        Ok(())
    };
    for (&s, &(_, c)) in &system.a {
        put(s, c)?;
    }
    for (&p, &(_, d)) in &system.b {
        put(p, d)?;
    }
    for q in ctx.zero_class_primes() {
        put(q, 0)?;
    }
    for &(p, e) in pairing.pairs.values() {
        put(p, e)?;
    }
    for p in primes_up_to(ctx.c0x()) {
        map.entry(p).or_insert(0);
    }
    Ok(map)
}

/// `m0` with `1 <= m0 <= modulus`, and the modulus `P(C0 x)`.
pub fn assemble_m0(
    ctx: &SieveContext,
    system: &ResidueSystem,
    pairing: &PairingResult,
) -> Result<(BigUint, BigUint)> {
    let map = assignments(ctx, system, pairing)?;
    let classes: Vec<Congruence> = map.iter().map(|(&p, &r)| Congruence::small(r, p)).collect();
    let comb = crt_combine(&classes)?;
    let m0 = if comb.residue.is_zero() {
        comb.modulus.clone()
    } else {
        comb.residue
    };
    Ok((m0, comb.modulus))
}
