//! The sieve-weighted edge law: for each `p` draw `n_p` with density
//! proportional to `w(p, n)` and cover `{n_p + h_i p} ∩ Q ∩ S(a)`.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::concentration::GoodSetParams;
use crate::cover::instance::{CoverInstance, RoundItem};
use crate::cover::profile::{covering_sums, degree_profile};
use crate::cover::sampler::{DiscreteEdge, EdgeSampler};
use crate::gap::{ResidueSystem, SieveContext};
use crate::math::{ln, powf, sqrt};
use crate::weights::{w_final, w_star_all, weight_table, LatticeConfig, LinearSystem};
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct WeightedConfig {
    /// Sieve level `R` of every `w(p, .)`.
    pub r: u64,
    /// Window `[lo, hi)` for `n`; `None` means `[1, y + 1)`.
    pub window: Option<(u64, u64)>,
    /// Restrict to `n` in `G_p` (the final weight) when set.
    pub good_set: Option<GoodSetParams>,
    pub lattice: LatticeConfig,
    /// `P` split into this many contiguous rounds.
    pub rounds: usize,
}

impl Default for WeightedConfig {
    fn default() -> Self {
        Self {
            r: 100,
            window: None,
            good_set: None,
            lattice: LatticeConfig::default(),
            rounds: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightedReport {
    pub primes: Vec<u64>,
    /// Primes with zero total weight, left out of the instance.
    pub excluded: Vec<u64>,
    /// `max_{p, q} P(q in e_p)`.
    pub sparsity_max: f64,
    /// `x^{-1/2-1/10}`.
    pub sparsity_cap: f64,
    /// Distinct vertex pairs sharing some edge.
    pub pairs: usize,
    /// Pairs reachable from two different `p`, or whose difference `p` does not divide.
    pub codegree_conflicts: usize,
}

pub struct WeightedSampler {
    /// Vertex id `i` stands for `vertices[i]`.
    pub vertices: Vec<u64>,
    pub instance: CoverInstance,
    pub report: WeightedReport,
}

impl core::fmt::Debug for WeightedSampler {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("WeightedSampler")
            .field("vertices", &self.vertices.len())
            .field("instance", &self.instance)
            .field("report", &self.report)
            .finish()
    }
}

/// `Q ∩ S(a)`, ascending.
pub fn sifted_targets(ctx: &SieveContext, system: &ResidueSystem) -> Vec<u64> {
    ctx.q
        .iter()
        .copied()
        .filter(|&q| system.a.iter().all(|(&s, &(c, _))| q % s != c))
        .collect()
}

fn split_rounds(n: usize, m: usize) -> Vec<Vec<RoundItem>> {
    let m = m.max(1);
    (0..m)
        .map(|j| {
            (j * n / m..(j + 1) * n / m)
                .map(|s| RoundItem { sampler: s, mult: 1 })
                .collect()
        })
        .collect()
}

pub fn weighted_edge_sampler(
    ctx: &SieveContext,
    system: &ResidueSystem,
    tuple: &[u64],
    cfg: &WeightedConfig,
) -> Result<WeightedSampler> {
    if tuple.is_empty() {
        return Err(Error::Domain(String::from("empty tuple")));
    }
    let vertices = sifted_targets(ctx, system);
    let id = |q: u64| vertices.binary_search(&q).ok().map(|i| i as u32);
    let (lo, hi) = cfg.window.unwrap_or((1, ctx.y + 1));
    let signed: Vec<i64> = tuple.iter().map(|&h| h as i64).collect();
    let mut primes = Vec::new();
    let mut excluded = Vec::new();
    let mut samplers: Vec<Box<dyn EdgeSampler>> = Vec::new();
    let mut owner: BTreeMap<(u32, u32), u64> = BTreeMap::new();
    let mut conflicts = 0;
    let mut sparsity_max: f64 = 0.0;
    for &p in &ctx.p {
        let sys = LinearSystem::shifted_tuple(tuple, p, 1, cfg.r)?;
        let table = weight_table(&sys, lo, hi, cfg.lattice)?;
        let weights = match &cfg.good_set {
            None => w_star_all(&table, p, ctx.k),
            Some(gp) => table
                .iter()
                .map(|(n, _)| w_final(p, n, ctx.k, &table, &signed, gp))
                .collect::<Result<Vec<f64>>>()?,
        };
        let mut edges = Vec::new();
        let mut kept = Vec::new();
        for ((n, _), w) in table.iter().zip(weights) {
            if w <= 0.0 {
                continue;
            }
            let mut e: Vec<u32> = tuple.iter().filter_map(|&h| id(n + h * p)).collect();
            e.sort_unstable();
            e.dedup();
            edges.push(e);
            kept.push(w);
        }
        let Some(sampler) = DiscreteEdge::new(edges, kept) else {
            excluded.push(p);
            continue;
        };
        for e in &sampler.edges {
            for (i, &v1) in e.iter().enumerate() {
                for &v2 in &e[i + 1..] {
                    let diff = vertices[v2 as usize] - vertices[v1 as usize];
                    let prev = *owner.entry((v1, v2)).or_insert(p);
                    if prev != p || diff % p != 0 {
                        conflicts += 1;
                    }
                }
            }
        }
        if let Some(probs) = sampler.probabilities() {
            sparsity_max = probs.iter().map(|x| x.1).fold(sparsity_max, f64::max);
        }
        primes.push(p);
        samplers.push(Box::new(sampler));
    }
    let rounds = split_rounds(samplers.len(), cfg.rounds);
    let mut instance = CoverInstance::new(vertices.len(), samplers, rounds)?;
    let sparsity_cap = powf(ctx.x as f64, -0.6);
    if sparsity_max > sparsity_cap {
        instance.notes.push(format!(
            "max P(q in e_p) = {sparsity_max:.3e} above x^(-3/5) = {sparsity_cap:.3e}"
        ));
    }
    if !excluded.is_empty() {
        instance.notes.push(format!("{} primes with zero weight excluded", excluded.len()));
    }
    let report = WeightedReport {
        primes,
        excluded,
        sparsity_max,
        sparsity_cap,
        pairs: owner.len(),
        codegree_conflicts: conflicts,
    };
    Ok(WeightedSampler {
        vertices,
        instance,
        report,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoveringReport {
    /// `sum_p P(q in e_p)` per vertex.
    pub sums: Vec<f64>,
    pub mean: f64,
    pub sd: f64,
    pub min: f64,
    pub max: f64,
    /// Relative band `|s / mean - 1| <= band`.
    pub band: f64,
    pub fraction_outside: f64,
    /// `(x / (log x log log x)) / |V|` when `x` is given.
    pub allowed_fraction: Option<f64>,
    /// Equal-width bins over `[min, max]`.
    pub histogram: Vec<u64>,
}

pub fn uniform_covering_report(inst: &CoverInstance, band: f64, bins: usize, x: Option<u64>) -> CoveringReport {
    let prof = degree_profile(inst, 0, 0);
    let sums = covering_sums(&prof, inst.n_vertices);
    let n = sums.len() as f64;
    let (mean, sd, min, max) = if sums.is_empty() {
        (0.0, 0.0, 0.0, 0.0)
    } else {
        let mean = sums.iter().sum::<f64>() / n;
        let var = sums.iter().map(|s| (s - mean) * (s - mean)).sum::<f64>() / n;
        let min = sums.iter().copied().fold(f64::INFINITY, f64::min);
        let max = sums.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (mean, sqrt(var), min, max)
    };
    let outside = sums
        .iter()
        .filter(|&&s| if mean > 0.0 { (s / mean - 1.0).abs() > band } else { s != 0.0 })
        .count();
    let bins = bins.max(1);
    let mut histogram = alloc::vec![0u64; bins];
    let width = max - min;
    for &s in &sums {
        let b = if width > 0.0 { ((s - min) / width * bins as f64) as usize } else { 0 };
        histogram[b.min(bins - 1)] += 1;
    }
    let allowed_fraction = x.filter(|&x| x > 15 && !sums.is_empty()).map(|x| {
        let xf = x as f64;
        xf / (ln(xf) * ln(ln(xf))) / n
    });
    CoveringReport {
        mean,
        sd,
        min,
        max,
        band,
        fraction_outside: if sums.is_empty() { 0.0 } else { outside as f64 / n },
        allowed_fraction,
        histogram,
        sums,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::instance::constant_degree_instance;
    use crate::gap::{build_context, Overrides};

    fn ctx() -> SieveContext {
        build_context(2000, 2, 1.0, 2.0, Overrides::all(6000, 40, 7)).unwrap()
    }

    #[test]
    fn weighted_instance_structure() {
        let ctx = ctx();
        let system = ResidueSystem {
            a: ctx.s.iter().map(|&s| (s, (1, 0))).collect(),
            b: BTreeMap::new(),
        };
        let cfg = WeightedConfig {
            r: 30,
            rounds: 2,
            ..WeightedConfig::default()
        };
        let ws = weighted_edge_sampler(&ctx, &system, &[0, 2], &cfg).unwrap();
        assert_eq!(ws.report.primes.len() + ws.report.excluded.len(), ctx.p.len());
        assert_eq!(ws.report.codegree_conflicts, 0);
        assert!(ws.report.pairs > 0);
        assert_eq!(ws.instance.m(), 2);
        for s in &ws.instance.samplers {
            let total: f64 = s.probabilities().unwrap().iter().map(|x| x.1).sum();
            assert!(total <= 2.0 + 1e-9);
            assert!(s.size_bound() <= 2);
        }
        assert!(ws.vertices.iter().all(|&q| ctx.s.iter().all(|&s| q % s != 1)));
        let rep = uniform_covering_report(&ws.instance, 0.5, 10, Some(ctx.x));
        assert_eq!(rep.histogram.iter().sum::<u64>() as usize, ws.vertices.len());
    }

    #[test]
    fn single_support_is_deterministic() {
        let e = DiscreteEdge::new(alloc::vec![alloc::vec![3, 5]], alloc::vec![0.25]).unwrap();
        let mut g = crate::seed::rng(0, 0, 0);
        for _ in 0..10 {
            assert_eq!(e.sample(&mut g), [3, 5]);
        }
        assert_eq!(e.probabilities().unwrap(), [(3, 1.0), (5, 1.0)]);
    }

    #[test]
    fn covering_report_trivial() {
        let empty = CoverInstance::new(7, Vec::new(), alloc::vec![Vec::new()]).unwrap();
        let rep = uniform_covering_report(&empty, 0.1, 4, None);
        assert!(rep.sums.iter().all(|&s| s == 0.0));
        assert_eq!(rep.fraction_outside, 0.0);
        let sym = constant_degree_instance(100, 2, 1.0, 2).unwrap();
        let rep = uniform_covering_report(&sym, 1e-12, 4, None);
        assert!(rep.sums.iter().all(|&s| s == rep.sums[0]));
        assert_eq!(rep.fraction_outside, 0.0);
    }
}
