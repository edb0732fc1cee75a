//! Normalized degrees `d_{I_j}(v)`, the recursion `P_j(v)`, and the
//! hypothesis audits of the covering theorem.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::Rng;

use crate::cover::instance::CoverInstance;
use crate::math::{exp, sqrt};
use crate::seed::{rng, streams};

/// `d[j][v]` for rounds `j = 1..m` (stored 0-based) and `p[j][v]` for `j = 0..m`.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeProfile {
    pub d: Vec<Vec<f64>>,
    pub p: Vec<Vec<f64>>,
    /// Whether any sampler needed Monte-Carlo probing.
    pub probed: bool,
}

impl DegreeProfile {
    /// `P_0 = 1`, `P_{j+1} = P_j exp(-d_{j+1} / P_j)`.
    pub fn from_degrees(d: Vec<Vec<f64>>, n_vertices: usize) -> Self {
        let mut p = alloc::vec![alloc::vec![1.0; n_vertices]];
        for dj in &d {
            let prev = p.last().unwrap();
            let next = prev.iter().zip(dj).map(|(&pj, &dv)| pj * exp(-dv / pj)).collect();
            p.push(next);
        }
        Self { d, p, probed: false }
    }

    /// `prod_{v in e} P_j(v)`.
    pub fn p_of_set(&self, j: usize, e: &[u32]) -> f64 {
        e.iter().map(|&v| self.p[j][v as usize]).product()
    }

    /// Mean of `P_j(v)` over `v`.
    pub fn mean_p(&self, j: usize) -> f64 {
        let row = &self.p[j];
        if row.is_empty() {
            return 0.0;
        }
        row.iter().sum::<f64>() / row.len() as f64
    }
}

/// Per-sampler `P(v in e)`, analytic when available, else from `probe_samples` draws.
fn point_probabilities(inst: &CoverInstance, probe_samples: u64, seed: u64) -> (Vec<Vec<(u32, f64)>>, bool) {
    let mut probed = false;
    let probs = inst
        .samplers
        .iter()
        .enumerate()
        .map(|(idx, s)| {
            s.probabilities().unwrap_or_else(|| {
                probed = true;
                let mut counts = alloc::collections::BTreeMap::new();
                let mut g = rng(seed, streams::PROBE, idx as u64);
                for _ in 0..probe_samples {
                    for v in s.sample(&mut g) {
                        *counts.entry(v).or_insert(0u64) += 1;
                    }
                }
                counts
                    .into_iter()
                    .map(|(v, c)| (v, c as f64 / probe_samples.max(1) as f64))
                    .collect()
            })
        })
        .collect();
    (probs, probed)
}

pub fn degree_profile(inst: &CoverInstance, probe_samples: u64, seed: u64) -> DegreeProfile {
    let (probs, probed) = point_probabilities(inst, probe_samples, seed);
    let d = inst
        .rounds
        .iter()
        .map(|round| {
            let mut dj = alloc::vec![0.0; inst.n_vertices];
            for item in round {
                for &(v, q) in &probs[item.sampler] {
                    dj[v as usize] += item.mult as f64 * q;
                }
            }
            dj
        })
        .collect();
    let mut prof = DegreeProfile::from_degrees(d, inst.n_vertices);
    prof.probed = probed;
    prof
}

/// Sum over all rounds of `P(v in e_i)`: the covering-sum statistic per vertex.
pub fn covering_sums(prof: &DegreeProfile, n_vertices: usize) -> Vec<f64> {
    let mut out = alloc::vec![0.0; n_vertices];
    for dj in &prof.d {
        for (o, &x) in out.iter_mut().zip(dj) {
            *o += x;
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditConfig {
    /// Floor for `P_j(v)` (the theorem's `kappa`).
    pub kappa: f64,
    /// Bound `D` in `d_{I_j}(v) <= D P_{j-1}(v)`.
    pub degree_bound: f64,
    /// Target `delta` for sparsity and codegrees.
    pub delta: f64,
    /// Random vertex pairs examined by the codegree audit.
    pub codegree_pairs: u64,
}

impl Default for AuditConfig {
    fn default() -> Self {
        Self {
            kappa: 1e-6,
            degree_bound: 10.0,
            delta: 0.1,
            codegree_pairs: 2000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoverAudit {
    pub max_edge_size: usize,
    /// Per round, `max_{i, v} P(v in e_i) sqrt(#I_j)`: the smallest admissible `delta`.
    pub sparsity_delta: Vec<f64>,
    /// Per round, max over sampled pairs of `sum_i P(v1, v2 in e_i)`.
    pub max_codegree: Vec<f64>,
    /// `max_{j, v} d_{I_j}(v) / P_{j-1}(v)`.
    pub degree_ratio: f64,
    /// `min_{j, v} P_j(v)`.
    pub min_p: f64,
    pub warnings: Vec<String>,
}

pub fn audit(inst: &CoverInstance, prof: &DegreeProfile, cfg: &AuditConfig, seed: u64) -> CoverAudit {
    let (probs, _) = point_probabilities(inst, 1, seed);
    let mut warnings: Vec<String> = inst.notes.clone();
    let max_edge_size = inst.samplers.iter().map(|s| s.size_bound()).max().unwrap_or(0);
    let mut sparsity_delta = Vec::new();
    let mut max_codegree = Vec::new();
    let mut g = rng(seed, streams::PROBE, u64::MAX);
    for (j, round) in inst.rounds.iter().enumerate() {
        let size = inst.round_size(j) as f64;
        let maxp = round
            .iter()
            .flat_map(|it| probs[it.sampler].iter().map(|x| x.1))
            .fold(0.0, f64::max);
        let implied = maxp * sqrt(size);
        if implied > cfg.delta {
            warnings.push(format!("round {}: sparsity needs delta >= {implied:.3e}", j + 1));
        }
        sparsity_delta.push(implied);
        let mut worst: f64 = 0.0;
        if inst.n_vertices >= 2 {
            for _ in 0..cfg.codegree_pairs {
                let v1 = g.gen_range(0..inst.n_vertices as u32);
                let mut v2 = g.gen_range(0..inst.n_vertices as u32 - 1);
                if v2 >= v1 {
                    v2 += 1;
                }
                let s: f64 = round
                    .iter()
                    .map(|it| it.mult as f64 * inst.samplers[it.sampler].pair_probability(v1, v2).unwrap_or(0.0))
                    .sum();
                worst = worst.max(s);
            }
        }
        if worst > cfg.delta {
            warnings.push(format!("round {}: codegree {worst:.3e} above delta", j + 1));
        }
        max_codegree.push(worst);
    }
    let mut degree_ratio: f64 = 0.0;
    for (j, dj) in prof.d.iter().enumerate() {
        for (v, &x) in dj.iter().enumerate() {
            degree_ratio = degree_ratio.max(x / prof.p[j][v]);
        }
    }
    if degree_ratio > cfg.degree_bound {
        warnings.push(format!("degree ratio {degree_ratio:.3} above D = {}", cfg.degree_bound));
    }
    let min_p = prof.p.iter().flatten().copied().fold(1.0, f64::min);
    if min_p < cfg.kappa {
        warnings.push(format!("min P_j(v) = {min_p:.3e} below kappa = {:.1e}", cfg.kappa));
    }
    CoverAudit {
        max_edge_size,
        sparsity_delta,
        max_codegree,
        degree_ratio,
        min_p,
        warnings,
    }
}
