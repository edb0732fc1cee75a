//! Monte-Carlo covering: draw the edges round by round and count survivors.

use alloc::vec::Vec;

use crate::cover::instance::CoverInstance;
use crate::math::sqrt;
use crate::seed::{rng, streams};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoverMode {
    /// Each edge is drawn conditioned on lying inside the survivors at the
    /// start of its round (empty when impossible).
    SemiRandom,
    /// Edges drawn from their own law, ignoring earlier rounds.
    Independent,
}

/// Survivor counts after rounds `0..=m` (entry 0 is `|V|`).
pub fn simulate_replicate(inst: &CoverInstance, m: usize, mode: CoverMode, seed: u64, replicate: u64) -> Vec<u64> {
    let m = m.min(inst.m());
    let mut alive = alloc::vec![true; inst.n_vertices];
    let mut counts = alloc::vec![inst.n_vertices as u64];
    let mut g = rng(seed, streams::COVER, replicate);
    for round in &inst.rounds[..m] {
        let start = alive.clone();
        for item in round {
            let sampler = &inst.samplers[item.sampler];
            let conditioned = (mode == CoverMode::SemiRandom).then(|| sampler.condition(&start));
            for _ in 0..item.mult {
                let edge = match &conditioned {
                    Some(c) => c.draw(&mut g),
                    None => Some(sampler.sample(&mut g)),
                };
                for v in edge.into_iter().flatten() {
                    alive[v as usize] = false;
                }
            }
        }
        counts.push(alive.iter().filter(|&&a| a).count() as u64);
    }
    counts
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoverStats {
    pub n_vertices: usize,
    pub m: usize,
    /// `counts[rep][j]` survivors after round `j`.
    pub counts: Vec<Vec<u64>>,
    /// Per round: mean and sample standard deviation of the residual fraction.
    pub mean: Vec<f64>,
    pub sd: Vec<f64>,
}

impl CoverStats {
    pub fn from_counts(n_vertices: usize, m: usize, counts: Vec<Vec<u64>>) -> Self {
        let reps = counts.len() as f64;
        let mut mean = Vec::new();
        let mut sd = Vec::new();
        for j in 0..=m {
            let fr: Vec<f64> = counts
                .iter()
                .map(|c| c.get(j).copied().unwrap_or(0) as f64 / n_vertices.max(1) as f64)
                .collect();
            let mu = fr.iter().sum::<f64>() / reps;
            let var = if counts.len() > 1 {
                fr.iter().map(|f| (f - mu) * (f - mu)).sum::<f64>() / (reps - 1.0)
            } else {
                0.0
            };
            mean.push(mu);
            sd.push(sqrt(var));
        }
        Self {
            n_vertices,
            m,
            counts,
            mean,
            sd,
        }
    }

    /// Standard error of the mean residual fraction after round `j`.
    pub fn stderr(&self, j: usize) -> f64 {
        self.sd[j] / sqrt(self.counts.len().max(1) as f64)
    }
}

/// Replicates `0..replicates`, sequentially. Each replicate owns its stream,
/// so callers may equally map [`simulate_replicate`] in parallel and collect
/// in index order.
pub fn simulate_cover(inst: &CoverInstance, m: usize, mode: CoverMode, seed: u64, replicates: u64) -> CoverStats {
    let m = m.min(inst.m());
    let counts = (0..replicates)
        .map(|r| simulate_replicate(inst, m, mode, seed, r))
        .collect();
    CoverStats::from_counts(inst.n_vertices, m, counts)
}
