//! Covering instances: vertices, rounds of edge indices, and the calibrated
//! synthetic family.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::cover::sampler::{EdgeSampler, UniformSubset};
use crate::math::{floor, ln};
use crate::{Error, Result};

/// `mult` independent copies of sampler `sampler`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RoundItem {
    pub sampler: usize,
    pub mult: u64,
}

/// Vertex ids `0..n_vertices`; round `j` holds the index set `I_j`.
pub struct CoverInstance {
    pub n_vertices: usize,
    pub samplers: Vec<Box<dyn EdgeSampler>>,
    pub rounds: Vec<Vec<RoundItem>>,
    /// Construction notes surfaced in audits.
    pub notes: Vec<String>,
}

impl core::fmt::Debug for CoverInstance {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("CoverInstance")
            .field("n_vertices", &self.n_vertices)
            .field("samplers", &self.samplers.len())
            .field("rounds", &self.rounds)
            .finish()
    }
}

impl CoverInstance {
    pub fn new(n_vertices: usize, samplers: Vec<Box<dyn EdgeSampler>>, rounds: Vec<Vec<RoundItem>>) -> Result<Self> {
        if n_vertices > u32::MAX as usize {
            return Err(Error::Domain(format!("{n_vertices} vertices exceed the id space")));
        }
        for round in &rounds {
            for item in round {
                if item.sampler >= samplers.len() {
                    return Err(Error::Domain(format!("round refers to sampler {}", item.sampler)));
                }
            }
        }
        Ok(Self {
            n_vertices,
            samplers,
            rounds,
            notes: Vec::new(),
        })
    }

    pub fn m(&self) -> usize {
        self.rounds.len()
    }

    /// `#I_j`.
    pub fn round_size(&self, j: usize) -> u64 {
        self.rounds[j].iter().map(|i| i.mult).sum()
    }
}

/// `d_j = 5^{-(j-1)} log 5`, so that `P_j = 5^{-j}`.
pub fn calibrated_degrees(m: usize) -> Vec<f64> {
    let l5 = ln(5.0);
    (0..m).map(|j| l5 * libm::pow(5.0, -(j as f64))).collect()
}

/// Uniform `r`-subsets of all of `V`, `round(d_j |V| / r)` of them in round `j`.
pub fn calibrated_instance(n_vertices: usize, r: usize, m: usize) -> Result<CoverInstance> {
    if r == 0 || n_vertices < r {
        return Err(Error::Domain(format!("need 1 <= r <= |V|, got r = {r}, |V| = {n_vertices}")));
    }
    let sampler = UniformSubset::new((0..n_vertices as u32).collect(), r);
    let rounds = calibrated_degrees(m)
        .into_iter()
        .map(|d| {
            let mult = floor(d * n_vertices as f64 / r as f64 + 0.5) as u64;
            alloc::vec![RoundItem { sampler: 0, mult }]
        })
        .collect();
    let mut inst = CoverInstance::new(n_vertices, alloc::vec![Box::new(sampler) as Box<dyn EdgeSampler>], rounds)?;
    let total: f64 = calibrated_degrees(m).iter().sum();
    inst.notes.push(format!(
        "calibrated: total degree {total:.6} against the threshold (5/4) log 5 = {:.6}",
        1.25 * ln(5.0)
    ));
    Ok(inst)
}

/// The same number of uniform `r`-subsets in every round, each round with total degree `d`.
pub fn constant_degree_instance(n_vertices: usize, r: usize, d: f64, m: usize) -> Result<CoverInstance> {
    if r == 0 || n_vertices < r {
        return Err(Error::Domain(format!("need 1 <= r <= |V|, got r = {r}, |V| = {n_vertices}")));
    }
    let sampler = UniformSubset::new((0..n_vertices as u32).collect(), r);
    let mult = floor(d * n_vertices as f64 / r as f64 + 0.5) as u64;
    let rounds = (0..m).map(|_| alloc::vec![RoundItem { sampler: 0, mult }]).collect();
    CoverInstance::new(n_vertices, alloc::vec![Box::new(sampler) as Box<dyn EdgeSampler>], rounds)
}

/// `m = floor(log_3 x / log 5)`, at least 1.
pub fn default_rounds(x: f64) -> usize {
    let m = crate::math::iter_log(x, 3).map_or(0.0, |l3| floor(l3 / ln(5.0)));
    (m as usize).max(1)
}
