//! Random edges `e_i`, their conditioned variants, and point probabilities.

use alloc::boxed::Box;
use alloc::vec::Vec;

use rand::seq::index::sample as index_sample;
use rand::Rng;

use crate::seed::StreamRng;

/// A random finite subset of the vertex ids `0..n`.
pub trait EdgeSampler: Send + Sync {
    /// Almost-sure bound on `#e`.
    fn size_bound(&self) -> usize;

    fn sample(&self, rng: &mut StreamRng) -> Vec<u32>;

    /// The law of `e` conditioned on `e` lying inside `alive`.
    fn condition<'a>(&'a self, alive: &[bool]) -> Box<dyn Conditioned + 'a>;

    fn sample_within(&self, rng: &mut StreamRng, alive: &[bool]) -> Option<Vec<u32>> {
        self.condition(alive).draw(rng)
    }

    /// Exact `P(v in e)` for every `v` with positive probability, if known.
    fn probabilities(&self) -> Option<Vec<(u32, f64)>>;

    /// Exact `P(v1, v2 in e)`, if known.
    fn pair_probability(&self, v1: u32, v2: u32) -> Option<f64>;
}

/// A conditioned edge law, reusable for many draws.
pub trait Conditioned {
    /// `None` when the conditioning event has probability zero (the edge is then empty).
    fn draw(&self, rng: &mut StreamRng) -> Option<Vec<u32>>;
}

struct LivePool {
    live: Vec<u32>,
    r: usize,
}

impl Conditioned for LivePool {
    fn draw(&self, rng: &mut StreamRng) -> Option<Vec<u32>> {
        (self.live.len() >= self.r).then(|| choose(rng, &self.live, self.r))
    }
}

/// A uniform `r`-subset of a fixed pool.
#[derive(Debug, Clone, PartialEq)]
pub struct UniformSubset {
    pub pool: Vec<u32>,
    pub r: usize,
}

impl UniformSubset {
    pub fn new(mut pool: Vec<u32>, r: usize) -> Self {
        pool.sort_unstable();
        pool.dedup();
        let r = r.min(pool.len());
        Self { pool, r }
    }
}

fn choose(rng: &mut StreamRng, pool: &[u32], r: usize) -> Vec<u32> {
    let mut out: Vec<u32> = index_sample(rng, pool.len(), r).into_iter().map(|i| pool[i]).collect();
    out.sort_unstable();
    out
}

impl EdgeSampler for UniformSubset {
    fn size_bound(&self) -> usize {
        self.r
    }

    fn sample(&self, rng: &mut StreamRng) -> Vec<u32> {
        choose(rng, &self.pool, self.r)
    }

    fn condition<'a>(&'a self, alive: &[bool]) -> Box<dyn Conditioned + 'a> {
        let live = self.pool.iter().copied().filter(|&v| alive[v as usize]).collect();
        Box::new(LivePool { live, r: self.r })
    }

    fn probabilities(&self) -> Option<Vec<(u32, f64)>> {
        if self.pool.is_empty() {
            return Some(Vec::new());
        }
        let q = self.r as f64 / self.pool.len() as f64;
        Some(self.pool.iter().map(|&v| (v, q)).collect())
    }

    fn pair_probability(&self, v1: u32, v2: u32) -> Option<f64> {
        let n = self.pool.len() as f64;
        let both = self.pool.binary_search(&v1).is_ok() && self.pool.binary_search(&v2).is_ok();
        if !both || v1 == v2 || self.pool.len() < 2 {
            return Some(0.0);
        }
        let r = self.r as f64;
        Some(r * (r - 1.0) / (n * (n - 1.0)))
    }
}

/// An edge with finite support: `edges[j]` with probability `weights[j] / total`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteEdge {
    pub edges: Vec<Vec<u32>>,
    pub weights: Vec<f64>,
    cumulative: Vec<f64>,
}

impl DiscreteEdge {
    /// `None` when the total weight is not positive.
    pub fn new(edges: Vec<Vec<u32>>, weights: Vec<f64>) -> Option<Self> {
        assert_eq!(edges.len(), weights.len());
        let mut kept_e = Vec::new();
        let mut kept_w = Vec::new();
        for (mut e, w) in edges.into_iter().zip(weights) {
            if w > 0.0 {
                e.sort_unstable();
                e.dedup();
                kept_e.push(e);
                kept_w.push(w);
            }
        }
        let cumulative = prefix_sums(&kept_w);
        if !(cumulative.last().copied().unwrap_or(0.0) > 0.0) {
            return None;
        }
        Some(Self {
            edges: kept_e,
            weights: kept_w,
            cumulative,
        })
    }

    pub fn total(&self) -> f64 {
        *self.cumulative.last().unwrap()
    }
}

fn prefix_sums(w: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    w.iter()
        .map(|x| {
            acc += x;
            acc
        })
        .collect()
}

fn pick(rng: &mut StreamRng, cumulative: &[f64]) -> usize {
    let target = rng.gen::<f64>() * cumulative.last().unwrap();
    cumulative.partition_point(|&c| c <= target).min(cumulative.len() - 1)
}

struct LiveEdges<'a> {
    base: &'a DiscreteEdge,
    index: Vec<usize>,
    cumulative: Vec<f64>,
}

impl Conditioned for LiveEdges<'_> {
    fn draw(&self, rng: &mut StreamRng) -> Option<Vec<u32>> {
        if !(self.cumulative.last().copied().unwrap_or(0.0) > 0.0) {
            return None;
        }
        Some(self.base.edges[self.index[pick(rng, &self.cumulative)]].clone())
    }
}

impl EdgeSampler for DiscreteEdge {
    fn size_bound(&self) -> usize {
        self.edges.iter().map(Vec::len).max().unwrap_or(0)
    }

    fn sample(&self, rng: &mut StreamRng) -> Vec<u32> {
        self.edges[pick(rng, &self.cumulative)].clone()
    }

    fn condition<'a>(&'a self, alive: &[bool]) -> Box<dyn Conditioned + 'a> {
        let index: Vec<usize> = (0..self.edges.len())
            .filter(|&j| self.edges[j].iter().all(|&v| alive[v as usize]))
            .collect();
        let w: Vec<f64> = index.iter().map(|&j| self.weights[j]).collect();
        Box::new(LiveEdges {
            base: self,
            cumulative: prefix_sums(&w),
            index,
        })
    }

    fn probabilities(&self) -> Option<Vec<(u32, f64)>> {
        let total = self.total();
        let mut acc: alloc::collections::BTreeMap<u32, f64> = alloc::collections::BTreeMap::new();
        for (e, w) in self.edges.iter().zip(&self.weights) {
            for &v in e {
                *acc.entry(v).or_insert(0.0) += w / total;
            }
        }
        Some(acc.into_iter().collect())
    }

    fn pair_probability(&self, v1: u32, v2: u32) -> Option<f64> {
        if v1 == v2 {
            return Some(0.0);
        }
        let total = self.total();
        Some(
            self.edges
                .iter()
                .zip(&self.weights)
                .filter(|(e, _)| e.binary_search(&v1).is_ok() && e.binary_search(&v2).is_ok())
                .map(|(_, w)| w / total)
                .sum(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::rng;

    #[test]
    fn uniform_subset() {
        let u = UniformSubset::new((0..10).collect(), 3);
        let mut g = rng(1, 0, 0);
        for _ in 0..100 {
            let e = u.sample(&mut g);
            assert_eq!(e.len(), 3);
            assert!(e.windows(2).all(|w| w[0] < w[1]));
        }
        let mut alive = alloc::vec![false; 10];
        alive[2] = true;
        alive[7] = true;
        assert_eq!(u.sample_within(&mut g, &alive), None);
        alive[9] = true;
        assert_eq!(u.sample_within(&mut g, &alive), Some(alloc::vec![2, 7, 9]));
        let p = u.probabilities().unwrap();
        assert!((p.iter().map(|x| x.1).sum::<f64>() - 3.0).abs() < 1e-12);
        assert!((u.pair_probability(1, 2).unwrap() - 6.0 / 90.0).abs() < 1e-15);
    }

    #[test]
    fn discrete_edge() {
        let d = DiscreteEdge::new(alloc::vec![alloc::vec![0, 1], alloc::vec![1, 2], alloc::vec![3]], alloc::vec![1.0, 3.0, 0.0]).unwrap();
        assert_eq!(d.edges.len(), 2);
        let p = d.probabilities().unwrap();
        assert_eq!(p, [(0, 0.25), (1, 1.0), (2, 0.75)]);
        assert_eq!(d.pair_probability(0, 1), Some(0.25));
        let mut g = rng(2, 0, 0);
        let alive = [true, true, false, true];
        for _ in 0..20 {
            assert_eq!(d.sample_within(&mut g, &alive), Some(alloc::vec![0, 1]));
        }
        assert!(DiscreteEdge::new(alloc::vec![alloc::vec![0]], alloc::vec![0.0]).is_none());
        let single = DiscreteEdge::new(alloc::vec![alloc::vec![4, 5]], alloc::vec![2.0]).unwrap();
        assert_eq!(single.sample(&mut g), [4, 5]);
    }
}
