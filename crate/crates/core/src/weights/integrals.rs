//! The functionals `I_g(F) = int F^2` and `J_g(F) = int (int F dt_g)^2`.
//!
//! Both integrands vanish outside `[0, U_g]^g`, so a tensor composite
//! Gauss-Legendre rule over that box covers the support. The error estimate is
//! the difference against the same rule at half the panel count. A seeded
//! Monte-Carlo integrator serves large `g` and cross-checks the quadrature.

use alloc::vec::Vec;

use rand::Rng;

use crate::math::{abs, sqrt};
use crate::seed::{rng, streams};
use crate::weights::cutoff::{f_eval, profile_params};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
}

impl Integral {
    pub fn relative_error(&self) -> f64 {
        if self.value == 0.0 {
            self.error
        } else {
            self.error / abs(self.value)
        }
    }
}

/// Largest `g` integrated by tensor quadrature.
pub const QUADRATURE_MAX_G: usize = 6;

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = Vec::with_capacity(order);
    let mut weights = Vec::with_capacity(order);
    let n = order as f64;
    for i in 0..order {
        let mut x = libm::cos(core::f64::consts::PI * (i as f64 + 0.75) / (n + 0.5));
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=order {
                let kf = k as f64;
                (p0, p1) = (p1, ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf);
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if abs(dx) < 1e-16 {
                break;
            }
        }
        nodes.push(x);
        weights.push(2.0 / ((1.0 - x * x) * dp * dp));
    }
    (nodes, weights)
}

/// Composite rule on `[0, upper]` with `panels` panels of `order` points.
fn composite(upper: f64, panels: usize, order: usize) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(order);
    let h = upper / panels as f64;
    let mut nodes = Vec::with_capacity(panels * order);
    let mut weights = Vec::with_capacity(panels * order);
    for p in 0..panels {
        let a = p as f64 * h;
        for (xi, wi) in x.iter().zip(&w) {
            nodes.push(a + 0.5 * h * (xi + 1.0));
            weights.push(0.5 * h * wi);
        }
    }
    (nodes, weights)
}

/// Panel count and order per axis for a given dimension.
fn resolution(g: usize) -> (usize, usize) {
    match g {
        0 | 1 => (64, 8),
        2 => (32, 8),
        3 => (16, 8),
        4 => (8, 6),
        5 => (6, 4),
        _ => (4, 4),
    }
}

/// Tensor sum of `f` over `[0, upper]^dim`.
fn tensor(dim: usize, upper: f64, panels: usize, order: usize, f: &mut dyn FnMut(&[f64]) -> f64) -> f64 {
    let (nodes, weights) = composite(upper, panels, order);
    let m = nodes.len();
    let mut idx = alloc::vec![0usize; dim];
    let mut t = alloc::vec![0.0; dim];
    let mut total = 0.0;
    if dim == 0 {
        return f(&t);
    }
    loop {
        let mut w = 1.0;
        for (k, &i) in idx.iter().enumerate() {
            t[k] = nodes[i];
            w *= weights[i];
        }
        total += w * f(&t);
        let mut k = 0;
        loop {
            idx[k] += 1;
            if idx[k] < m {
                break;
            }
            idx[k] = 0;
            k += 1;
            if k == dim {
                return total;
            }
        }
    }
}

/// `int f^2` over `[0, upper]^g`.
pub fn i_g_with(g: usize, upper: f64, f: impl Fn(&[f64]) -> f64) -> Integral {
    let (panels, order) = resolution(g);
    let mut sq = |t: &[f64]| {
        let v = f(t);
        v * v
    };
    let fine = tensor(g, upper, panels, order, &mut sq);
    let coarse = tensor(g, upper, panels / 2, order, &mut sq);
    Integral {
        value: fine,
        error: abs(fine - coarse),
    }
}

/// `int (int f dt_g)^2 dt_1..dt_{g-1}` over `[0, upper]^g`.
pub fn j_g_with(g: usize, upper: f64, f: impl Fn(&[f64]) -> f64) -> Integral {
    assert!(g >= 1);
    let (panels, order) = resolution(g);
    let run = |panels: usize| {
        let (nodes, weights) = composite(upper, panels, order);
        let mut buf = alloc::vec![0.0; g];
        let mut outer = |t: &[f64]| {
            buf[..g - 1].copy_from_slice(t);
            let mut inner = 0.0;
            for (x, w) in nodes.iter().zip(&weights) {
                buf[g - 1] = *x;
                inner += w * f(&buf);
            }
            inner * inner
        };
        tensor(g - 1, upper, panels, order, &mut outer)
    };
    let fine = run(panels);
    let coarse = run(panels / 2);
    Integral {
        value: fine,
        error: abs(fine - coarse),
    }
}

pub fn i_g(g: usize) -> Integral {
    let (_, u) = profile_params(g);
    if g > QUADRATURE_MAX_G {
        return i_g_mc(g, 1 << 22, 0);
    }
    i_g_with(g, u, f_eval)
}

pub fn j_g(g: usize) -> Integral {
    let (_, u) = profile_params(g);
    if g > QUADRATURE_MAX_G {
        return j_g_mc(g, 1 << 16, 64, 0);
    }
    j_g_with(g, u, f_eval)
}

/// Plain Monte-Carlo estimate of `I_g` over the box, error = one standard error.
pub fn i_g_mc(g: usize, samples: u64, seed: u64) -> Integral {
    let (_, u) = profile_params(g);
    let vol = libm::pow(u, g as f64);
    let mut r = rng(seed, streams::INTEGRAL, g as u64);
    let mut t = alloc::vec![0.0; g];
    let (mut s1, mut s2) = (0.0, 0.0);
    for _ in 0..samples {
        for ti in t.iter_mut() {
            *ti = r.gen::<f64>() * u;
        }
        let v = f_eval(&t);
        let v = v * v;
        s1 += v;
        s2 += v * v;
    }
    mc_result(s1, s2, samples, vol)
}

/// Monte-Carlo over the first `g - 1` coordinates, with the inner integral by
/// a fixed `inner`-point Gauss-Legendre rule on `[0, U_g]`.
pub fn j_g_mc(g: usize, samples: u64, inner: usize, seed: u64) -> Integral {
    assert!(g >= 1);
    let (_, u) = profile_params(g);
    let vol = libm::pow(u, (g - 1) as f64);
    let (nodes, weights) = composite(u, inner.div_ceil(8).max(1), 8);
    let mut r = rng(seed, streams::INTEGRAL, 1000 + g as u64);
    let mut t = alloc::vec![0.0; g];
    let (mut s1, mut s2) = (0.0, 0.0);
    for _ in 0..samples {
        for ti in t[..g - 1].iter_mut() {
            *ti = r.gen::<f64>() * u;
        }
        let mut acc = 0.0;
        for (x, w) in nodes.iter().zip(&weights) {
            t[g - 1] = *x;
            acc += w * f_eval(&t);
        }
        let v = acc * acc;
        s1 += v;
        s2 += v * v;
    }
    mc_result(s1, s2, samples, vol)
}

fn mc_result(s1: f64, s2: f64, n: u64, vol: f64) -> Integral {
    let nf = n as f64;
    let mean = s1 / nf;
    let var = (s2 / nf - mean * mean).max(0.0);
    Integral {
        value: vol * mean,
        error: vol * sqrt(var / nf),
    }
}
