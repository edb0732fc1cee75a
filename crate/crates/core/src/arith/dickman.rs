//! Dickman's function and exact smooth-number counts.

use alloc::vec;
use alloc::vec::Vec;

use super::sieve::{isqrt, prime_range, primes_up_to};
use crate::math::ln;
use crate::{Error, Result};

/// Largest `y` accepted by [`smooth_count_exact`].
pub const SMOOTH_COUNT_LIMIT: u64 = 100_000_000;

const GL5_X: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683,
    0.0,
    0.538_469_310_105_683,
    0.906_179_845_938_664,
];
const GL5_W: [f64; 5] = [
    0.236_926_885_056_189,
    0.478_628_670_499_366,
    0.568_888_888_888_889,
    0.478_628_670_499_366,
    0.236_926_885_056_189,
];

const STENCIL: usize = 8;
const BASE_CELLS: usize = 32;
const U_CAP: f64 = 400.0;

/// Grid values of rho at `i / cells` for `i = 0..=units * cells`.
struct Grid {
    cells: usize,
    values: Vec<f64>,
}

impl Grid {
    fn build(units: usize, cells: usize) -> Self {
        let total = units * cells;
        let mut g = Grid {
            cells,
            values: vec![1.0; total + 1],
        };
        for i in cells..total {
            let a = i as f64 / cells as f64;
            let b = (i + 1) as f64 / cells as f64;
            g.values[i + 1] = g.values[i] - g.integral(a, b);
        }
        g
    }

    /// rho at `t`, interpolated from grid values inside the unit interval holding `t`.
    fn interp(&self, t: f64) -> f64 {
        if t <= 1.0 {
            return 1.0;
        }
        let n = self.cells;
        let unit = libm::floor(t) as usize;
        let unit = if (t - unit as f64) == 0.0 { unit - 1 } else { unit };
        let lo_idx = unit * n;
        let pos = (t - unit as f64) * n as f64;
        let centre = libm::floor(pos) as isize - (STENCIL as isize / 2 - 1);
        let start = centre.clamp(0, (n + 1 - STENCIL) as isize) as usize;
        let mut acc = 0.0;
        for j in 0..STENCIL {
            let xj = (start + j) as f64;
            let mut lj = 1.0;
            for m in 0..STENCIL {
                if m != j {
                    let xm = (start + m) as f64;
                    lj *= (pos - xm) / (xj - xm);
                }
            }
            acc += lj * self.values[lo_idx + start + j];
        }
        acc
    }

    /// Integral of rho(t - 1) / t over `[a, b]`, where `[a, b]` lies in one cell.
    fn integral(&self, a: f64, b: f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut s = 0.0;
        for (x, w) in GL5_X.iter().zip(GL5_W.iter()) {
            let t = mid + half * x;
            s += w * self.interp(t - 1.0) / t;
        }
        s * half
    }

    fn eval(&self, u: f64) -> f64 {
        if u <= 1.0 {
            return 1.0;
        }
        let n = self.cells as f64;
        let i = libm::floor(u * n) as usize;
        let a = i as f64 / n;
        if u == a {
            return self.values[i];
        }
        self.values[i] - self.integral(a, u)
    }
}

/// Dickman's rho, the density of `x^{1/u}`-smooth integers.
///
/// Integrates `u rho'(u) = -rho(u - 1)` cell by cell with five-point
/// Gauss-Legendre panels, then Richardson-extrapolates two grid sizes.
/// Absolute error is far below 1e-8. Returns 0 for `u > 400`, where the true
/// value underflows anyway.
pub fn dickman_rho(u: f64) -> f64 {
    if u.is_nan() || u <= 1.0 {
        return 1.0;
    }
    if u > U_CAP {
        return 0.0;
    }
    let units = libm::ceil(u) as usize;
    let coarse = Grid::build(units, BASE_CELLS).eval(u);
    let fine = Grid::build(units, 2 * BASE_CELLS).eval(u);
    // interpolation error dominates, order STENCIL
    let r = (1u64 << STENCIL) as f64;
    let v = fine + (fine - coarse) / (r - 1.0);
    if v < 0.0 {
        0.0
    } else {
        v
    }
}

/// Exact number of `z`-smooth integers in `[1, y]`.
pub fn smooth_count_exact(y: u64, z: u64) -> Result<u64> {
    if y > SMOOTH_COUNT_LIMIT {
        return Err(Error::Capacity {
            what: "smooth_count_exact y",
            needed: y,
            budget: SMOOTH_COUNT_LIMIT,
        });
    }
    if y < 2 || z < 2 {
        return Err(Error::Domain("smooth_count_exact needs y, z >= 2".into()));
    }
    if z >= y {
        return Ok(y);
    }
    if z >= isqrt(y) {
        // each n <= y has at most one prime factor above sqrt(y)
        let big = prime_range(z, y)?;
        let rough: u64 = big.iter().map(|&p| y / p).sum();
        return Ok(y - rough);
    }
    let primes = primes_up_to(z);
    const BLOCK: u64 = 1 << 16;
    let mut rem = vec![0u64; BLOCK as usize];
    let mut count = 0u64;
    let mut lo = 1u64;
    while lo <= y {
        let hi = (lo + BLOCK - 1).min(y);
        let len = (hi - lo + 1) as usize;
        for (i, r) in rem[..len].iter_mut().enumerate() {
            *r = lo + i as u64;
        }
        for &p in &primes {
            let first = lo.div_ceil(p) * p;
            let mut n = first;
            while n <= hi {
                let r = &mut rem[(n - lo) as usize];
                while *r % p == 0 {
                    *r /= p;
                }
                n += p;
            }
        }
        count += rem[..len].iter().filter(|&&r| r == 1).count() as u64;
        lo = hi + 1;
    }
    Ok(count)
}

/// Crude estimate `y * rho(ln y / ln z)`.
pub fn smooth_count_estimate(y: u64, z: u64) -> f64 {
    let u = ln(y as f64) / ln(z as f64);
    y as f64 * dickman_rho(u)
}
