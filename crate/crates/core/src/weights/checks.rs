//! Restricted weights `w*` and `w(p, n)` plus the empirical main-term checks.

use alloc::format;
use alloc::vec::Vec;

use crate::arith::modular::reduce;
use crate::arith::{euler_phi, gcd, is_prime_u64, prime_factors};
use crate::concentration::{in_gp, GoodSetParams};
use crate::residues::shift_solvable;
use crate::weights::integrals::{i_g, j_g, Integral};
use crate::weights::series::singular_series;
use crate::weights::table::WeightTable;
use crate::{Error, Result};

/// Prime cutoff used for `G_B` in the predicted main terms.
pub const SERIES_CUTOFF: u64 = 100_000;

fn table_w(table: &WeightTable, n: u64) -> Result<f64> {
    table.w_at(n).ok_or_else(|| {
        Error::Domain(format!("n = {n} outside the table window [{}, {})", table.lo, table.hi()))
    })
}

/// `D w_n` if `n = 1 - c^k (mod p)` has a solution with `p` not dividing `c`,
/// else 0; `D = gcd(p - 1, k)`.
pub fn w_star(p: u64, n: u64, k: u64, table: &WeightTable) -> Result<f64> {
    let w = table_w(table, n)?;
    Ok(star_factor(p, n, k) * w)
}

fn star_factor(p: u64, n: u64, k: u64) -> f64 {
    if shift_solvable(reduce(n as i64, p) as i64, p, k) {
        gcd(p - 1, k) as f64
    } else {
        0.0
    }
}

/// `w*(p, n)` gated by `n` in `G(p)` for the translates of `tuple`.
pub fn w_final(p: u64, n: u64, k: u64, table: &WeightTable, tuple: &[i64], params: &GoodSetParams) -> Result<f64> {
    if !in_gp(n, p, tuple, params)? {
        return Ok(0.0);
    }
    w_star(p, n, k, table)
}

fn b_ratio(b: u64) -> f64 {
    b as f64 / euler_phi(b) as f64
}

fn form_value(table: &WeightTable, m: usize, n: u64) -> Result<u64> {
    let v = table.lattice.system.forms[m].eval(n);
    u64::try_from(v).map_err(|_| Error::Domain(format!("L_{}({n}) exceeds 64 bits", m + 1)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Theorem77Report {
    pub sum_w: f64,
    pub count_a: u64,
    pub log_r: f64,
    pub b_factor: f64,
    pub series: f64,
    pub integral: Integral,
    pub predicted: f64,
    pub ratio: f64,
}

/// `sum w_n` against `(B/phi(B))^g G_B #A (log R)^g I_g(F)`.
pub fn theorem77_check(table: &WeightTable) -> Result<Theorem77Report> {
    let sys = &table.lattice.system;
    let g = sys.g();
    let series = singular_series(sys, sys.b, SERIES_CUTOFF)?.value;
    let b_factor = libm::pow(b_ratio(sys.b), g as f64);
    let integral = i_g(g);
    let count_a = table.w.len() as u64;
    let log_r = table.lattice.log_r;
    let predicted = b_factor * series * count_a as f64 * libm::pow(log_r, g as f64) * integral.value;
    let sum_w = table.sum();
    Ok(Theorem77Report {
        sum_w,
        count_a,
        log_r,
        b_factor,
        series,
        integral,
        predicted,
        ratio: sum_w / predicted,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Theorem78Report {
    pub form: usize,
    pub sum_prime_w: f64,
    pub count_prime: u64,
    pub log_r: f64,
    pub b_factor: f64,
    pub series: f64,
    pub a_factor: f64,
    pub integral: Integral,
    pub predicted: f64,
    pub ratio: f64,
}

/// `sum 1_P(L_m(n)) w_n` against
/// `(B/phi(B))^{g-1} G_B #P (log R)^{g+1} J_g(F) prod_{p | a_m, p not | B} (p-1)/p`.
pub fn theorem78_check(table: &WeightTable, form: usize) -> Result<Theorem78Report> {
    let sys = &table.lattice.system;
    if form >= sys.g() {
        return Err(Error::Domain(format!("form index {form} out of range")));
    }
    let g = sys.g();
    let series = singular_series(sys, sys.b, SERIES_CUTOFF)?.value;
    let b_factor = libm::pow(b_ratio(sys.b), (g - 1) as f64);
    let a_factor: f64 = prime_factors(sys.forms[form].a)
        .into_iter()
        .filter(|p| sys.b % p != 0)
        .map(|p| (p - 1) as f64 / p as f64)
        .product();
    let mut sum = 0.0;
    let mut count = 0u64;
    for (n, w) in table.iter() {
        if is_prime_u64(form_value(table, form, n)?) {
            count += 1;
            sum += w;
        }
    }
    let integral = j_g(g);
    let log_r = table.lattice.log_r;
    let predicted = b_factor * series * count as f64 * libm::pow(log_r, (g + 1) as f64) * integral.value * a_factor;
    Ok(Theorem78Report {
        form,
        sum_prime_w: sum,
        count_prime: count,
        log_r,
        b_factor,
        series,
        a_factor,
        integral,
        predicted,
        ratio: sum / predicted,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CharacterReport {
    pub p: u64,
    pub k: u64,
    pub d: u64,
    pub form: usize,
    pub sum_w: f64,
    pub sum_w_star: f64,
    pub ratio: f64,
    pub sum_prime_w: f64,
    pub sum_prime_w_star: f64,
    pub prime_ratio: f64,
    /// `sum w_n` over `n = 1 (mod p)`.
    pub stratum_one: f64,
}

/// Itemizes `sum w*` against `sum w`, and the same under `1_P(L_form(n))`.
pub fn character_restricted_sum_check(table: &WeightTable, p: u64, k: u64, form: usize) -> Result<CharacterReport> {
    if form >= table.lattice.system.g() {
        return Err(Error::Domain(format!("form index {form} out of range")));
    }
    let mut r = CharacterReport {
        p,
        k,
        d: gcd(p - 1, k),
        form,
        sum_w: 0.0,
        sum_w_star: 0.0,
        ratio: 0.0,
        sum_prime_w: 0.0,
        sum_prime_w_star: 0.0,
        prime_ratio: 0.0,
        stratum_one: 0.0,
    };
    for (n, w) in table.iter() {
        let ws = star_factor(p, n, k) * w;
        r.sum_w += w;
        r.sum_w_star += ws;
        if n % p == 1 {
            r.stratum_one += w;
        }
        if is_prime_u64(form_value(table, form, n)?) {
            r.sum_prime_w += w;
            r.sum_prime_w_star += ws;
        }
    }
    r.ratio = r.sum_w_star / r.sum_w;
    r.prime_ratio = r.sum_prime_w_star / r.sum_prime_w;
    Ok(r)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GateReport {
    pub sum_w: f64,
    pub sum_w_star: f64,
    pub sum_w_final: f64,
    /// `sum w(p, n) / sum w*(p, n)`.
    pub ratio: f64,
}

/// The three sums behind `w(p, n) <= w*(p, n) <= D w_n`.
pub fn gate_check(table: &WeightTable, p: u64, k: u64, tuple: &[i64], params: &GoodSetParams) -> Result<GateReport> {
    let (mut sw, mut ss, mut sf) = (0.0, 0.0, 0.0);
    for (n, w) in table.iter() {
        let ws = star_factor(p, n, k) * w;
        sw += w;
        ss += ws;
        if ws != 0.0 && in_gp(n, p, tuple, params)? {
            sf += ws;
        }
    }
    Ok(GateReport {
        sum_w: sw,
        sum_w_star: ss,
        sum_w_final: sf,
        ratio: sf / ss,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentReport {
    pub p: u64,
    pub u: u64,
    pub shift: i64,
    pub r_star: f64,
    /// `sum w_n r(n~, u)^j` for `j = 0, 1, 2`.
    pub moments: [f64; 3],
    /// `r*(u)^j` times the Theorem 7.7 main term.
    pub predicted: [f64; 3],
    /// `moment2 - 2 r* moment1 + r*^2 moment0`.
    pub centered: f64,
    /// `sum w_n (r(n~, u) - r*)^2` computed directly.
    pub centered_direct: f64,
    /// `centered / (r*^2 moment0)`.
    pub centered_ratio: f64,
}

/// `r(n, u)` for a signed `n`.
fn r_signed(n: i128, primes: &[u64], k: u64) -> f64 {
    primes
        .iter()
        .filter(|&&s| shift_solvable(n.rem_euclid(s as i128) as i64, s, k))
        .map(|&s| 1.0 / s as f64)
        .sum()
}

/// Weighted moments of `r(n~, u)` with `n~ = n + (h_i - h_l) p`. With
/// `prime_form = Some(m)` every weight carries `1_P(L_m(n))`.
pub fn concentration_moment_check(
    table: &WeightTable,
    tuple: &[i64],
    p: u64,
    (i, l): (usize, usize),
    u: u64,
    params: &GoodSetParams,
    prime_form: Option<usize>,
) -> Result<MomentReport> {
    if i >= tuple.len() || l >= tuple.len() {
        return Err(Error::Domain(format!("indices ({i}, {l}) outside the tuple")));
    }
    let class = params
        .unit_class(u)
        .ok_or_else(|| Error::Domain(format!("{u} is not a unit class mod {}", params.k)))?;
    let shift = (tuple[i] - tuple[l]) * p as i64;
    let rs = class.r_star;
    let mut m = [0.0; 3];
    let mut direct = 0.0;
    for (n, w) in table.iter() {
        let mut w = w;
        if let Some(f) = prime_form {
            if !is_prime_u64(form_value(table, f, n)?) {
                w = 0.0;
            }
        }
        if w == 0.0 {
            continue;
        }
        let r = r_signed(n as i128 + shift as i128, &class.primes, params.k);
        m[0] += w;
        m[1] += w * r;
        m[2] += w * r * r;
        direct += w * (r - rs) * (r - rs);
    }
    let main = theorem77_check(table)?.predicted;
    let predicted = [main, main * rs, main * rs * rs];
    let centered = m[2] - 2.0 * rs * m[1] + rs * rs * m[0];
    Ok(MomentReport {
        p,
        u,
        shift,
        r_star: rs,
        moments: m,
        predicted,
        centered,
        centered_direct: direct,
        centered_ratio: centered / (rs * rs * m[0]),
    })
}

/// Convenience for callers that need every `w*` in the window.
pub fn w_star_all(table: &WeightTable, p: u64, k: u64) -> Vec<f64> {
    table.iter().map(|(n, w)| star_factor(p, n, k) * w).collect()
}
