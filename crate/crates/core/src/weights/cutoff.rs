//! The smooth cutoff `psi` and the weight profile `F`.

use crate::math::{exp, ln, sqrt};

/// Version tag of the bridge used by [`psi`].
pub const PSI_VARIANT: &str = "smoothstep-exp-v1";

const FLAT: f64 = 0.1;

fn bump(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else {
        exp(-1.0 / t)
    }
}

/// Smooth non-increasing cutoff: 1 on `[0, 1/10]`, 0 on `[1, inf)`.
pub fn psi(t: f64) -> f64 {
    if t <= FLAT {
        return 1.0;
    }
    if t >= 1.0 {
        return 0.0;
    }
    let s = (t - FLAT) / (1.0 - FLAT);
    let a = bump(1.0 - s);
    a / (a + bump(s))
}

/// `T_g = g log g` and `U_g = g^{-1/2}`.
pub fn profile_params(g: usize) -> (f64, f64) {
    let gf = g as f64;
    (gf * ln(gf), 1.0 / sqrt(gf))
}

/// `F(t) = psi(sum t_i) prod psi(t_i / U_g) / (1 + T_g t_i)`.
pub fn f_eval(t: &[f64]) -> f64 {
    let g = t.len();
    if g == 0 {
        return 1.0;
    }
    let (tg, ug) = profile_params(g);
    let sum: f64 = t.iter().sum();
    let mut v = psi(sum);
    if v == 0.0 {
        return 0.0;
    }
    for &ti in t {
        v *= psi(ti / ug) / (1.0 + tg * ti);
        if v == 0.0 {
            return 0.0;
        }
    }
    v
}
