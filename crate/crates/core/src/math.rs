//! Float helpers over `libm` plus the iterated logarithms used throughout.

pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

pub fn powf(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

pub fn floor(x: f64) -> f64 {
    libm::floor(x)
}

pub fn ceil(x: f64) -> f64 {
    libm::ceil(x)
}

pub fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

/// `log_j x`: the natural logarithm applied `j` times. Returns `None` as soon
/// as an intermediate value is not positive.
pub fn iter_log(x: f64, j: u32) -> Option<f64> {
    let mut v = x;
    for _ in 0..j {
        if !(v > 0.0) {
            return None;
        }
        v = ln(v);
    }
    Some(v)
}
