use num_bigint::BigUint;
use num_traits::One;

use super::sieve::primes_up_to;

/// Product of all primes strictly below `x`.
pub fn primorial(x: u64) -> BigUint {
    let mut acc = BigUint::one();
    if x <= 2 {
        return acc;
    }
    for p in primes_up_to(x - 1) {
        acc *= p;
    }
    acc
}

/// Product of all primes `p <= x`.
pub fn primorial_inclusive(x: u64) -> BigUint {
    primorial(x.saturating_add(1))
}
