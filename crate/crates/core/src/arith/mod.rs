//! Integer and prime primitives.

pub mod dickman;
pub mod modular;
pub mod primality;
pub mod primorial;
pub mod sieve;

pub use dickman::{dickman_rho, smooth_count_exact, smooth_count_estimate};
pub use modular::{
    crt_combine, discrete_log, euler_phi, gcd, inv_mod, mul_mod, pow_mod, prime_factors,
    primitive_root, Congruence,
};
pub use primality::{is_prime, is_prime_u64, is_prime_with, prime_evidence, Evidence, PrimalityConfig};
pub use primorial::{primorial, primorial_inclusive};
pub use sieve::{prime_range, prime_range_with, primes_up_to, PrimeTable, SieveConfig};
