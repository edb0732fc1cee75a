//! Kernels for constructing large prime gaps around k-th powers of primes.
//!
//! The crate is `no_std` and needs only `alloc`. Everything here is a pure
//! function of its inputs (plus an explicit seed where randomness is
//! involved), so callers are free to parallelise over independent work
//! items. The `gapforge` companion crate carries IO, the CLI and the thread
//! pool.
//!
//! Layout:
//!
//! * [`arith`]: sieves, primality, CRT, discrete logarithms, Dickman's rho.
//! * [`residues`]: solvability of `n = 1 - (c+1)^k (mod p)` and the admissible
//!   residue families used for sieving.
//! * [`gap`]: the sieving / CRT / matrix-row pipeline that emits
//!   [`gap::GapCertificate`]s.
//! * [`concentration`]: good-integer sets and the Monte-Carlo membership
//!   harness.
//! * [`weights`]: admissible systems, singular series and the multidimensional
//!   sieve weights with their diagnostic checks.
//! * [`cover`]: degree profiles and the semi-random covering simulator.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod arith;
pub mod concentration;
pub mod cover;
mod error;
pub mod gap;
pub mod math;
pub mod residues;
pub mod seed;
pub mod weights;

pub use error::{Error, Result};
pub use num_bigint::BigUint;
