use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("capacity exceeded: {what} needs {needed}, budget is {budget}")]
    Capacity {
        what: &'static str,
        needed: u64,
        budget: u64,
    },
    #[error("moduli {0} and {1} are not coprime")]
    NotCoprime(String, String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("degenerate default parameters ({0}); pass explicit overrides")]
    Degenerate(String),
    #[error("conflicting residue assignments for prime {0}")]
    Conflict(u64),
    #[error("system is not admissible: prime {0} divides every value")]
    NotAdmissible(u64),
    #[error("{0} is not prime")]
    NotPrime(String),
    #[error("certificate check failed: {0}")]
    Verification(String),
}
