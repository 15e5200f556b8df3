use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    NotPrime(u64),
    #[error("modulus is not primitive: {0}")]
    NotPrimitive(String),
    #[error("division by zero in GF(q)")]
    DivisionByZero,
    #[error("k = {k} is not coprime to m = {m}")]
    BadK { k: u64, m: u32 },
    #[error("e = {e} does not satisfy the congruence condition for p = {p}, m = {m}")]
    NoCertificate { p: u64, m: u32, e: u64 },
    #[error("cyclotomic cosets of {0} and {1} overlap")]
    OverlappingCosets(u64, u64),
    #[error("work budget exceeded: {needed} steps requested, budget is {budget}")]
    BudgetExceeded { needed: u64, budget: u64 },
    #[error("hypothesis violated for {0}: {1}")]
    HypothesisViolated(String, String),
    #[error("proven identity violated (implementation bug): {0}")]
    IdentityViolated(String),
    #[error("{0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, Error>;
