//! Exact-arithmetic toolkit for cyclic codes attached to PN/APN power maps
//! over odd prime fields.
//!
//! Everything is integer or cyclotomic-integer arithmetic: exponential sums
//! T0/T/S are evaluated in Z[w], value and weight distributions are exact
//! multisets, and every closed-form distribution table can be generated and
//! compared against enumeration bit-for-bit.

pub mod arith;
pub mod codes;
pub mod cyclotomic;
pub mod error;
pub mod expsums;
pub mod field;
pub mod quadform;
pub mod report;
pub mod tables;

pub use cyclotomic::CycInt;
pub use error::{Error, Result};
pub use field::{cyclotomic_coset, legendre, Coset, FieldCtx, FieldElem};

/// Default work budget (in outer evaluations: messages, sums, tuples).
pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Environment variable overriding the default budget.
pub const BUDGET_ENV: &str = "APNCODES_BUDGET";

/// Budget from the environment, falling back to the default.
pub fn default_budget() -> u64 {
    std::env::var(BUDGET_ENV)
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_BUDGET)
}

/// Fail-closed budget gate shared by the enumeration kernels.
pub(crate) fn charge(needed: u64, budget: u64) -> Result<()> {
    if needed > budget {
        Err(Error::BudgetExceeded { needed, budget })
    } else {
        Ok(())
    }
}
