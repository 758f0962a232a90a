//! Slow, obviously-correct reference procedures for differential testing.

pub mod brute;
pub mod ctl;
pub mod qbf;

pub use brute::{brute_force_next, unfold_check, OracleError, OracleLimits};
pub use ctl::ctl_check;
pub use qbf::{qbf_eval, Prop, QbfInstance, Quantifier};
