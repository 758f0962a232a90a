//! Constructions from the hardness and expressivity arguments, plus the
//! worked-example fixtures.

pub mod ctl;
pub mod family;
pub mod fixtures;
pub mod qbf;

pub use ctl::translate_ctl;
pub use family::build_distinguishing_family;
pub use fixtures::{fixture, pointed_fixture, FIXTURE_KEYS};
pub use qbf::{reduce_qbf, QbfReduction, ReductionError};
