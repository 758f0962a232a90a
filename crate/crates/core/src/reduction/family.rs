//! The pair of chain-and-fan models separating `<d:1> F p` from every
//! formula whose budgets stay below `n`.
//!
//! `s1 -> ... -> s{n+1}` is a chain and `s{n+1}` fans out to `t1 .. tk`,
//! each `t` state looping on itself. `p` holds only at `t1` and every pair
//! costs 1. With `k = n + 2` the demon cuts one fan edge per step and leaves
//! only `t1` by the time the traveller arrives; with `k = n + 3` it is one
//! cut short.

use super::ReductionError;
use crate::model::{ModelBuilder, PointedModel};

fn chain_and_fan(n: usize, fan: usize) -> PointedModel {
    let s = |i: usize| format!("s{i}");
    let t = |i: usize| format!("t{i}");
    let mut b = ModelBuilder::new(1)
        .states((1..=n + 1).map(s))
        .states((1..=fan).map(t))
        .atom("p", [t(1)]);
    for i in 1..=n {
        b = b.edge(s(i), s(i + 1));
    }
    for j in 1..=fan {
        b = b.edge(s(n + 1), t(j)).edge(t(j), t(j));
    }
    let model = b.build().expect("family model is well formed");
    PointedModel::named(model, "s1").expect("s1 exists")
}

/// `(M_{n+2}, s1)` and `(M_{n+3}, s1)` for `n >= 1`.
pub fn build_distinguishing_family(n: usize) -> Result<(PointedModel, PointedModel), ReductionError> {
    if n == 0 {
        return Err(ReductionError::FamilyIndex);
    }
    Ok((chain_and_fan(n, n + 2), chain_and_fan(n, n + 3)))
}
