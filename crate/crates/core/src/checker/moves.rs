//! One round of an update game, split into the proponent's part and the
//! opponent's part.
//!
//! | operator       | proponent picks        | opponent picks         |
//! |----------------|------------------------|------------------------|
//! | `<d:n>`        | removal                | nothing                |
//! | `<a:n>`        | addition               | nothing                |
//! | `<<d\|n,m>>`   | removal                | addition               |
//! | `<<a\|n,m>>`   | addition               | removal                |
//! | `<<a,d\|n,m>>` | addition and removal   | nothing                |
//! | `<<\|n,m>>`    | nothing                | addition and removal   |
//!
//! The traveller always belongs to the opponent. Additions are drawn from
//! the pairs absent before the round and removals from the pairs present,
//! so the two parts never overlap and can simply be merged.

use rustc_hash::FxHashSet;

use crate::model::{EdgeBits, Frame};
use crate::syntax::{Coalition, Mode};
use crate::updates::SubsetWalk;

/// A game position: the current edge relation and the traveller's state.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct Pos {
    pub edges: EdgeBits,
    pub point: u32,
}

/// Edges added and removed by one agent or coalition in a single round.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Part {
    pub add: EdgeBits,
    pub rem: EdgeBits,
    pub add_cost: u64,
    pub rem_cost: u64,
}

/// The choices available to both sides at one position.
pub(crate) struct Round {
    pub proponent: Vec<Part>,
    pub opponent: Vec<Part>,
}

fn parts(walk: SubsetWalk, removal: bool, pairs: usize) -> Vec<Part> {
    walk.map(|(bits, cost)| {
        let none = EdgeBits::empty(pairs);
        if removal {
            Part {
                add: none,
                rem: bits,
                add_cost: 0,
                rem_cost: cost,
            }
        } else {
            Part {
                add: bits,
                rem: none,
                add_cost: cost,
                rem_cost: 0,
            }
        }
    })
    .collect()
}

fn product(adds: &[Part], rems: &[Part]) -> Vec<Part> {
    let mut out = Vec::with_capacity(adds.len() * rems.len());
    for a in adds {
        for r in rems {
            out.push(Part {
                add: a.add.clone(),
                rem: r.rem.clone(),
                add_cost: a.add_cost,
                rem_cost: r.rem_cost,
            });
        }
    }
    out
}

fn idle(pairs: usize) -> Vec<Part> {
    vec![Part {
        add: EdgeBits::empty(pairs),
        rem: EdgeBits::empty(pairs),
        add_cost: 0,
        rem_cost: 0,
    }]
}

impl Round {
    pub fn new(frame: &Frame, edges: &EdgeBits, mode: Mode) -> Round {
        let pairs = frame.len() * frame.len();
        let removals = |n| parts(SubsetWalk::removals(frame, edges, n), true, pairs);
        let additions = |n| parts(SubsetWalk::additions(frame, edges, n), false, pairs);
        let (proponent, opponent) = match mode {
            Mode::Demon(n) => (removals(n), idle(pairs)),
            Mode::Angel(n) => (additions(n), idle(pairs)),
            Mode::Update {
                coalition,
                angel_budget: a,
                demon_budget: d,
            } => match coalition {
                Coalition::DEMON => (removals(d), additions(a)),
                Coalition::ANGEL => (additions(a), removals(d)),
                Coalition::BOTH => (product(&additions(a), &removals(d)), idle(pairs)),
                Coalition::NONE => (idle(pairs), product(&additions(a), &removals(d))),
            },
        };
        Round { proponent, opponent }
    }

    /// Every position the opponent and the traveller can reach once the
    /// proponent has committed to `choice`, without duplicates, in
    /// enumeration order.
    pub fn responses(&self, frame: &Frame, from: &Pos, choice: usize) -> Vec<Pos> {
        let c = &self.proponent[choice];
        let n = frame.len();
        let mut seen = FxHashSet::default();
        let mut out = Vec::new();
        for o in &self.opponent {
            let edges = from
                .edges
                .difference(&c.rem)
                .difference(&o.rem)
                .union(&c.add)
                .union(&o.add);
            let base = from.point as usize * n;
            for d in 0..n {
                if edges.contains(base + d) {
                    let p = Pos {
                        edges: edges.clone(),
                        point: d as u32,
                    };
                    if seen.insert(p.clone()) {
                        out.push(p);
                    }
                }
            }
        }
        out
    }
}
