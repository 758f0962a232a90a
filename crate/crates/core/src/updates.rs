//! Bounded model updates: n-submodels, n-supermodels and n-m-updates.
//!
//! Removal and addition sets are produced lazily by a depth-first walk over
//! candidate pairs in canonical order. Pre-order with ascending children
//! yields the sets in lexicographic order of their sorted pair lists, the
//! empty set first. A branch is cut as soon as its cost exceeds the budget;
//! removals are also cut when they would strip a state of its last edge,
//! since every superset would then fail seriality too.

use serde::Serialize;

use crate::model::{EdgeBits, EdgeSet, Frame, Model, ModelError, StateId};

/// The proponent-visible part of one game step: pairs added by the angel
/// and pairs removed by the demon.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UpdateChoice {
    pub additions: EdgeSet,
    pub removals: EdgeSet,
}

impl UpdateChoice {
    pub fn none(m: &Model) -> Self {
        UpdateChoice {
            additions: EdgeSet::empty_for(m),
            removals: EdgeSet::empty_for(m),
        }
    }

    pub fn to_named(&self, m: &Model) -> NamedChoice {
        NamedChoice {
            additions: self.additions.named_pairs(m),
            removals: self.removals.named_pairs(m),
        }
    }
}

/// [`UpdateChoice`] with state names, for reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NamedChoice {
    pub additions: Vec<(String, String)>,
    pub removals: Vec<(String, String)>,
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    pair: usize,
    cost: u64,
    src: usize,
}

/// Lazy lexicographic enumeration of pair subsets within a budget.
#[derive(Debug, Clone)]
pub(crate) struct SubsetWalk {
    candidates: Vec<Candidate>,
    budget: u64,
    stack: Vec<usize>,
    current: EdgeBits,
    cost: u64,
    // Remaining out-degree per state; present only when walking removals.
    outdeg: Option<Vec<u32>>,
    started: bool,
}

impl SubsetWalk {
    /// Subsets of the live edges whose removal keeps the model serial.
    pub(crate) fn removals(frame: &Frame, edges: &EdgeBits, budget: u64) -> Self {
        let n = frame.len();
        let mut outdeg = vec![0u32; n];
        let mut candidates = Vec::new();
        for i in edges.iter() {
            outdeg[i / n] += 1;
            let cost = frame.cost_at(i);
            if cost <= budget {
                candidates.push(Candidate {
                    pair: i,
                    cost,
                    src: i / n,
                });
            }
        }
        SubsetWalk {
            candidates,
            budget,
            stack: Vec::new(),
            current: EdgeBits::empty(n * n),
            cost: 0,
            outdeg: Some(outdeg),
            started: false,
        }
    }

    /// Subsets of the absent pairs.
    pub(crate) fn additions(frame: &Frame, edges: &EdgeBits, budget: u64) -> Self {
        let n = frame.len();
        let candidates = (0..n * n)
            .filter(|&i| !edges.contains(i) && frame.cost_at(i) <= budget)
            .map(|i| Candidate {
                pair: i,
                cost: frame.cost_at(i),
                src: i / n,
            })
            .collect();
        SubsetWalk {
            candidates,
            budget,
            stack: Vec::new(),
            current: EdgeBits::empty(n * n),
            cost: 0,
            outdeg: None,
            started: false,
        }
    }

    fn feasible(&self, j: usize) -> bool {
        let c = self.candidates[j];
        // Costs are at most the budget, so this cannot overflow.
        if self.cost + c.cost > self.budget {
            return false;
        }
        match &self.outdeg {
            Some(d) => d[c.src] > 1,
            None => true,
        }
    }

    fn push(&mut self, j: usize) {
        let c = self.candidates[j];
        self.stack.push(j);
        self.current.insert(c.pair);
        self.cost += c.cost;
        if let Some(d) = &mut self.outdeg {
            d[c.src] -= 1;
        }
    }

    fn pop(&mut self) -> Option<usize> {
        let j = self.stack.pop()?;
        let c = self.candidates[j];
        self.current.remove(c.pair);
        self.cost -= c.cost;
        if let Some(d) = &mut self.outdeg {
            d[c.src] += 1;
        }
        Some(j)
    }

    fn advance(&mut self) -> bool {
        let mut from = self.stack.last().map_or(0, |&i| i + 1);
        loop {
            if let Some(j) = (from..self.candidates.len()).find(|&j| self.feasible(j)) {
                self.push(j);
                return true;
            }
            match self.pop() {
                Some(i) => from = i + 1,
                None => return false,
            }
        }
    }
}

impl Iterator for SubsetWalk {
    type Item = (EdgeBits, u64);

    fn next(&mut self) -> Option<Self::Item> {
        if !self.started {
            self.started = true;
        } else if !self.advance() {
            return None;
        }
        Some((self.current.clone(), self.cost))
    }
}

/// Iterator over the m-submodels of a model, as `(removed pairs, result)`.
pub struct Submodels<'a> {
    model: &'a Model,
    walk: SubsetWalk,
}

impl Iterator for Submodels<'_> {
    type Item = (EdgeSet, Model);

    fn next(&mut self) -> Option<Self::Item> {
        let (bits, cost) = self.walk.next()?;
        let result = self.model.with_edges(self.model.edge_bits().difference(&bits));
        Some((EdgeSet::from_parts(bits, self.model.state_count(), cost), result))
    }
}

/// Iterator over the n-supermodels of a model, as `(added pairs, result)`.
pub struct Supermodels<'a> {
    model: &'a Model,
    walk: SubsetWalk,
}

impl Iterator for Supermodels<'_> {
    type Item = (EdgeSet, Model);

    fn next(&mut self) -> Option<Self::Item> {
        let (bits, cost) = self.walk.next()?;
        let result = self.model.with_edges(self.model.edge_bits().union(&bits));
        Some((EdgeSet::from_parts(bits, self.model.state_count(), cost), result))
    }
}

/// All serial models reachable by removing pairs of total cost at most
/// `budget`, the unchanged model first.
pub fn enumerate_submodels(m: &Model, budget: u64) -> Submodels<'_> {
    Submodels {
        model: m,
        walk: SubsetWalk::removals(m.frame(), m.edge_bits(), budget),
    }
}

/// All models reachable by adding absent pairs of total cost at most
/// `budget`, the unchanged model first.
pub fn enumerate_supermodels(m: &Model, budget: u64) -> Supermodels<'_> {
    Supermodels {
        model: m,
        walk: SubsetWalk::additions(m.frame(), m.edge_bits(), budget),
    }
}

/// Iterator over n-m-updates: additions outer, removals inner.
pub struct Updates<'a> {
    model: &'a Model,
    additions: SubsetWalk,
    removals: Vec<(EdgeBits, u64)>,
    current: Option<(EdgeBits, u64)>,
    inner: usize,
}

impl Iterator for Updates<'_> {
    type Item = (UpdateChoice, Model);

    fn next(&mut self) -> Option<Self::Item> {
        if self.removals.is_empty() {
            return None;
        }
        if self.current.is_none() || self.inner == self.removals.len() {
            self.current = Some(self.additions.next()?);
            self.inner = 0;
        }
        let (add, add_cost) = self.current.as_ref()?;
        let (rem, rem_cost) = &self.removals[self.inner];
        self.inner += 1;
        let n = self.model.state_count();
        let edges = self.model.edge_bits().difference(rem).union(add);
        let choice = UpdateChoice {
            additions: EdgeSet::from_parts(add.clone(), n, *add_cost),
            removals: EdgeSet::from_parts(rem.clone(), n, *rem_cost),
        };
        Some((choice, self.model.with_edges(edges)))
    }
}

/// Every combination of an `angel_budget`-supermodel's additions with a
/// `demon_budget`-submodel's removals, applied simultaneously.
pub fn enumerate_updates(m: &Model, angel_budget: u64, demon_budget: u64) -> Updates<'_> {
    Updates {
        model: m,
        additions: SubsetWalk::additions(m.frame(), m.edge_bits(), angel_budget),
        removals: SubsetWalk::removals(m.frame(), m.edge_bits(), demon_budget).collect(),
        current: None,
        inner: 0,
    }
}

/// `(M \ B) ∪ A`. `B` must be present with `M \ B` serial; `A` must be absent.
pub fn apply_update(m: &Model, choice: &UpdateChoice) -> Result<Model, ModelError> {
    m.remove_edges(&choice.removals)?.add_edges(&choice.additions)
}

/// Successor states of `s`, in canonical order.
pub fn successors(m: &Model, s: StateId) -> Vec<StateId> {
    m.successors(s)
}
