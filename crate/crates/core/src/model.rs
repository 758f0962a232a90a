//! Weighted serial digraphs with a propositional valuation.
//!
//! A [`Model`] splits into an immutable [`Frame`] (states, valuation, cost
//! function) shared behind an `Arc`, and a bitset of live edges. Updates only
//! ever touch the edge bitset, so the game positions explored by the checker
//! are cheap to clone and hash.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use smallvec::SmallVec;
use thiserror::Error;

mod text;

pub use text::{parse_model, parse_model_document, serialize_model, ModelDocument};

/// Errors raised while building or editing a model.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("undeclared state `{0}`")]
    UndeclaredState(String),
    #[error("duplicate state identifier `{0}`")]
    DuplicateState(String),
    #[error("cost must be a positive integer, got {0}")]
    NonPositiveCost(u64),
    #[error("state `{0}` has no outgoing edge")]
    NotSerial(String),
    #[error("model has no states")]
    Empty,
    #[error("edge {0} -> {1} is already present")]
    EdgePresent(String, String),
    #[error("edge {0} -> {1} is not present")]
    EdgeAbsent(String, String),
    #[error("edge sets belong to models over different state sets")]
    FrameMismatch,
    #[error("integer overflow while summing costs")]
    Overflow,
}

/// Index of a state inside its model. States are numbered in lexicographic
/// order of their identifiers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateId(pub(crate) u32);

impl StateId {
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub(crate) fn from_index(i: usize) -> Self {
        StateId(i as u32)
    }
}

/// Fixed-width bitset over the `n * n` ordered pairs of a frame. Bit
/// `src * n + dst` stands for the pair `(src, dst)`, so ascending bit order is
/// the canonical lexicographic order of pairs.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct EdgeBits(SmallVec<[u64; 2]>);

impl EdgeBits {
    pub fn empty(pairs: usize) -> Self {
        EdgeBits(SmallVec::from_elem(0, pairs.div_ceil(64).max(1)))
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }

    pub fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    pub fn union(&self, other: &Self) -> Self {
        EdgeBits(self.0.iter().zip(&other.0).map(|(a, b)| a | b).collect())
    }

    pub fn difference(&self, other: &Self) -> Self {
        EdgeBits(self.0.iter().zip(&other.0).map(|(a, b)| a & !b).collect())
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & b == 0)
    }

    /// Set bits in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + b)
            })
        })
    }

    /// Lowercase hex of the words, most significant word first.
    pub fn to_hex(&self) -> String {
        self.0.iter().rev().map(|w| format!("{w:016x}")).collect()
    }
}

/// The part of a model that updates never change.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    states: Vec<String>,
    atoms: BTreeMap<String, Vec<bool>>,
    costs: Vec<u64>,
    default_cost: u64,
}

impl Frame {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    #[inline]
    pub fn pair_index(&self, src: StateId, dst: StateId) -> usize {
        src.index() * self.states.len() + dst.index()
    }

    #[inline]
    pub fn pair_of(&self, i: usize) -> (StateId, StateId) {
        let n = self.states.len();
        (StateId::from_index(i / n), StateId::from_index(i % n))
    }

    #[inline]
    pub fn cost_at(&self, pair: usize) -> u64 {
        self.costs[pair]
    }

    pub fn holds(&self, atom: &str, s: StateId) -> bool {
        self.atoms.get(atom).is_some_and(|v| v[s.index()])
    }
}

/// A weighted serial digraph `(S, ->, V, C)`.
#[derive(Clone)]
pub struct Model {
    frame: Arc<Frame>,
    edges: EdgeBits,
}

impl PartialEq for Model {
    fn eq(&self, other: &Self) -> bool {
        self.edges == other.edges && (Arc::ptr_eq(&self.frame, &other.frame) || self.frame == other.frame)
    }
}

impl Eq for Model {}

impl std::hash::Hash for Model {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.edges.hash(state);
    }
}

impl fmt::Debug for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize_model(self, None))
    }
}

/// Builder used by the parser, the fixtures and the reductions.
#[derive(Debug, Clone, Default)]
pub struct ModelBuilder {
    states: Vec<String>,
    edges: Vec<(String, String)>,
    atoms: Vec<(String, Vec<String>)>,
    costs: Vec<(String, String, u64)>,
    default_cost: u64,
}

impl ModelBuilder {
    pub fn new(default_cost: u64) -> Self {
        ModelBuilder {
            default_cost,
            ..Default::default()
        }
    }

    pub fn state(mut self, name: impl Into<String>) -> Self {
        self.states.push(name.into());
        self
    }

    pub fn states<I, S>(mut self, names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.states.extend(names.into_iter().map(Into::into));
        self
    }

    pub fn edge(mut self, src: impl Into<String>, dst: impl Into<String>) -> Self {
        self.edges.push((src.into(), dst.into()));
        self
    }

    /// Adds an edge together with an explicit cost.
    pub fn weighted_edge(self, src: &str, dst: &str, cost: u64) -> Self {
        self.edge(src, dst).cost(src, dst, cost)
    }

    pub fn cost(mut self, src: impl Into<String>, dst: impl Into<String>, c: u64) -> Self {
        self.costs.push((src.into(), dst.into(), c));
        self
    }

    pub fn atom<I, S>(mut self, name: impl Into<String>, states: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.atoms
            .push((name.into(), states.into_iter().map(Into::into).collect()));
        self
    }

    pub fn build(self) -> Result<Model, ModelError> {
        if self.states.is_empty() {
            return Err(ModelError::Empty);
        }
        if self.default_cost == 0 {
            return Err(ModelError::NonPositiveCost(0));
        }
        let mut seen = BTreeSet::new();
        for s in &self.states {
            if !seen.insert(s.clone()) {
                return Err(ModelError::DuplicateState(s.clone()));
            }
        }
        let states: Vec<String> = seen.into_iter().collect();
        let n = states.len();
        let lookup = |name: &str| -> Result<usize, ModelError> {
            states
                .binary_search_by(|s| s.as_str().cmp(name))
                .map_err(|_| ModelError::UndeclaredState(name.to_string()))
        };

        let mut costs = vec![self.default_cost; n * n];
        for (a, b, c) in &self.costs {
            if *c == 0 {
                return Err(ModelError::NonPositiveCost(0));
            }
            costs[lookup(a)? * n + lookup(b)?] = *c;
        }
        let mut edges = EdgeBits::empty(n * n);
        for (a, b) in &self.edges {
            edges.insert(lookup(a)? * n + lookup(b)?);
        }
        let mut atoms: BTreeMap<String, Vec<bool>> = BTreeMap::new();
        for (name, members) in &self.atoms {
            let entry = atoms.entry(name.clone()).or_insert_with(|| vec![false; n]);
            for m in members {
                entry[lookup(m)?] = true;
            }
        }
        let frame = Frame {
            states,
            atoms,
            costs,
            default_cost: self.default_cost,
        };
        let model = Model {
            frame: Arc::new(frame),
            edges,
        };
        model.check_serial()?;
        Ok(model)
    }
}

impl Model {
    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn edge_bits(&self) -> &EdgeBits {
        &self.edges
    }

    /// Same frame, different edge relation. Seriality is not checked.
    pub(crate) fn with_edges(&self, edges: EdgeBits) -> Model {
        Model {
            frame: Arc::clone(&self.frame),
            edges,
        }
    }

    pub fn state_count(&self) -> usize {
        self.frame.states.len()
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> {
        (0..self.state_count()).map(StateId::from_index)
    }

    pub fn state_name(&self, s: StateId) -> &str {
        &self.frame.states[s.index()]
    }

    pub fn state_id(&self, name: &str) -> Result<StateId, ModelError> {
        self.frame
            .states
            .binary_search_by(|s| s.as_str().cmp(name))
            .map(StateId::from_index)
            .map_err(|_| ModelError::UndeclaredState(name.to_string()))
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, src: StateId, dst: StateId) -> bool {
        self.edges.contains(self.frame.pair_index(src, dst))
    }

    /// Live edges in canonical order.
    pub fn edges(&self) -> impl Iterator<Item = (StateId, StateId)> + '_ {
        self.edges.iter().map(|i| self.frame.pair_of(i))
    }

    pub fn cost(&self, src: StateId, dst: StateId) -> u64 {
        self.frame.costs[self.frame.pair_index(src, dst)]
    }

    pub fn default_cost(&self) -> u64 {
        self.frame.default_cost
    }

    pub fn atoms(&self) -> impl Iterator<Item = &str> {
        self.frame.atoms.keys().map(String::as_str)
    }

    pub fn holds(&self, atom: &str, s: StateId) -> bool {
        self.frame.holds(atom, s)
    }

    /// `True(s)`: the atoms holding at `s`.
    pub fn true_atoms(&self, s: StateId) -> BTreeSet<&str> {
        self.frame
            .atoms
            .iter()
            .filter(|(_, v)| v[s.index()])
            .map(|(k, _)| k.as_str())
            .collect()
    }

    pub fn atom_states(&self, atom: &str) -> Vec<StateId> {
        match self.frame.atoms.get(atom) {
            Some(v) => v
                .iter()
                .enumerate()
                .filter(|(_, b)| **b)
                .map(|(i, _)| StateId::from_index(i))
                .collect(),
            None => Vec::new(),
        }
    }

    pub fn successors(&self, s: StateId) -> Vec<StateId> {
        let n = self.state_count();
        let base = s.index() * n;
        (0..n)
            .filter(|&d| self.edges.contains(base + d))
            .map(StateId::from_index)
            .collect()
    }

    pub fn is_serial(&self) -> bool {
        let n = self.state_count();
        (0..n).all(|s| (0..n).any(|d| self.edges.contains(s * n + d)))
    }

    fn check_serial(&self) -> Result<(), ModelError> {
        let n = self.state_count();
        for s in 0..n {
            if !(0..n).any(|d| self.edges.contains(s * n + d)) {
                return Err(ModelError::NotSerial(self.frame.states[s].clone()));
            }
        }
        Ok(())
    }

    /// Explicit cost entries, i.e. pairs whose cost differs from the default.
    pub fn explicit_costs(&self) -> Vec<(StateId, StateId, u64)> {
        let d = self.frame.default_cost;
        self.frame
            .costs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != d)
            .map(|(i, &c)| {
                let (a, b) = self.frame.pair_of(i);
                (a, b, c)
            })
            .collect()
    }

    /// Build an edge set over this model's frame.
    pub fn edge_set<I>(&self, pairs: I) -> Result<EdgeSet, ModelError>
    where
        I: IntoIterator<Item = (StateId, StateId)>,
    {
        let mut bits = EdgeBits::empty(self.state_count().pow(2));
        for (a, b) in pairs {
            bits.insert(self.frame.pair_index(a, b));
        }
        EdgeSet::from_bits(&self.frame, bits)
    }

    /// Like [`Model::edge_set`] but addressing states by name.
    pub fn edge_set_named(&self, pairs: &[(&str, &str)]) -> Result<EdgeSet, ModelError> {
        let ids = pairs
            .iter()
            .map(|(a, b)| Ok((self.state_id(a)?, self.state_id(b)?)))
            .collect::<Result<Vec<_>, ModelError>>()?;
        self.edge_set(ids)
    }

    fn check_frame(&self, a: &EdgeSet) -> Result<(), ModelError> {
        if a.bits.0.len() != self.edges.0.len() || a.n != self.state_count() {
            return Err(ModelError::FrameMismatch);
        }
        Ok(())
    }

    fn named(&self, pair: usize) -> (String, String) {
        let (a, b) = self.frame.pair_of(pair);
        (self.state_name(a).to_string(), self.state_name(b).to_string())
    }

    /// `M \ A`. Every pair must be present and the result must stay serial.
    pub fn remove_edges(&self, a: &EdgeSet) -> Result<Model, ModelError> {
        self.check_frame(a)?;
        if let Some(i) = a.bits.difference(&self.edges).iter().next() {
            let (x, y) = self.named(i);
            return Err(ModelError::EdgeAbsent(x, y));
        }
        let m = self.with_edges(self.edges.difference(&a.bits));
        m.check_serial()?;
        Ok(m)
    }

    /// `M ∪ A`. Every pair must be absent.
    pub fn add_edges(&self, a: &EdgeSet) -> Result<Model, ModelError> {
        self.check_frame(a)?;
        if let Some(i) = a.bits.iter().find(|&i| self.edges.contains(i)) {
            let (x, y) = self.named(i);
            return Err(ModelError::EdgePresent(x, y));
        }
        Ok(self.with_edges(self.edges.union(&a.bits)))
    }

    /// `|M|`: states + edges + atom occurrences + the sum of all costs.
    pub fn size(&self) -> Result<u64, ModelError> {
        let occurrences: usize = self
            .frame
            .atoms
            .values()
            .map(|v| v.iter().filter(|b| **b).count())
            .sum();
        let cost_sum = self
            .frame
            .costs
            .iter()
            .try_fold(0u64, |acc, &c| acc.checked_add(c))
            .ok_or(ModelError::Overflow)?;
        (self.state_count() as u64 + self.edge_count() as u64 + occurrences as u64)
            .checked_add(cost_sum)
            .ok_or(ModelError::Overflow)
    }
}

/// `|M|` as a free function.
pub fn model_size(m: &Model) -> Result<u64, ModelError> {
    m.size()
}

/// A set of ordered pairs of one frame together with its total cost.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeSet {
    bits: EdgeBits,
    n: usize,
    total_cost: u64,
}

impl EdgeSet {
    pub(crate) fn from_bits(frame: &Frame, bits: EdgeBits) -> Result<EdgeSet, ModelError> {
        let total_cost = bits
            .iter()
            .try_fold(0u64, |acc, i| acc.checked_add(frame.cost_at(i)))
            .ok_or(ModelError::Overflow)?;
        Ok(EdgeSet {
            bits,
            n: frame.len(),
            total_cost,
        })
    }

    pub(crate) fn from_parts(bits: EdgeBits, n: usize, total_cost: u64) -> EdgeSet {
        EdgeSet { bits, n, total_cost }
    }

    pub fn empty_for(m: &Model) -> EdgeSet {
        EdgeSet {
            bits: EdgeBits::empty(m.state_count().pow(2)),
            n: m.state_count(),
            total_cost: 0,
        }
    }

    pub fn bits(&self) -> &EdgeBits {
        &self.bits
    }

    pub fn total_cost(&self) -> u64 {
        self.total_cost
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn contains(&self, a: StateId, b: StateId) -> bool {
        self.bits.contains(a.index() * self.n + b.index())
    }

    /// Pairs in canonical order.
    pub fn pairs(&self) -> Vec<(StateId, StateId)> {
        let n = self.n;
        self.bits
            .iter()
            .map(|i| (StateId::from_index(i / n), StateId::from_index(i % n)))
            .collect()
    }

    /// Pairs rendered with state names.
    pub fn named_pairs(&self, m: &Model) -> Vec<(String, String)> {
        self.pairs()
            .into_iter()
            .map(|(a, b)| (m.state_name(a).to_string(), m.state_name(b).to_string()))
            .collect()
    }
}

/// A model together with the traveller's current state.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PointedModel {
    pub model: Model,
    pub point: StateId,
}

impl PointedModel {
    pub fn new(model: Model, point: StateId) -> Self {
        PointedModel { model, point }
    }

    pub fn named(model: Model, point: &str) -> Result<Self, ModelError> {
        let point = model.state_id(point)?;
        Ok(PointedModel { model, point })
    }

    pub fn point_name(&self) -> &str {
        self.model.state_name(self.point)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_state() -> Model {
        ModelBuilder::new(1)
            .states(["s", "t"])
            .edge("s", "t")
            .edge("t", "t")
            .edge("s", "s")
            .atom("p", ["s"])
            .build()
            .unwrap()
    }

    #[test]
    fn states_are_sorted_and_edges_canonical() {
        let m = ModelBuilder::new(1)
            .states(["b", "a"])
            .edge("b", "a")
            .edge("a", "b")
            .build()
            .unwrap();
        assert_eq!(m.state_name(StateId(0)), "a");
        let names: Vec<_> = m.edges().map(|(x, y)| (m.state_name(x), m.state_name(y))).collect();
        assert_eq!(names, vec![("a", "b"), ("b", "a")]);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(
            ModelBuilder::new(1).states(["s", "s"]).edge("s", "s").build(),
            Err(ModelError::DuplicateState("s".into()))
        );
        assert_eq!(
            ModelBuilder::new(1).states(["s", "t"]).edge("s", "t").build(),
            Err(ModelError::NotSerial("t".into()))
        );
        assert_eq!(
            ModelBuilder::new(1).state("s").edge("s", "u").build(),
            Err(ModelError::UndeclaredState("u".into()))
        );
        assert_eq!(
            ModelBuilder::new(0).state("s").edge("s", "s").build(),
            Err(ModelError::NonPositiveCost(0))
        );
    }

    #[test]
    fn remove_and_add() {
        let m = two_state();
        let st = m.edge_set_named(&[("s", "t")]).unwrap();
        let smaller = m.remove_edges(&st).unwrap();
        assert_eq!(smaller.edge_count(), 2);
        assert_eq!(smaller.add_edges(&st).unwrap(), m);
        let tt = m.edge_set_named(&[("t", "t")]).unwrap();
        assert!(matches!(m.remove_edges(&tt), Err(ModelError::NotSerial(_))));
        assert!(matches!(m.add_edges(&st), Err(ModelError::EdgePresent(..))));
        let ts = m.edge_set_named(&[("t", "s")]).unwrap();
        assert!(matches!(m.remove_edges(&ts), Err(ModelError::EdgeAbsent(..))));
    }

    #[test]
    fn size_counts_every_component() {
        // 2 states, 3 edges, 1 occurrence, 4 pairs of cost 1.
        assert_eq!(two_state().size().unwrap(), 10);
    }

    #[test]
    fn edge_bits_iterate_in_order() {
        let mut b = EdgeBits::empty(130);
        for i in [129, 3, 64, 0] {
            b.insert(i);
        }
        assert_eq!(b.iter().collect::<Vec<_>>(), vec![0, 3, 64, 129]);
        assert_eq!(b.len(), 4);
        b.remove(64);
        assert!(!b.contains(64));
    }
}
