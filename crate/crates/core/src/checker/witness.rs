//! Memoryless strategies for the proponent of a top-level operator, and an
//! independent replay that checks them.
//!
//! A table maps positions (by digest) to the proponent's part of the round.
//! Positions where the outcome is already settled need no entry.

use std::collections::{BTreeMap, HashSet};

use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use super::game::{Game, Kind, Val};
use super::moves::{Part, Pos, Round};
use super::{prepare, root_pos, CheckError, CheckerConfig, Engine, Node, NodeId};
use crate::model::{serialize_model, Model, PointedModel, StateId};
use crate::syntax::{to_nnf, Coalition, Formula, Mode, StrategicOp};
use crate::updates::NamedChoice;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableEntry {
    pub point: String,
    pub edges: Vec<(String, String)>,
    pub choice: NamedChoice,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StrategyTable {
    pub operator: String,
    #[serde(skip)]
    pub op: StrategicOp,
    pub entries: BTreeMap<String, TableEntry>,
}

/// One round of a sample play: every edge change and the traveller's move.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub additions: Vec<(String, String)>,
    pub removals: Vec<(String, String)>,
    pub to: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("witnesses exist only for non-dual strategic operators")]
    NotExistential,
    #[error("table was built for {table} but the formula's operator is {formula}")]
    OperatorMismatch { table: String, formula: String },
    #[error("no table entry for position {0}")]
    TableGap(String),
    #[error("choice at {digest} costs {cost}, over the budget of {budget}")]
    BudgetViolated { digest: String, cost: u64, budget: u64 },
    #[error("choice at {digest} is not legal: {reason}")]
    IllegalChoice { digest: String, reason: String },
    #[error(transparent)]
    Check(#[from] CheckError),
}

/// SHA-256 of the canonical text of a pointed model.
pub fn position_digest(pm: &PointedModel) -> String {
    let text = serialize_model(&pm.model, Some(pm.point));
    Sha256::digest(text.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn pointed(model: &Model, pos: &Pos) -> PointedModel {
    PointedModel::new(
        model.with_edges(pos.edges.clone()),
        StateId::from_index(pos.point as usize),
    )
}

fn named(model: &Model, bits: &crate::model::EdgeBits) -> Vec<(String, String)> {
    bits.iter()
        .map(|i| {
            let (a, b) = model.frame().pair_of(i);
            (model.state_name(a).to_string(), model.state_name(b).to_string())
        })
        .collect()
}

fn entry(model: &Model, pos: &Pos, part: &Part) -> (String, TableEntry) {
    let pm = pointed(model, pos);
    let e = TableEntry {
        point: pm.point_name().to_string(),
        edges: named(model, &pos.edges),
        choice: NamedChoice {
            additions: named(model, &part.add),
            removals: named(model, &part.rem),
        },
    };
    (position_digest(&pm), e)
}

fn table(op: StrategicOp) -> StrategyTable {
    StrategyTable {
        operator: op.to_string(),
        op,
        entries: BTreeMap::new(),
    }
}

pub(crate) fn from_next(model: &Model, pos: &Pos, op: StrategicOp, choice: usize) -> StrategyTable {
    let round = Round::new(model.frame(), &pos.edges, op.mode);
    let mut t = table(op);
    let (k, e) = entry(model, pos, &round.proponent[choice]);
    t.entries.insert(k, e);
    t
}

fn choice_index(g: &Game, choice_node: u32) -> usize {
    match g.nodes[choice_node as usize].kind {
        Kind::Choice { index, .. } => index,
        Kind::Position { .. } => unreachable!("not a choice node"),
    }
}

/// Follow the justification of a won `U` game from its root.
pub(crate) fn from_until(model: &Model, g: &Game) -> StrategyTable {
    let mut t = table(strategic(g));
    let mut seen = HashSet::new();
    let mut stack = vec![0u32];
    while let Some(v) = stack.pop() {
        if !seen.insert(v) {
            continue;
        }
        let node = &g.nodes[v as usize];
        debug_assert_eq!(node.val, Val::One);
        if node.children.is_empty() {
            continue;
        }
        let c = node.via;
        let round = g.round(v).expect("expanded position");
        let (k, e) = entry(model, g.position(v), &round.proponent[choice_index(g, c)]);
        t.entries.insert(k, e);
        stack.extend(g.nodes[c as usize].children.iter().rev());
    }
    t
}

/// Stay inside the opponent's lost region of a `R` game.
pub(crate) fn from_release(model: &Model, g: &Game) -> StrategyTable {
    let mut t = table(strategic(g));
    let mut seen = HashSet::new();
    let mut stack = vec![0u32];
    while let Some(v) = stack.pop() {
        if !seen.insert(v) {
            continue;
        }
        let node = &g.nodes[v as usize];
        if node.children.is_empty() {
            continue;
        }
        let c = node
            .children
            .iter()
            .copied()
            .find(|&c| g.nodes[c as usize].val == Val::Zero)
            .expect("a lost universal node has a lost child");
        let round = g.round(v).expect("expanded position");
        let (k, e) = entry(model, g.position(v), &round.proponent[choice_index(g, c)]);
        t.entries.insert(k, e);
        stack.extend(g.nodes[c as usize].children.iter().rev());
    }
    t
}

fn strategic(g: &Game) -> StrategicOp {
    StrategicOp {
        mode: g.objective.mode,
        dual: false,
    }
}

/// A play that follows the table and lets the opponent take its first
/// option every round, until the table runs out or a position repeats.
pub fn sample_play(pm: &PointedModel, t: &StrategyTable) -> Vec<TraceStep> {
    let model = &pm.model;
    let mut pos = root_pos(pm);
    let mut seen = HashSet::new();
    let mut steps = Vec::new();
    while seen.insert(pos.clone()) && steps.len() < 64 {
        let here = pointed(model, &pos);
        let Some(e) = t.entries.get(&position_digest(&here)) else {
            break;
        };
        let Ok(part) = part_from_entry(&here.model, e) else {
            break;
        };
        let mut round = Round::new(model.frame(), &pos.edges, t.op.mode);
        round.proponent = vec![part];
        let Some(next) = round.responses(model.frame(), &pos, 0).into_iter().next() else {
            break;
        };
        steps.push(TraceStep {
            additions: named(model, &next.edges.difference(&pos.edges)),
            removals: named(model, &pos.edges.difference(&next.edges)),
            to: model.state_name(StateId::from_index(next.point as usize)).to_string(),
        });
        pos = next;
    }
    steps
}

fn part_from_entry(model: &Model, e: &TableEntry) -> Result<Part, String> {
    let conv = |pairs: &[(String, String)]| {
        let refs: Vec<(&str, &str)> = pairs.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        model.edge_set_named(&refs).map_err(|e| e.to_string())
    };
    let add = conv(&e.choice.additions)?;
    let rem = conv(&e.choice.removals)?;
    Ok(Part {
        add_cost: add.total_cost(),
        rem_cost: rem.total_cost(),
        add: add.bits().clone(),
        rem: rem.bits().clone(),
    })
}

/// Check that a table entry is something the proponent may actually play.
fn legal(model: &Model, pos: &Pos, mode: Mode, e: &TableEntry, digest: &str) -> Result<Part, WitnessError> {
    let illegal = |reason: String| WitnessError::IllegalChoice {
        digest: digest.to_string(),
        reason,
    };
    let part = part_from_entry(model, e).map_err(illegal)?;
    let (may_add, may_remove) = match mode {
        Mode::Demon(_) => (false, true),
        Mode::Angel(_) => (true, false),
        Mode::Update { coalition, .. } => match coalition {
            Coalition::BOTH => (true, true),
            Coalition::ANGEL => (true, false),
            Coalition::DEMON => (false, true),
            Coalition::NONE => (false, false),
        },
    };
    if !may_add && !part.add.is_empty() {
        return Err(illegal("the proponent may not add edges".into()));
    }
    if !may_remove && !part.rem.is_empty() {
        return Err(illegal("the proponent may not remove edges".into()));
    }
    if !part.add.is_disjoint(&pos.edges) {
        return Err(illegal("adds an edge that is already present".into()));
    }
    if !part.rem.is_subset(&pos.edges) {
        return Err(illegal("removes an edge that is not present".into()));
    }
    if !model.with_edges(pos.edges.difference(&part.rem)).is_serial() {
        return Err(illegal("removal breaks seriality".into()));
    }
    for (cost, budget) in [
        (part.add_cost, mode.angel_budget()),
        (part.rem_cost, mode.demon_budget()),
    ] {
        if cost > budget {
            return Err(WitnessError::BudgetViolated {
                digest: digest.to_string(),
                cost,
                budget,
            });
        }
    }
    Ok(part)
}

struct Replay<'a, 'e> {
    model: &'a Model,
    table: &'a StrategyTable,
    engine: Engine<'e>,
}

impl Replay<'_, '_> {
    /// Every position the opponent may move to against the table's choice.
    fn responses(&self, pos: &Pos) -> Result<Vec<Pos>, WitnessError> {
        let pm = pointed(self.model, pos);
        let digest = position_digest(&pm);
        let e = self
            .table
            .entries
            .get(&digest)
            .ok_or_else(|| WitnessError::TableGap(digest.clone()))?;
        let part = legal(self.model, pos, self.table.op.mode, e, &digest)?;
        let mut round = Round::new(self.model.frame(), &pos.edges, self.table.op.mode);
        round.proponent = vec![part];
        Ok(round.responses(self.model.frame(), pos, 0))
    }

    fn next(&mut self, root: &Pos, a: NodeId) -> Result<bool, WitnessError> {
        for r in self.responses(root)? {
            if !self.engine.eval(&r, a)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Every play reaches `b` through `a`-positions within the depth bound.
    fn until(&mut self, root: &Pos, a: NodeId, b: NodeId) -> Result<bool, WitnessError> {
        enum Mark {
            Open,
            Done(u64),
        }
        let mut marks: rustc_hash::FxHashMap<Pos, Mark> = Default::default();
        // Frames: position, its responses, next response index, longest so far.
        let mut stack: Vec<(Pos, Vec<Pos>, usize, u64)> = Vec::new();
        let mut result: Option<u64> = None;
        let mut pending = Some(root.clone());
        loop {
            if let Some(p) = pending.take() {
                match marks.get(&p) {
                    Some(Mark::Open) => return Ok(false),
                    Some(Mark::Done(l)) => result = Some(*l),
                    None => {
                        if self.engine.eval(&p, b)? {
                            marks.insert(p, Mark::Done(0));
                            result = Some(0);
                        } else if !self.engine.eval(&p, a)? {
                            return Ok(false);
                        } else {
                            let rs = self.responses(&p)?;
                            marks.insert(p.clone(), Mark::Open);
                            stack.push((p, rs, 0, 0));
                            result = None;
                        }
                    }
                }
            }
            let Some(top) = stack.last_mut() else { break };
            if let Some(l) = result.take() {
                top.3 = top.3.max(l + 1);
            }
            if top.2 < top.1.len() {
                pending = Some(top.1[top.2].clone());
                top.2 += 1;
            } else {
                let (p, _, _, longest) = stack.pop().expect("non-empty");
                marks.insert(p, Mark::Done(longest));
                result = Some(longest);
            }
        }
        Ok(result.is_some_and(|l| l <= self.engine.depth()))
    }

    /// No play reaches a position violating `b` before one satisfying `a`.
    fn release(&mut self, root: &Pos, a: NodeId, b: NodeId) -> Result<bool, WitnessError> {
        let mut seen = HashSet::new();
        let mut stack = vec![root.clone()];
        while let Some(p) = stack.pop() {
            if !seen.insert(p.clone()) {
                continue;
            }
            if !self.engine.eval(&p, b)? {
                return Ok(false);
            }
            if self.engine.eval(&p, a)? {
                continue;
            }
            stack.extend(self.responses(&p)?);
        }
        Ok(true)
    }
}

/// Replay a strategy table against every opponent behaviour and report
/// whether it enforces the top-level path formula of `f`.
pub fn verify_witness(
    pm: &PointedModel,
    f: &Formula,
    t: &StrategyTable,
    cfg: &CheckerConfig,
) -> Result<bool, WitnessError> {
    let op = match to_nnf(f) {
        Formula::Strategic(op, _) if !op.dual => op,
        _ => return Err(WitnessError::NotExistential),
    };
    if op != t.op {
        return Err(WitnessError::OperatorMismatch {
            table: t.op.to_string(),
            formula: op.to_string(),
        });
    }
    let (arena, flavor) = prepare(pm, f)?;
    let cfg = CheckerConfig {
        witness: false,
        parallel: false,
        ..cfg.clone()
    };
    let root = root_pos(pm);
    let top = arena.nodes[arena.root as usize].clone();
    let mut replay = Replay {
        model: &pm.model,
        table: t,
        engine: Engine::new(&pm.model, &arena, &cfg, flavor),
    };
    match top {
        Node::Next(_, a) => replay.next(&root, a),
        Node::Until(_, a, b) => replay.until(&root, a, b),
        Node::Release(_, a, b) => replay.release(&root, a, b),
        _ => Err(WitnessError::NotExistential),
    }
}
