//! The model checker.
//!
//! Formulas are brought into negation normal form and flattened into an
//! arena. `X` is decided by direct search over the two quantifier levels of
//! a round. `U` is a reachability game and `R` the complement of the
//! reachability game for the negated operands with both quantifier levels
//! swapped; both are solved by [`game::Game`].
//!
//! A `U` objective holds iff the min-max number of rounds needed to reach
//! the goal is at most the branching depth. In sabotage and creation games
//! the edge set only shrinks (grows), so no play can revisit a position
//! after a change and the distance, when finite, is below the depth bound;
//! the fixpoint is then exact. In update games the depth is capped and a
//! win whose justification is longer than the cap is reported as an error
//! instead of a guess.

use std::sync::Arc;

use rayon::prelude::*;
use rustc_hash::FxHashMap;
use serde::Serialize;
use thiserror::Error;

use crate::model::{EdgeBits, Frame, Model, ModelError, PointedModel};
use crate::syntax::{to_nnf, Flavor, Formula, ParseError, StrategicOp};

mod game;
mod moves;
mod witness;

pub(crate) use moves::{Pos, Round};
pub use witness::{position_digest, verify_witness, StrategyTable, TableEntry, TraceStep, WitnessError};

/// Default cap on the update-game branching depth.
pub const DEFAULT_SUL_DEPTH_CAP: u64 = 10_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckerConfig {
    /// Cache subformula verdicts per position.
    pub memoization: bool,
    /// Cap applied to the update-game branching depth.
    pub sul_depth_cap: u64,
    /// Abort once this many game positions have been expanded.
    pub max_positions: Option<u64>,
    /// Evaluate the first round's choices of a top-level `X` in parallel.
    pub parallel: bool,
    /// Extract a strategy for a true existential verdict.
    pub witness: bool,
}

impl Default for CheckerConfig {
    fn default() -> Self {
        CheckerConfig {
            memoization: true,
            sul_depth_cap: DEFAULT_SUL_DEPTH_CAP,
            max_positions: Some(50_000_000),
            parallel: false,
            witness: false,
        }
    }
}

impl CheckerConfig {
    /// Defaults, with `SULCHECK_DEPTH_CAP` overriding the depth cap.
    pub fn from_env() -> Self {
        let mut cfg = CheckerConfig::default();
        if let Some(cap) = std::env::var("SULCHECK_DEPTH_CAP")
            .ok()
            .and_then(|v| v.trim().parse().ok())
        {
            cfg.sul_depth_cap = cap;
        }
        cfg
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Stats {
    pub positions_explored: u64,
    pub memo_hits: u64,
}

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub value: bool,
    pub witness: Option<StrategyTable>,
    pub trace: Option<Vec<TraceStep>>,
    pub stats: Stats,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error(transparent)]
    Formula(#[from] ParseError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("resource cap exceeded after exploring {positions} positions")]
    PositionCap { positions: u64 },
    #[error("resource cap exceeded: a strategy needs {needed} rounds but the depth cap is {cap}")]
    DepthCap { needed: u64, cap: u64 },
}

/// The branching depth for a model: an upper bound on the number of rounds
/// after which no new position can appear. Saturates at `u64::MAX`.
pub fn br_depth(m: &Model, flavor: Flavor) -> u64 {
    let s = m.state_count() as u64;
    let e = m.edge_count() as u64;
    match flavor {
        Flavor::Sdl => (e + 1).saturating_mul(s),
        Flavor::Scl => (s * s - e + 1).saturating_mul(s),
        Flavor::Sul => {
            let bits = s.saturating_mul(s);
            if bits >= 64 {
                u64::MAX
            } else {
                (1u64 << bits).saturating_mul(s)
            }
        }
    }
}

pub(crate) type NodeId = u32;

#[derive(Debug, Clone)]
pub(crate) enum Node {
    Const(bool),
    Lit(Vec<bool>, bool),
    And(NodeId, NodeId),
    Or(NodeId, NodeId),
    Next(StrategicOp, NodeId),
    Until(StrategicOp, NodeId, NodeId),
    Release(StrategicOp, NodeId, NodeId),
}

/// An NNF formula flattened for evaluation.
#[derive(Debug, Clone)]
pub(crate) struct Arena {
    pub nodes: Vec<Node>,
    pub root: NodeId,
}

impl Arena {
    pub fn compile(f: &Formula, m: &Model) -> Result<Arena, CheckError> {
        let mut arena = Arena {
            nodes: Vec::new(),
            root: 0,
        };
        arena.root = arena.add(&to_nnf(f), m)?;
        Ok(arena)
    }

    fn push(&mut self, n: Node) -> NodeId {
        self.nodes.push(n);
        (self.nodes.len() - 1) as NodeId
    }

    fn add(&mut self, f: &Formula, m: &Model) -> Result<NodeId, CheckError> {
        let truth = |a: &str| m.states().map(|s| m.holds(a, s)).collect::<Vec<_>>();
        let node = match f {
            Formula::True => Node::Const(true),
            Formula::False => Node::Const(false),
            Formula::Atom(a) => Node::Lit(truth(a), true),
            Formula::Not(inner) => match inner.as_ref() {
                Formula::Atom(a) => Node::Lit(truth(a), false),
                _ => unreachable!("input is in negation normal form"),
            },
            Formula::And(a, b) => {
                let (a, b) = (self.add(a, m)?, self.add(b, m)?);
                Node::And(a, b)
            }
            Formula::Or(a, b) => {
                let (a, b) = (self.add(a, m)?, self.add(b, m)?);
                Node::Or(a, b)
            }
            Formula::Strategic(op, path) => match path.as_ref() {
                Formula::Next(a) => {
                    let a = self.add(a, m)?;
                    Node::Next(*op, a)
                }
                Formula::Until(a, b) => {
                    let (a, b) = (self.add(a, m)?, self.add(b, m)?);
                    Node::Until(*op, a, b)
                }
                Formula::Release(a, b) => {
                    let (a, b) = (self.add(a, m)?, self.add(b, m)?);
                    Node::Release(*op, a, b)
                }
                _ => return Err(ParseError::MissingPath(op.to_string()).into()),
            },
            Formula::Next(_) => return Err(ParseError::PathOutsideStrategic("X").into()),
            Formula::Until(..) => return Err(ParseError::PathOutsideStrategic("U").into()),
            Formula::Release(..) => return Err(ParseError::PathOutsideStrategic("R").into()),
            Formula::Implies(..) | Formula::Iff(..) => {
                unreachable!("input is in negation normal form")
            }
        };
        Ok(self.push(node))
    }
}

/// Evaluation state shared by all games of one check.
pub(crate) struct Engine<'a> {
    model: &'a Model,
    arena: &'a Arena,
    cfg: &'a CheckerConfig,
    depth: u64,
    depth_is_cap: bool,
    memo: FxHashMap<(EdgeBits, u32, NodeId), bool>,
    pub stats: Stats,
}

impl<'a> Engine<'a> {
    pub fn new(model: &'a Model, arena: &'a Arena, cfg: &'a CheckerConfig, flavor: Option<Flavor>) -> Self {
        let (depth, depth_is_cap) = match flavor {
            Some(Flavor::Sul) => {
                let full = br_depth(model, Flavor::Sul);
                (full.min(cfg.sul_depth_cap), full > cfg.sul_depth_cap)
            }
            Some(fl) => (br_depth(model, fl), false),
            None => (0, false),
        };
        Engine {
            model,
            arena,
            cfg,
            depth,
            depth_is_cap,
            memo: FxHashMap::default(),
            stats: Stats::default(),
        }
    }

    pub fn frame(&self) -> &'a Frame {
        self.model.frame()
    }

    pub fn depth(&self) -> u64 {
        self.depth
    }

    pub fn count_position(&mut self) -> Result<(), CheckError> {
        self.stats.positions_explored += 1;
        match self.cfg.max_positions {
            Some(cap) if self.stats.positions_explored > cap => Err(CheckError::PositionCap {
                positions: self.stats.positions_explored,
            }),
            _ => Ok(()),
        }
    }

    pub fn eval(&mut self, pos: &Pos, id: NodeId) -> Result<bool, CheckError> {
        match &self.arena.nodes[id as usize] {
            Node::Const(b) => return Ok(*b),
            Node::Lit(truth, positive) => return Ok(truth[pos.point as usize] == *positive),
            Node::And(a, b) => {
                let (a, b) = (*a, *b);
                return Ok(self.eval(pos, a)? && self.eval(pos, b)?);
            }
            Node::Or(a, b) => {
                let (a, b) = (*a, *b);
                return Ok(self.eval(pos, a)? || self.eval(pos, b)?);
            }
            _ => {}
        }
        if self.cfg.memoization {
            if let Some(&v) = self.memo.get(&(pos.edges.clone(), pos.point, id)) {
                self.stats.memo_hits += 1;
                return Ok(v);
            }
        }
        let v = self.eval_strategic(pos, id)?;
        if self.cfg.memoization {
            self.memo.insert((pos.edges.clone(), pos.point, id), v);
        }
        Ok(v)
    }

    fn eval_strategic(&mut self, pos: &Pos, id: NodeId) -> Result<bool, CheckError> {
        match self.arena.nodes[id as usize].clone() {
            Node::Next(op, a) => Ok(self.next(pos, op, a)?.is_some()),
            Node::Until(op, a, b) => {
                let mut g = self.until_game(op, a, b);
                self.until(&mut g, pos)
            }
            Node::Release(op, a, b) => {
                let mut g = self.release_game(op, a, b);
                self.release(&mut g, pos)
            }
            _ => unreachable!("handled by eval"),
        }
    }

    /// Decide `op X a`, returning the first winning proponent choice for a
    /// non-dual operator (any index for a dual one) when it holds.
    pub fn next(&mut self, pos: &Pos, op: StrategicOp, a: NodeId) -> Result<Option<usize>, CheckError> {
        self.count_position()?;
        let round = Round::new(self.frame(), &pos.edges, op.mode);
        for i in 0..round.proponent.len() {
            let mut all = true;
            let mut any = false;
            for r in round.responses(self.frame(), pos, i) {
                if self.eval(&r, a)? {
                    any = true;
                    if op.dual {
                        break;
                    }
                } else {
                    all = false;
                    if !op.dual {
                        break;
                    }
                }
            }
            match (op.dual, all, any) {
                (false, true, _) => return Ok(Some(i)),
                (true, _, false) => return Ok(None),
                _ => {}
            }
        }
        Ok(if op.dual { Some(0) } else { None })
    }

    pub fn until_game(&self, op: StrategicOp, a: NodeId, b: NodeId) -> game::Game {
        game::Game::new(game::Objective {
            mode: op.mode,
            goal: b,
            invariant: a,
            negate: false,
            exists_first: !op.dual,
        })
    }

    /// The opponent's reachability game for `op (a R b)`.
    pub fn release_game(&self, op: StrategicOp, a: NodeId, b: NodeId) -> game::Game {
        game::Game::new(game::Objective {
            mode: op.mode,
            goal: b,
            invariant: a,
            negate: true,
            exists_first: op.dual,
        })
    }

    pub fn until(&mut self, g: &mut game::Game, pos: &Pos) -> Result<bool, CheckError> {
        let root = g.solve(self, pos.clone())?;
        self.bounded(g, root)
    }

    pub fn release(&mut self, g: &mut game::Game, pos: &Pos) -> Result<bool, CheckError> {
        let root = g.solve(self, pos.clone())?;
        self.bounded(g, root).map(|won| !won)
    }

    fn bounded(&self, g: &game::Game, root: u32) -> Result<bool, CheckError> {
        if !g.won(root) {
            return Ok(false);
        }
        let needed = g.nodes[root as usize].dist;
        if needed <= self.depth {
            Ok(true)
        } else if self.depth_is_cap {
            Err(CheckError::DepthCap {
                needed,
                cap: self.depth,
            })
        } else {
            // Unreachable for sabotage and creation games, see module docs.
            Ok(false)
        }
    }
}

pub(crate) fn root_pos(pm: &PointedModel) -> Pos {
    Pos {
        edges: pm.model.edge_bits().clone(),
        point: pm.point.index() as u32,
    }
}

fn prepare(pm: &PointedModel, f: &Formula) -> Result<(Arena, Option<Flavor>), CheckError> {
    let flavor = f.flavor()?;
    f.validate_state_formula()?;
    let arena = Arena::compile(f, &pm.model)?;
    Ok((arena, flavor))
}

/// Decide `(M, s) |= f`.
pub fn check(pm: &PointedModel, f: &Formula, cfg: &CheckerConfig) -> Result<CheckResult, CheckError> {
    let (arena, flavor) = prepare(pm, f)?;
    let pos = root_pos(pm);
    let root = arena.root;

    if cfg.parallel {
        if let Node::Next(op, a) = arena.nodes[root as usize] {
            return check_next_parallel(pm, &arena, flavor, cfg, op, a);
        }
    }

    let mut engine = Engine::new(&pm.model, &arena, cfg, flavor);
    let (value, witness) = match arena.nodes[root as usize].clone() {
        Node::Next(op, a) if cfg.witness && !op.dual => {
            let choice = engine.next(&pos, op, a)?;
            let table = choice.map(|i| witness::from_next(&pm.model, &pos, op, i));
            (choice.is_some(), table)
        }
        Node::Until(op, a, b) if cfg.witness && !op.dual => {
            let mut g = engine.until_game(op, a, b);
            let value = engine.until(&mut g, &pos)?;
            (value, value.then(|| witness::from_until(&pm.model, &g)))
        }
        Node::Release(op, a, b) if cfg.witness && !op.dual => {
            let mut g = engine.release_game(op, a, b);
            let value = engine.release(&mut g, &pos)?;
            (value, value.then(|| witness::from_release(&pm.model, &g)))
        }
        _ => (engine.eval(&pos, root)?, None),
    };
    let trace = witness.as_ref().map(|t| witness::sample_play(pm, t));
    Ok(CheckResult {
        value,
        witness,
        trace,
        stats: engine.stats,
    })
}

fn check_next_parallel(
    pm: &PointedModel,
    arena: &Arena,
    flavor: Option<Flavor>,
    cfg: &CheckerConfig,
    op: StrategicOp,
    a: NodeId,
) -> Result<CheckResult, CheckError> {
    let pos = root_pos(pm);
    let round = Arc::new(Round::new(pm.model.frame(), &pos.edges, op.mode));
    let outcomes: Vec<Result<(bool, bool, Stats), CheckError>> = (0..round.proponent.len())
        .into_par_iter()
        .map(|i| {
            let mut engine = Engine::new(&pm.model, arena, cfg, flavor);
            let mut all = true;
            let mut any = false;
            for r in round.responses(pm.model.frame(), &pos, i) {
                if engine.eval(&r, a)? {
                    any = true;
                } else {
                    all = false;
                }
            }
            Ok((all, any, engine.stats))
        })
        .collect();
    let mut stats = Stats {
        positions_explored: 1,
        memo_hits: 0,
    };
    let mut chosen = None;
    let mut value = op.dual;
    for (i, o) in outcomes.into_iter().enumerate() {
        let (all, any, s) = o?;
        stats.positions_explored += s.positions_explored;
        stats.memo_hits += s.memo_hits;
        if !op.dual && all && chosen.is_none() {
            chosen = Some(i);
            value = true;
        }
        if op.dual && !any {
            value = false;
        }
    }
    let witness = match chosen {
        Some(i) if cfg.witness => Some(witness::from_next(&pm.model, &pos, op, i)),
        _ => None,
    };
    let trace = witness.as_ref().map(|t| witness::sample_play(pm, t));
    Ok(CheckResult {
        value,
        witness,
        trace,
        stats,
    })
}

/// Verdict only, with default settings.
pub fn holds(pm: &PointedModel, f: &Formula) -> Result<bool, CheckError> {
    check(pm, f, &CheckerConfig::default()).map(|r| r.value)
}
