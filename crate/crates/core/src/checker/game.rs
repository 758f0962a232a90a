//! Reachability games for `U`, solved as the least fixpoint of an AND/OR
//! dependency graph with the local worklist algorithm of Liu and Smolka.
//!
//! Positions are followed by choice nodes (the proponent's commitment for
//! the round), which are followed by positions again. A position satisfying
//! the goal is won outright; one violating the invariant is lost. Values
//! only ever move from 0 to 1, every node is expanded at most once, and the
//! search stops as soon as the root is won.
//!
//! Each won node also records how many rounds its justification needs. That
//! number bounds the min-max distance to the goal from above, which the
//! caller compares against the branching depth.

use super::moves::{Pos, Round};
use super::{CheckError, Engine, NodeId};
use crate::syntax::Mode;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Val {
    Unexplored,
    Zero,
    One,
}

#[derive(Debug)]
pub(crate) enum Kind {
    Position { pos: Pos, round: Option<Round> },
    Choice { parent: u32, index: usize },
}

#[derive(Debug)]
pub(crate) struct GNode {
    pub kind: Kind,
    pub val: Val,
    /// Existential nodes need one won child, universal nodes all of them.
    pub exists: bool,
    pub children: Vec<u32>,
    pub dist: u64,
    /// For won existential nodes, the child that justifies the win.
    pub via: u32,
    cursor: usize,
    deps: Vec<Edge>,
}

/// A hyperedge: either one child of an existential node, or all children
/// of a universal node.
#[derive(Debug, Clone, Copy)]
struct Edge {
    src: u32,
    target: Option<u32>,
}

/// What the reaching player is trying to do.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Objective {
    pub mode: Mode,
    pub goal: NodeId,
    pub invariant: NodeId,
    /// Evaluate `!goal` and `!invariant` instead, for release games.
    pub negate: bool,
    /// Whether the reaching player picks the proponent's part of a round.
    pub exists_first: bool,
}

pub(crate) struct Game {
    pub nodes: Vec<GNode>,
    index: rustc_hash::FxHashMap<Pos, u32>,
    pub objective: Objective,
    work: Vec<Edge>,
}

impl std::fmt::Debug for Round {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Round({} / {})", self.proponent.len(), self.opponent.len())
    }
}

impl Game {
    pub fn new(objective: Objective) -> Self {
        Game {
            nodes: Vec::new(),
            index: Default::default(),
            objective,
            work: Vec::new(),
        }
    }

    pub fn position(&self, id: u32) -> &Pos {
        match &self.nodes[id as usize].kind {
            Kind::Position { pos, .. } => pos,
            Kind::Choice { .. } => unreachable!("not a position node"),
        }
    }

    pub fn round(&self, id: u32) -> Option<&Round> {
        match &self.nodes[id as usize].kind {
            Kind::Position { round, .. } => round.as_ref(),
            Kind::Choice { .. } => None,
        }
    }

    fn node(kind: Kind, exists: bool) -> GNode {
        GNode {
            kind,
            val: Val::Unexplored,
            exists,
            children: Vec::new(),
            dist: 0,
            via: u32::MAX,
            cursor: 0,
            deps: Vec::new(),
        }
    }

    fn position_node(&mut self, pos: Pos) -> u32 {
        if let Some(&id) = self.index.get(&pos) {
            return id;
        }
        let id = self.nodes.len() as u32;
        self.index.insert(pos.clone(), id);
        let exists = self.objective.exists_first;
        self.nodes.push(Self::node(Kind::Position { pos, round: None }, exists));
        id
    }

    /// Solve from `root`, returning the root's node id.
    pub fn solve(&mut self, engine: &mut Engine<'_>, root: Pos) -> Result<u32, CheckError> {
        let root = self.position_node(root);
        self.explore(engine, root)?;
        while let Some(e) = self.work.pop() {
            if self.nodes[root as usize].val == Val::One {
                break;
            }
            self.process(engine, e)?;
        }
        Ok(root)
    }

    pub fn won(&self, id: u32) -> bool {
        self.nodes[id as usize].val == Val::One
    }

    fn process(&mut self, engine: &mut Engine<'_>, e: Edge) -> Result<(), CheckError> {
        let v = e.src as usize;
        if self.nodes[v].val == Val::One {
            return Ok(());
        }
        let wait_on = match e.target {
            Some(t) => match self.nodes[t as usize].val {
                Val::One => {
                    self.win(v, Some(t));
                    return Ok(());
                }
                _ => t,
            },
            None => {
                let node = &self.nodes[v];
                let mut c = node.cursor;
                while c < node.children.len() && self.nodes[node.children[c] as usize].val == Val::One {
                    c += 1;
                }
                self.nodes[v].cursor = c;
                let node = &self.nodes[v];
                if c == node.children.len() {
                    self.win(v, None);
                    return Ok(());
                }
                // Prefer waiting on a child already known to be lost over
                // expanding a fresh one.
                let lost = node.children[c..]
                    .iter()
                    .copied()
                    .find(|&ch| self.nodes[ch as usize].val == Val::Zero);
                lost.unwrap_or(node.children[c])
            }
        };
        if self.nodes[wait_on as usize].val == Val::Unexplored {
            self.nodes[wait_on as usize].deps.push(e);
            self.explore(engine, wait_on)?;
        } else {
            self.nodes[wait_on as usize].deps.push(e);
        }
        Ok(())
    }

    fn win(&mut self, v: usize, via: Option<u32>) {
        let is_choice = matches!(self.nodes[v].kind, Kind::Choice { .. });
        let child_dist = match via {
            Some(c) => self.nodes[c as usize].dist,
            None => self.nodes[v]
                .children
                .iter()
                .map(|&c| self.nodes[c as usize].dist)
                .max()
                .unwrap_or(0),
        };
        let node = &mut self.nodes[v];
        node.val = Val::One;
        node.via = via.unwrap_or(u32::MAX);
        node.dist = if is_choice {
            child_dist.saturating_add(1)
        } else {
            child_dist
        };
        let deps = std::mem::take(&mut node.deps);
        self.work.extend(deps);
    }

    fn push_edges(&mut self, v: u32) {
        let node = &self.nodes[v as usize];
        if node.exists {
            let edges: Vec<Edge> = node
                .children
                .iter()
                .rev()
                .map(|&c| Edge {
                    src: v,
                    target: Some(c),
                })
                .collect();
            self.work.extend(edges);
        } else {
            self.work.push(Edge { src: v, target: None });
        }
    }

    fn explore(&mut self, engine: &mut Engine<'_>, v: u32) -> Result<(), CheckError> {
        self.nodes[v as usize].val = Val::Zero;
        match self.nodes[v as usize].kind {
            Kind::Position { ref pos, .. } => {
                let pos = pos.clone();
                engine.count_position()?;
                let obj = self.objective;
                let goal = engine.eval(&pos, obj.goal)? != obj.negate;
                if goal {
                    // A universal node without children is won at once.
                    self.nodes[v as usize].exists = false;
                    self.push_edges(v);
                    return Ok(());
                }
                if engine.eval(&pos, obj.invariant)? == obj.negate {
                    return Ok(());
                }
                let round = Round::new(engine.frame(), &pos.edges, obj.mode);
                let k = round.proponent.len();
                let mut children = Vec::with_capacity(k);
                for index in 0..k {
                    let id = self.nodes.len() as u32;
                    self.nodes
                        .push(Self::node(Kind::Choice { parent: v, index }, !obj.exists_first));
                    children.push(id);
                }
                let node = &mut self.nodes[v as usize];
                node.children = children;
                if let Kind::Position { round: r, .. } = &mut node.kind {
                    *r = Some(round);
                }
            }
            Kind::Choice { parent, index } => {
                let pos = self.position(parent).clone();
                let responses = self
                    .round(parent)
                    .expect("parent expanded")
                    .responses(engine.frame(), &pos, index);
                let children = responses.into_iter().map(|p| self.position_node(p)).collect();
                self.nodes[v as usize].children = children;
            }
        }
        self.push_edges(v);
        Ok(())
    }
}
