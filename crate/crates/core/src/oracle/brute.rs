//! Reference semantics by exhaustive enumeration.
//!
//! Moves are generated from scratch by walking every subset of present
//! (absent) pairs and keeping those within budget that leave every state an
//! outgoing edge. A strategic operator is decided by quantifying over the
//! proponent's move, the opponent's move and the traveller's successor.
//! Duals are evaluated as `!<op> !path`, negation directly, and no normal
//! form is computed.
//!
//! [`brute_force_next`] covers the `X`-only fragment. [`unfold_check`] also
//! covers `U` and `R` by literally unrolling them for the branching depth
//! number of rounds.

use std::collections::HashMap;

use thiserror::Error;

use crate::model::{Model, PointedModel, StateId};
use crate::syntax::{Coalition, Flavor, Formula, Mode, StrategicOp};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleLimits {
    pub max_states: usize,
    pub max_budget: u64,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits {
            max_states: 3,
            max_budget: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("instance exceeds the oracle's size bound: {0}")]
    TooLarge(String),
    #[error("`{0}` is outside the next-time fragment")]
    NotNextTime(&'static str),
    #[error("path formula outside a strategic operator")]
    PathOutsideStrategic,
}

type Pair = (StateId, StateId);

#[derive(Debug, Clone, Default)]
struct Move {
    add: Vec<Pair>,
    rem: Vec<Pair>,
}

fn subsets(pairs: &[Pair]) -> impl Iterator<Item = Vec<Pair>> + '_ {
    (0u64..1 << pairs.len()).map(move |mask| {
        pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, p)| *p)
            .collect()
    })
}

fn cost(m: &Model, set: &[Pair]) -> u64 {
    set.iter().map(|&(a, b)| m.cost(a, b)).sum()
}

fn removals(m: &Model, budget: u64) -> Vec<Move> {
    let present: Vec<Pair> = m.edges().collect();
    subsets(&present)
        .filter(|set| cost(m, set) <= budget)
        .filter(|set| m.states().all(|s| present.iter().any(|p| p.0 == s && !set.contains(p))))
        .map(|rem| Move { add: vec![], rem })
        .collect()
}

fn additions(m: &Model, budget: u64) -> Vec<Move> {
    let absent: Vec<Pair> = m
        .states()
        .flat_map(|a| m.states().map(move |b| (a, b)))
        .filter(|&(a, b)| !m.has_edge(a, b))
        .collect();
    subsets(&absent)
        .filter(|set| cost(m, set) <= budget)
        .map(|add| Move { add, rem: vec![] })
        .collect()
}

fn combine(xs: &[Move], ys: &[Move]) -> Vec<Move> {
    let mut out = Vec::new();
    for x in xs {
        for y in ys {
            out.push(Move {
                add: [x.add.clone(), y.add.clone()].concat(),
                rem: [x.rem.clone(), y.rem.clone()].concat(),
            });
        }
    }
    out
}

/// The proponent's and the opponent's moves for one round.
fn moves(m: &Model, mode: Mode) -> (Vec<Move>, Vec<Move>) {
    let idle = vec![Move::default()];
    match mode {
        Mode::Demon(n) => (removals(m, n), idle),
        Mode::Angel(n) => (additions(m, n), idle),
        Mode::Update {
            coalition,
            angel_budget,
            demon_budget,
        } => {
            let angel = additions(m, angel_budget);
            let demon = removals(m, demon_budget);
            let Coalition {
                angel: with_angel,
                demon: with_demon,
            } = coalition;
            let pick = |on: bool, v: &Vec<Move>| if on { v.clone() } else { idle.clone() };
            (
                combine(&pick(with_angel, &angel), &pick(with_demon, &demon)),
                combine(&pick(!with_angel, &angel), &pick(!with_demon, &demon)),
            )
        }
    }
}

fn apply(m: &Model, p: &Move, o: &Move) -> Model {
    let rem = m.edge_set(p.rem.iter().chain(&o.rem).copied()).expect("same frame");
    let add = m.edge_set(p.add.iter().chain(&o.add).copied()).expect("same frame");
    m.remove_edges(&rem)
        .and_then(|r| r.add_edges(&add))
        .expect("moves are legal by construction")
}

fn check_limits(pm: &PointedModel, f: &Formula, limits: &OracleLimits) -> Result<(), OracleError> {
    if pm.model.state_count() > limits.max_states {
        return Err(OracleError::TooLarge(format!(
            "{} states, limit {}",
            pm.model.state_count(),
            limits.max_states
        )));
    }
    for op in f.strategic_ops() {
        let b = op.mode.angel_budget().max(op.mode.demon_budget());
        if b > limits.max_budget {
            return Err(OracleError::TooLarge(format!(
                "budget {b}, limit {}",
                limits.max_budget
            )));
        }
    }
    Ok(())
}

/// Memo key: model, point, address of the `U`/`R` node, whether the
/// operands are read negated, and the remaining rounds. Only nodes of the
/// caller's formula are keyed, so addresses stay unique for the whole run.
type Key = (Model, StateId, usize, bool, i64);

struct Oracle {
    unfold: bool,
    memo: HashMap<Key, bool>,
}

fn depth(m: &Model, flavor: Flavor) -> i64 {
    let s = m.state_count() as i64;
    let e = m.edge_count() as i64;
    match flavor {
        Flavor::Sdl => (e + 1) * s,
        Flavor::Scl => (s * s - e + 1) * s,
        Flavor::Sul => (1i64 << (s * s)) * s,
    }
}

impl Oracle {
    fn eval(&mut self, m: &Model, s: StateId, f: &Formula) -> Result<bool, OracleError> {
        Ok(match f {
            Formula::True => true,
            Formula::False => false,
            Formula::Atom(a) => m.holds(a, s),
            Formula::Not(a) => !self.eval(m, s, a)?,
            Formula::And(a, b) => self.eval(m, s, a)? && self.eval(m, s, b)?,
            Formula::Or(a, b) => self.eval(m, s, a)? || self.eval(m, s, b)?,
            Formula::Implies(a, b) => !self.eval(m, s, a)? || self.eval(m, s, b)?,
            Formula::Iff(a, b) => self.eval(m, s, a)? == self.eval(m, s, b)?,
            Formula::Next(_) | Formula::Until(..) | Formula::Release(..) => {
                return Err(OracleError::PathOutsideStrategic)
            }
            Formula::Strategic(op, path) => self.strategic(m, s, *op, path)?,
        })
    }

    /// A dual operator is `!<op> !path`: the non-dual operator over the
    /// path with negated operands (`!X a = X !a`, `!(a U b) = !a R !b`,
    /// `!(a R b) = !a U !b`), then negated.
    fn strategic(&mut self, m: &Model, s: StateId, op: StrategicOp, path: &Formula) -> Result<bool, OracleError> {
        let neg = op.dual;
        let mode = op.mode;
        let v = match path {
            Formula::Next(a) => self.round(m, s, mode, &mut |o, m2, s2| Ok(o.eval(m2, s2, a)? != neg))?,
            Formula::Until(a, b) | Formula::Release(a, b) if self.unfold => {
                let k = depth(m, mode.flavor());
                let node = path as *const Formula as usize;
                let until = matches!(path, Formula::Until(..)) != neg;
                let step = Step { mode, node, a, b, neg };
                if until {
                    self.until(m, s, &step, k)?
                } else {
                    self.release(m, s, &step, k)?
                }
            }
            Formula::Until(..) => return Err(OracleError::NotNextTime("U")),
            Formula::Release(..) => return Err(OracleError::NotNextTime("R")),
            _ => return Err(OracleError::PathOutsideStrategic),
        };
        Ok(v != neg)
    }

    /// Some proponent move such that every opponent move and every
    /// traveller step satisfies `next`.
    fn round(
        &mut self,
        m: &Model,
        s: StateId,
        mode: Mode,
        next: &mut dyn FnMut(&mut Oracle, &Model, StateId) -> Result<bool, OracleError>,
    ) -> Result<bool, OracleError> {
        let (prop, opp) = moves(m, mode);
        'proponent: for p in &prop {
            for o in &opp {
                let m2 = apply(m, p, o);
                for s2 in m2.successors(s) {
                    if !next(self, &m2, s2)? {
                        continue 'proponent;
                    }
                }
            }
            return Ok(true);
        }
        Ok(false)
    }

    fn operand(&mut self, m: &Model, s: StateId, f: &Formula, neg: bool) -> Result<bool, OracleError> {
        Ok(self.eval(m, s, f)? != neg)
    }

    /// `U_k = b | (a & round(U_{k-1}))`, `U_{-1} = false`.
    fn until(&mut self, m: &Model, s: StateId, st: &Step<'_>, k: i64) -> Result<bool, OracleError> {
        if k < 0 {
            return Ok(false);
        }
        let key = (m.clone(), s, st.node, st.neg, k);
        if let Some(&v) = self.memo.get(&key) {
            return Ok(v);
        }
        let v = self.operand(m, s, st.b, st.neg)?
            || (self.operand(m, s, st.a, st.neg)?
                && self.round(m, s, st.mode, &mut |o, m2, s2| o.until(m2, s2, st, k - 1))?);
        self.memo.insert(key, v);
        Ok(v)
    }

    /// `R_k = b & (a | round(R_{k-1}))`, `R_{-1} = true`.
    fn release(&mut self, m: &Model, s: StateId, st: &Step<'_>, k: i64) -> Result<bool, OracleError> {
        if k < 0 {
            return Ok(true);
        }
        let key = (m.clone(), s, st.node, st.neg, k);
        if let Some(&v) = self.memo.get(&key) {
            return Ok(v);
        }
        let v = self.operand(m, s, st.b, st.neg)?
            && (self.operand(m, s, st.a, st.neg)?
                || self.round(m, s, st.mode, &mut |o, m2, s2| o.release(m2, s2, st, k - 1))?);
        self.memo.insert(key, v);
        Ok(v)
    }
}

/// One `U` or `R` being unrolled.
struct Step<'f> {
    mode: Mode,
    node: usize,
    a: &'f Formula,
    b: &'f Formula,
    neg: bool,
}

/// Decide an `X`-only formula by exhaustive enumeration of moves.
pub fn brute_force_next(pm: &PointedModel, f: &Formula, limits: &OracleLimits) -> Result<bool, OracleError> {
    check_limits(pm, f, limits)?;
    let mut o = Oracle {
        unfold: false,
        memo: HashMap::new(),
    };
    o.eval(&pm.model, pm.point, f)
}

/// Decide any formula by unrolling `U` and `R` for the branching depth of
/// the model where each operator is met. Exponential; tiny inputs only.
pub fn unfold_check(pm: &PointedModel, f: &Formula, limits: &OracleLimits) -> Result<bool, OracleError> {
    check_limits(pm, f, limits)?;
    let mut o = Oracle {
        unfold: true,
        memo: HashMap::new(),
    };
    o.eval(&pm.model, pm.point, f)
}
