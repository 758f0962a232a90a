//! Seeded generators shared by the integration tests.
#![allow(dead_code)]

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sulcheck::model::{Model, ModelBuilder, PointedModel};
use sulcheck::oracle::{Prop, QbfInstance, Quantifier};
use sulcheck::syntax::ctl::{CtlFormula, PathQuantifier};
use sulcheck::syntax::{Coalition, Flavor, Formula, Mode, StrategicOp};

pub const DEFAULT_SEED: u64 = 20_240_611;

/// `SULCHECK_SEED`, or a fixed default.
pub fn seed() -> u64 {
    std::env::var("SULCHECK_SEED")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

/// An independent stream per suite, all derived from [`seed`].
pub fn rng(stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed() ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

pub fn state_name(i: usize) -> String {
    format!("s{i}")
}

/// A serial model on `n` states: each pair is an edge with probability
/// 0.4 (every state keeps at least one), each pair costs 1..=max_cost and
/// each atom holds at each state with probability 0.5.
pub fn random_model(rng: &mut impl Rng, n: usize, atoms: &[&str], max_cost: u64) -> Model {
    let mut b = ModelBuilder::new(1).states((0..n).map(state_name));
    for i in 0..n {
        let mut any = false;
        for j in 0..n {
            if rng.random_bool(0.4) {
                b = b.edge(state_name(i), state_name(j));
                any = true;
            }
        }
        if !any {
            b = b.edge(state_name(i), state_name(rng.random_range(0..n)));
        }
        for j in 0..n {
            let c = rng.random_range(1..=max_cost);
            if c != 1 {
                b = b.cost(state_name(i), state_name(j), c);
            }
        }
    }
    for a in atoms {
        let at: Vec<String> = (0..n).filter(|_| rng.random_bool(0.5)).map(state_name).collect();
        b = b.atom(*a, at);
    }
    b.build().expect("generated model is serial")
}

pub fn random_pointed(rng: &mut impl Rng, max_states: usize, atoms: &[&str], max_cost: u64) -> PointedModel {
    let n = rng.random_range(1..=max_states);
    let m = random_model(rng, n, atoms, max_cost);
    let point = state_name(rng.random_range(0..n));
    PointedModel::named(m, &point).expect("point exists")
}

pub fn random_mode(rng: &mut impl Rng, flavor: Flavor, max_budget: u64) -> Mode {
    let mut b = || rng.random_range(0..=max_budget);
    match flavor {
        Flavor::Sdl => Mode::Demon(b()),
        Flavor::Scl => Mode::Angel(b()),
        Flavor::Sul => {
            let (angel_budget, demon_budget) = (b(), b());
            let coalition = *[Coalition::BOTH, Coalition::ANGEL, Coalition::DEMON, Coalition::NONE]
                .choose(rng)
                .unwrap();
            Mode::Update {
                coalition,
                angel_budget,
                demon_budget,
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct FormulaShape {
    pub depth: usize,
    pub max_budget: u64,
    /// Only `X` under strategic operators.
    pub next_only: bool,
    pub allow_iff: bool,
}

pub fn random_formula(rng: &mut impl Rng, flavor: Flavor, atoms: &[&str], shape: FormulaShape) -> Formula {
    if shape.depth == 0 || rng.random_bool(0.2) {
        return match rng.random_range(0..10) {
            0 => Formula::True,
            1 => Formula::False,
            2 | 3 => Formula::not(Formula::atom(*atoms.choose(rng).unwrap())),
            _ => Formula::atom(*atoms.choose(rng).unwrap()),
        };
    }
    let sub = FormulaShape {
        depth: shape.depth - 1,
        ..shape
    };
    let go = |rng: &mut _| random_formula(rng, flavor, atoms, sub);
    let pick = rng.random_range(0..if shape.allow_iff { 10 } else { 9 });
    match pick {
        0 => Formula::not(go(rng)),
        1 => Formula::and(go(rng), go(rng)),
        2 => Formula::or(go(rng), go(rng)),
        3 => Formula::implies(go(rng), go(rng)),
        9 => Formula::iff(go(rng), go(rng)),
        _ => {
            let op = StrategicOp {
                mode: random_mode(rng, flavor, shape.max_budget),
                dual: rng.random_bool(0.4),
            };
            let path = if shape.next_only {
                Formula::next(go(rng))
            } else {
                match rng.random_range(0..5) {
                    0 => Formula::next(go(rng)),
                    1 => Formula::until(go(rng), go(rng)),
                    2 => Formula::release(go(rng), go(rng)),
                    3 => Formula::eventually(go(rng)),
                    _ => Formula::always(go(rng)),
                }
            };
            Formula::strategic(op, path)
        }
    }
}

pub fn random_ctl(rng: &mut impl Rng, atoms: &[&str], depth: usize) -> CtlFormula {
    if depth == 0 || rng.random_bool(0.15) {
        return match rng.random_range(0..8) {
            0 => CtlFormula::True,
            1 => CtlFormula::False,
            _ => CtlFormula::atom(*atoms.choose(rng).unwrap()),
        };
    }
    let go = |rng: &mut _| Box::new(random_ctl(rng, atoms, depth - 1));
    let q = if rng.random_bool(0.5) {
        PathQuantifier::All
    } else {
        PathQuantifier::Some
    };
    match rng.random_range(0..10) {
        0 => CtlFormula::Not(go(rng)),
        1 => CtlFormula::And(go(rng), go(rng)),
        2 => CtlFormula::Or(go(rng), go(rng)),
        3 => CtlFormula::Implies(go(rng), go(rng)),
        4 => CtlFormula::Next(q, go(rng)),
        5 => CtlFormula::Finally(q, go(rng)),
        6 => CtlFormula::Globally(q, go(rng)),
        7 => CtlFormula::Until(q, go(rng), go(rng)),
        8 => CtlFormula::Release(q, go(rng), go(rng)),
        _ => CtlFormula::Iff(go(rng), go(rng)),
    }
}

/// A propositional formula over `vars` with at most `connectives` binary or
/// unary connectives.
pub fn random_prop(rng: &mut impl Rng, vars: &[&str], connectives: usize) -> Prop {
    if connectives == 0 {
        return Prop::var(*vars.choose(rng).unwrap());
    }
    if rng.random_bool(0.25) {
        return Prop::not(random_prop(rng, vars, connectives - 1));
    }
    let left = rng.random_range(0..connectives);
    let a = random_prop(rng, vars, left);
    let b = random_prop(rng, vars, connectives - 1 - left);
    match rng.random_range(0..4) {
        0 => Prop::and(a, b),
        1 => Prop::or(a, b),
        2 => Prop::implies(a, b),
        _ => Prop::iff(a, b),
    }
}

/// Every prenex prefix binding each of `vars` once, in every order and
/// with every quantifier choice.
pub fn all_prefixes(vars: &[&str]) -> Vec<Vec<(Quantifier, String)>> {
    let mut orders: Vec<Vec<&str>> = vec![vec![]];
    for _ in 0..vars.len() {
        orders = orders
            .into_iter()
            .flat_map(|o| {
                vars.iter()
                    .filter(|v| !o.contains(v))
                    .map(|v| {
                        let mut o = o.clone();
                        o.push(v);
                        o
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
    }
    let mut out = Vec::new();
    for order in orders {
        for mask in 0..1u32 << order.len() {
            out.push(
                order
                    .iter()
                    .enumerate()
                    .map(|(i, v)| {
                        let q = if mask >> i & 1 == 1 {
                            Quantifier::Exists
                        } else {
                            Quantifier::Forall
                        };
                        (q, v.to_string())
                    })
                    .collect(),
            );
        }
    }
    out
}

/// Twenty fixed matrices over `p1` and `p2` (some mention only one).
pub const QBF_MATRICES: [&str; 20] = [
    "p1",
    "!p1",
    "p1 | !p1",
    "p1 & !p1",
    "p1 -> p2",
    "p2 -> p1",
    "p1 <-> p2",
    "!(p1 <-> p2)",
    "p1 & p2",
    "p1 | p2",
    "!p1 & !p2",
    "!p1 | !p2",
    "p1 & !p2",
    "(p1 | p2) & (!p1 | !p2)",
    "(p1 -> p2) & (p2 -> p1)",
    "p1 -> (p2 -> p1)",
    "(p1 & p2) | (!p1 & !p2)",
    "!(p1 | p2)",
    "p2",
    "(p1 -> p2) -> p1",
];

pub fn qbf_from(prefix: Vec<(Quantifier, String)>, matrix: Prop) -> QbfInstance {
    QbfInstance::new(prefix, matrix).expect("closed instance")
}
