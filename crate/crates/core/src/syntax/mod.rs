//! Formulas of the three logics, their text syntax and negation normal form.
//!
//! Duals (`[d:n]`, `[a:n]`, `[[C|n,m]]`) are stored as a flag on the
//! strategic operator rather than rewritten into negations, so NNF can push
//! negation through them. `F` and `G` are sugar for `true U _` and
//! `false R _` and never appear in the tree.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

pub mod ctl;
pub(crate) mod lexer;
mod nnf;
mod parse;

pub use nnf::{is_nnf, to_nnf};
pub use parse::{parse_expression, parse_formula, parse_formula_with_default};

/// Which logic a formula belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Sdl,
    Scl,
    Sul,
}

impl Flavor {
    pub fn name(self) -> &'static str {
        match self {
            Flavor::Sdl => "sdl",
            Flavor::Scl => "scl",
            Flavor::Sul => "sul",
        }
    }

    /// The budget-0, non-dual operator of this flavor.
    pub fn zero_op(self) -> StrategicOp {
        let mode = match self {
            Flavor::Sdl => Mode::Demon(0),
            Flavor::Scl => Mode::Angel(0),
            Flavor::Sul => Mode::Update {
                coalition: Coalition::BOTH,
                angel_budget: 0,
                demon_budget: 0,
            },
        };
        StrategicOp { mode, dual: false }
    }
}

impl std::str::FromStr for Flavor {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "sdl" => Ok(Flavor::Sdl),
            "scl" => Ok(Flavor::Scl),
            "sul" => Ok(Flavor::Sul),
            _ => Err(format!("unknown flavor `{s}` (expected sdl, scl or sul)")),
        }
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The agents that team up with the traveller's proponent in an update game.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Coalition {
    pub angel: bool,
    pub demon: bool,
}

impl Coalition {
    pub const BOTH: Coalition = Coalition {
        angel: true,
        demon: true,
    };
    pub const ANGEL: Coalition = Coalition {
        angel: true,
        demon: false,
    };
    pub const DEMON: Coalition = Coalition {
        angel: false,
        demon: true,
    };
    pub const NONE: Coalition = Coalition {
        angel: false,
        demon: false,
    };
}

/// Who changes the model, and by how much per step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// The demon removes edges of total cost at most the budget.
    Demon(u64),
    /// The angel adds edges of total cost at most the budget.
    Angel(u64),
    /// Both agents act at once.
    Update {
        coalition: Coalition,
        angel_budget: u64,
        demon_budget: u64,
    },
}

impl Mode {
    pub fn flavor(self) -> Flavor {
        match self {
            Mode::Demon(_) => Flavor::Sdl,
            Mode::Angel(_) => Flavor::Scl,
            Mode::Update { .. } => Flavor::Sul,
        }
    }

    pub fn angel_budget(self) -> u64 {
        match self {
            Mode::Demon(_) => 0,
            Mode::Angel(n) => n,
            Mode::Update { angel_budget, .. } => angel_budget,
        }
    }

    pub fn demon_budget(self) -> u64 {
        match self {
            Mode::Demon(n) => n,
            Mode::Angel(_) => 0,
            Mode::Update { demon_budget, .. } => demon_budget,
        }
    }
}

/// A strategic operator: `<d:n>`, `<a:n>`, `<<C|n,m>>` or one of their duals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StrategicOp {
    pub mode: Mode,
    pub dual: bool,
}

impl StrategicOp {
    pub fn flipped(self) -> Self {
        StrategicOp {
            mode: self.mode,
            dual: !self.dual,
        }
    }
}

impl fmt::Display for StrategicOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (open, close) = if self.dual { ('[', ']') } else { ('<', '>') };
        match self.mode {
            Mode::Demon(n) => write!(f, "{open}d:{n}{close}"),
            Mode::Angel(n) => write!(f, "{open}a:{n}{close}"),
            Mode::Update {
                coalition,
                angel_budget: a,
                demon_budget: d,
            } => {
                let (agents, first, second) = match (coalition.angel, coalition.demon) {
                    (true, true) => ("a,d", a, d),
                    (true, false) => ("a", a, d),
                    (false, true) => ("d", d, a),
                    (false, false) => ("", a, d),
                };
                write!(f, "{open}{open}{agents}|{first},{second}{close}{close}")
            }
        }
    }
}

/// Formula tree. `Next`, `Until` and `Release` are path formulas and belong
/// directly under a `Strategic` node in well-formed state formulas.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Atom(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Next(Box<Formula>),
    Until(Box<Formula>, Box<Formula>),
    Release(Box<Formula>, Box<Formula>),
    Strategic(StrategicOp, Box<Formula>),
}

/// Errors from parsing or validating formulas.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at column {column}: {message}")]
    Syntax { column: usize, message: String },
    #[error("formula mixes {0} and {1} operators")]
    MixedFlavor(Flavor, Flavor),
    #[error("path operator `{0}` outside a strategic operator")]
    PathOutsideStrategic(&'static str),
    #[error("strategic operator {0} must be followed by X, U, R, F or G")]
    MissingPath(String),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Formula {
        Formula::Atom(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn next(f: Formula) -> Formula {
        Formula::Next(Box::new(f))
    }

    pub fn until(a: Formula, b: Formula) -> Formula {
        Formula::Until(Box::new(a), Box::new(b))
    }

    pub fn release(a: Formula, b: Formula) -> Formula {
        Formula::Release(Box::new(a), Box::new(b))
    }

    /// `F f`, i.e. `true U f`.
    pub fn eventually(f: Formula) -> Formula {
        Formula::until(Formula::True, f)
    }

    /// `G f`, i.e. `false R f`.
    pub fn always(f: Formula) -> Formula {
        Formula::release(Formula::False, f)
    }

    pub fn strategic(op: StrategicOp, path: Formula) -> Formula {
        Formula::Strategic(op, Box::new(path))
    }

    /// `box f` in the given flavor: every successor satisfies `f`.
    pub fn boxed(flavor: Flavor, f: Formula) -> Formula {
        Formula::strategic(flavor.zero_op(), Formula::next(f))
    }

    /// `dia f` in the given flavor: some successor satisfies `f`.
    pub fn diamond(flavor: Flavor, f: Formula) -> Formula {
        Formula::strategic(flavor.zero_op().flipped(), Formula::next(f))
    }

    /// Negation that folds constants and double negation.
    pub fn negated(self) -> Formula {
        match self {
            Formula::True => Formula::False,
            Formula::False => Formula::True,
            Formula::Not(inner) => *inner,
            f => Formula::not(f),
        }
    }

    pub fn is_path(&self) -> bool {
        matches!(self, Formula::Next(_) | Formula::Until(..) | Formula::Release(..))
    }

    /// Direct subformulas, left to right.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => vec![],
            Formula::Not(a) | Formula::Next(a) | Formula::Strategic(_, a) => vec![a],
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b)
            | Formula::Until(a, b)
            | Formula::Release(a, b) => vec![a, b],
        }
    }

    /// Operators in pre-order.
    pub fn strategic_ops(&self) -> Vec<StrategicOp> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(f) = stack.pop() {
            if let Formula::Strategic(op, _) = f {
                out.push(*op);
            }
            let mut kids = f.children();
            kids.reverse();
            stack.extend(kids);
        }
        out
    }

    /// Atom occurrences in left-to-right order.
    pub fn atom_occurrences(&self) -> Vec<&str> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(f) = stack.pop() {
            if let Formula::Atom(a) = f {
                out.push(a.as_str());
            }
            let mut kids = f.children();
            kids.reverse();
            stack.extend(kids);
        }
        out
    }

    /// The unique logic of the operators, `None` for pure propositional
    /// formulas, or an error when two logics are mixed.
    pub fn flavor(&self) -> Result<Option<Flavor>, ParseError> {
        let mut found: Option<Flavor> = None;
        for op in self.strategic_ops() {
            let fl = op.mode.flavor();
            match found {
                None => found = Some(fl),
                Some(g) if g != fl => return Err(ParseError::MixedFlavor(g, fl)),
                _ => {}
            }
        }
        Ok(found)
    }

    /// Check that path operators occur exactly under strategic operators.
    pub fn validate_state_formula(&self) -> Result<(), ParseError> {
        match self {
            Formula::Next(_) => Err(ParseError::PathOutsideStrategic("X")),
            Formula::Until(..) => Err(ParseError::PathOutsideStrategic("U")),
            Formula::Release(..) => Err(ParseError::PathOutsideStrategic("R")),
            Formula::Strategic(op, path) => {
                if !path.is_path() {
                    return Err(ParseError::MissingPath(op.to_string()));
                }
                path.children()
                    .into_iter()
                    .try_for_each(Formula::validate_state_formula)
            }
            f => f.children().into_iter().try_for_each(Formula::validate_state_formula),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Iff(..) => 1,
            Formula::Implies(..) => 2,
            Formula::Or(..) => 3,
            Formula::And(..) => 4,
            Formula::Until(..) | Formula::Release(..) => 5,
            Formula::Not(_) | Formula::Next(_) | Formula::Strategic(..) => 6,
            Formula::True | Formula::False | Formula::Atom(_) => 7,
        }
    }
}

/// `|f|`: one per node plus the binary length of every budget, where a zero
/// budget still takes one bit.
pub fn formula_size(f: &Formula) -> u64 {
    let bits = |n: u64| u64::from((64 - n.leading_zeros()).max(1));
    let own = match f {
        Formula::Strategic(op, _) => match op.mode {
            Mode::Demon(n) | Mode::Angel(n) => 1 + bits(n),
            Mode::Update {
                angel_budget,
                demon_budget,
                ..
            } => 1 + bits(angel_budget) + bits(demon_budget),
        },
        _ => 1,
    };
    own + f.children().into_iter().map(formula_size).sum::<u64>()
}

struct Operand<'a>(&'a Formula, bool);

impl fmt::Display for Operand<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.1 {
            write!(f, "({})", self.0)
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.precedence();
        // U and R operands are bracketed unless atomic, so the printed form
        // never depends on how U/R interact with the other connectives.
        fn temporal(x: &Formula) -> Operand<'_> {
            Operand(x, x.precedence() < 7)
        }
        fn unary(x: &Formula) -> Operand<'_> {
            Operand(x, x.precedence() < 6)
        }
        match self {
            Formula::True => f.write_str("true"),
            Formula::False => f.write_str("false"),
            Formula::Atom(a) => f.write_str(a),
            Formula::Not(a) => write!(f, "!{}", unary(a)),
            Formula::Next(a) => write!(f, "X {}", unary(a)),
            Formula::Until(a, b) => write!(f, "{} U {}", temporal(a), temporal(b)),
            Formula::Release(a, b) => write!(f, "{} R {}", temporal(a), temporal(b)),
            Formula::Strategic(op, path) => {
                if path.is_path() {
                    write!(f, "{op} {path}")
                } else {
                    write!(f, "{op} {}", unary(path))
                }
            }
            // Left-associative.
            Formula::And(a, b) | Formula::Or(a, b) => {
                let sym = if matches!(self, Formula::And(..)) { "&" } else { "|" };
                write!(
                    f,
                    "{} {sym} {}",
                    Operand(a, a.precedence() < p),
                    Operand(b, b.precedence() <= p)
                )
            }
            // Right-associative.
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                let sym = if matches!(self, Formula::Implies(..)) {
                    "->"
                } else {
                    "<->"
                };
                write!(
                    f,
                    "{} {sym} {}",
                    Operand(a, a.precedence() <= p),
                    Operand(b, b.precedence() < p)
                )
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn size_counts_budget_bits() {
        assert_eq!(formula_size(&p("<d:1> X p")), 4);
        assert_eq!(formula_size(&p("<d:0> X p")), 4);
        assert_eq!(formula_size(&p("<d:5> X p")), 6);
        assert_eq!(formula_size(&p("<<a,d|2,1>> X p")), 6);
    }

    #[test]
    fn display_round_trips() {
        for s in [
            "<d:2> false R (!admin)",
            "<a:1> false R (error -> [a:0] X !error)",
            "<<d|2,1>> false R (!admin)",
            "[[a|3,1]] p U q",
            "!(p & q) | r -> s <-> t",
            "p -> q -> r",
            "(p -> q) -> r",
            "p & (q & r)",
            "<d:1> X <d:0> X p",
            "!<a:0> X !p",
        ] {
            let f = p(s);
            assert_eq!(f.to_string(), s, "printing {s}");
            assert_eq!(p(&f.to_string()), f);
        }
    }

    #[test]
    fn sul_budget_order_follows_listed_agents() {
        let Formula::Strategic(op, _) = p("<<d|2,1>> X p") else {
            panic!()
        };
        assert_eq!(op.mode.demon_budget(), 2);
        assert_eq!(op.mode.angel_budget(), 1);
        let Formula::Strategic(op, _) = p("<<a,d|2,1>> X p") else {
            panic!()
        };
        assert_eq!((op.mode.angel_budget(), op.mode.demon_budget()), (2, 1));
        let Formula::Strategic(op, _) = p("<<d,a|2,1>> X p") else {
            panic!()
        };
        assert_eq!((op.mode.angel_budget(), op.mode.demon_budget()), (1, 2));
        let Formula::Strategic(op, _) = p("<<|2,1>> X p") else {
            panic!()
        };
        assert_eq!((op.mode.angel_budget(), op.mode.demon_budget()), (2, 1));
    }
}
