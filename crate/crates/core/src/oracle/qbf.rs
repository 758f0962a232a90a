//! Quantified Boolean formulas and their brute-force evaluation.
//!
//! Text form: `forall p1 exists p2 : (p1 -> p2)`. A quantifier may bind
//! several variables (`exists a b : ...`).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::syntax::lexer::{syntax, tokenize, Tok, Token};
use crate::syntax::ParseError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quantifier {
    Forall,
    Exists,
}

/// Propositional matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Prop {
    True,
    False,
    Var(String),
    Not(Box<Prop>),
    And(Box<Prop>, Box<Prop>),
    Or(Box<Prop>, Box<Prop>),
    Implies(Box<Prop>, Box<Prop>),
    Iff(Box<Prop>, Box<Prop>),
}

impl Prop {
    pub fn var(name: impl Into<String>) -> Prop {
        Prop::Var(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(p: Prop) -> Prop {
        Prop::Not(Box::new(p))
    }

    pub fn and(a: Prop, b: Prop) -> Prop {
        Prop::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Prop, b: Prop) -> Prop {
        Prop::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Prop, b: Prop) -> Prop {
        Prop::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Prop, b: Prop) -> Prop {
        Prop::Iff(Box::new(a), Box::new(b))
    }

    pub fn eval(&self, env: &BTreeMap<String, bool>) -> bool {
        match self {
            Prop::True => true,
            Prop::False => false,
            Prop::Var(v) => env[v],
            Prop::Not(a) => !a.eval(env),
            Prop::And(a, b) => a.eval(env) && b.eval(env),
            Prop::Or(a, b) => a.eval(env) || b.eval(env),
            Prop::Implies(a, b) => !a.eval(env) || b.eval(env),
            Prop::Iff(a, b) => a.eval(env) == b.eval(env),
        }
    }

    pub fn vars(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect(&mut out);
        out
    }

    fn collect<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            Prop::True | Prop::False => {}
            Prop::Var(v) => {
                out.insert(v);
            }
            Prop::Not(a) => a.collect(out),
            Prop::And(a, b) | Prop::Or(a, b) | Prop::Implies(a, b) | Prop::Iff(a, b) => {
                a.collect(out);
                b.collect(out);
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Prop::Iff(..) => 1,
            Prop::Implies(..) => 2,
            Prop::Or(..) => 3,
            Prop::And(..) => 4,
            _ => 6,
        }
    }
}

impl fmt::Display for Prop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |x: &Prop, paren: bool| {
            if paren {
                format!("({x})")
            } else {
                x.to_string()
            }
        };
        let p = self.precedence();
        match self {
            Prop::True => f.write_str("true"),
            Prop::False => f.write_str("false"),
            Prop::Var(v) => f.write_str(v),
            Prop::Not(a) => write!(f, "!{}", wrap(a, a.precedence() < 6)),
            Prop::And(a, b) => write!(f, "{} & {}", wrap(a, a.precedence() < p), wrap(b, b.precedence() <= p)),
            Prop::Or(a, b) => write!(f, "{} | {}", wrap(a, a.precedence() < p), wrap(b, b.precedence() <= p)),
            Prop::Implies(a, b) => write!(f, "{} -> {}", wrap(a, a.precedence() <= p), wrap(b, b.precedence() < p)),
            Prop::Iff(a, b) => write!(
                f,
                "{} <-> {}",
                wrap(a, a.precedence() <= p),
                wrap(b, b.precedence() < p)
            ),
        }
    }
}

/// A closed prenex QBF.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QbfInstance {
    pub prefix: Vec<(Quantifier, String)>,
    pub matrix: Prop,
}

impl QbfInstance {
    /// Build an instance, checking that variables are bound once and that
    /// the matrix has no free variables.
    pub fn new(prefix: Vec<(Quantifier, String)>, matrix: Prop) -> Result<Self, ParseError> {
        let mut bound = BTreeSet::new();
        for (_, v) in &prefix {
            if !bound.insert(v.as_str()) {
                return Err(syntax(1, format!("variable `{v}` is quantified twice")));
            }
        }
        if let Some(free) = matrix.vars().into_iter().find(|v| !bound.contains(v)) {
            return Err(syntax(1, format!("variable `{free}` is not quantified")));
        }
        Ok(QbfInstance { prefix, matrix })
    }

    pub fn parse(src: &str) -> Result<Self, ParseError> {
        let tokens = tokenize(src)?;
        let mut p = PropParser {
            tokens,
            pos: 0,
            end: src.chars().count() + 1,
        };
        let mut prefix = Vec::new();
        loop {
            let q = match p.peek() {
                Some(Tok::Ident(w)) if w == "forall" => Quantifier::Forall,
                Some(Tok::Ident(w)) if w == "exists" => Quantifier::Exists,
                _ => break,
            };
            p.pos += 1;
            let mut any = false;
            while let Some(Tok::Ident(w)) = p.peek() {
                if w == "forall" || w == "exists" {
                    break;
                }
                prefix.push((q, w.clone()));
                p.pos += 1;
                any = true;
            }
            if !any {
                return Err(syntax(p.column(), "expected a variable after the quantifier"));
            }
        }
        if !prefix.is_empty() && !p.eat(&Tok::Colon) {
            return Err(syntax(p.column(), "expected `:` after the prefix"));
        }
        let matrix = p.iff()?;
        if p.pos < p.tokens.len() {
            return Err(syntax(p.column(), "unexpected trailing input"));
        }
        QbfInstance::new(prefix, matrix)
    }

    /// The negation with every quantifier flipped.
    pub fn dual(&self) -> QbfInstance {
        QbfInstance {
            prefix: self
                .prefix
                .iter()
                .map(|(q, v)| {
                    let q = match q {
                        Quantifier::Forall => Quantifier::Exists,
                        Quantifier::Exists => Quantifier::Forall,
                    };
                    (q, v.clone())
                })
                .collect(),
            matrix: Prop::not(self.matrix.clone()),
        }
    }
}

impl fmt::Display for QbfInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (q, v) in &self.prefix {
            let w = match q {
                Quantifier::Forall => "forall",
                Quantifier::Exists => "exists",
            };
            write!(f, "{w} {v} ")?;
        }
        if self.prefix.is_empty() {
            write!(f, "{}", self.matrix)
        } else {
            write!(f, ": {}", self.matrix)
        }
    }
}

/// Truth of a closed QBF by expanding every quantifier.
pub fn qbf_eval(q: &QbfInstance) -> bool {
    fn go(prefix: &[(Quantifier, String)], matrix: &Prop, env: &mut BTreeMap<String, bool>) -> bool {
        let Some(((quant, var), rest)) = prefix.split_first() else {
            return matrix.eval(env);
        };
        let mut outcomes = [false, true].into_iter().map(|b| {
            env.insert(var.clone(), b);
            go(rest, matrix, env)
        });
        match quant {
            Quantifier::Forall => outcomes.all(|x| x),
            Quantifier::Exists => outcomes.any(|x| x),
        }
    }
    go(&q.prefix, &q.matrix, &mut BTreeMap::new())
}

struct PropParser {
    tokens: Vec<Token>,
    pos: usize,
    end: usize,
}

impl PropParser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    fn column(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |t| t.column)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn iff(&mut self) -> Result<Prop, ParseError> {
        let left = self.implies()?;
        if self.eat(&Tok::Iff) {
            Ok(Prop::iff(left, self.iff()?))
        } else {
            Ok(left)
        }
    }

    fn implies(&mut self) -> Result<Prop, ParseError> {
        let left = self.or()?;
        if self.eat(&Tok::Implies) {
            Ok(Prop::implies(left, self.implies()?))
        } else {
            Ok(left)
        }
    }

    fn or(&mut self) -> Result<Prop, ParseError> {
        let mut left = self.and()?;
        while self.eat(&Tok::Or) {
            left = Prop::or(left, self.and()?);
        }
        Ok(left)
    }

    fn and(&mut self) -> Result<Prop, ParseError> {
        let mut left = self.unary()?;
        while self.eat(&Tok::And) {
            left = Prop::and(left, self.unary()?);
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<Prop, ParseError> {
        let col = self.column();
        match self.peek().cloned() {
            Some(Tok::Not) => {
                self.pos += 1;
                Ok(Prop::not(self.unary()?))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.iff()?;
                if !self.eat(&Tok::RParen) {
                    return Err(syntax(self.column(), "expected `)`"));
                }
                Ok(inner)
            }
            Some(Tok::Ident(w)) => {
                self.pos += 1;
                Ok(match w.as_str() {
                    "true" => Prop::True,
                    "false" => Prop::False,
                    _ => Prop::Var(w),
                })
            }
            Some(_) => Err(syntax(col, "unexpected token")),
            None => Err(syntax(col, "unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn textbook_instances() {
        let q = QbfInstance::parse("forall p1 exists p2 : (p1 -> p2)").unwrap();
        assert!(qbf_eval(&q));
        let q = QbfInstance::parse("exists p1 forall p2 : (p1 <-> p2)").unwrap();
        assert!(!qbf_eval(&q));
        assert!(qbf_eval(&QbfInstance::parse("true").unwrap()));
        assert!(!qbf_eval(&QbfInstance::parse("forall p : p & !p").unwrap()));
    }

    #[test]
    fn rejects_open_or_repeated_variables() {
        assert!(QbfInstance::parse("forall p : q").is_err());
        assert!(QbfInstance::parse("forall p exists p : p").is_err());
        assert!(QbfInstance::parse("forall : p").is_err());
    }

    #[test]
    fn display_round_trips() {
        let q = QbfInstance::parse("forall a b exists c : (a | !b) & c -> a <-> c").unwrap();
        assert_eq!(QbfInstance::parse(&q.to_string()).unwrap(), q);
    }
}
