//! Computation tree logic, the yardstick for expressivity checks.
//!
//! Text syntax: `AX f`, `EX f`, `AF f`, `EF f`, `AG f`, `EG f`,
//! `A(f U g)`, `E(f U g)`, `A(f R g)`, `E(f R g)` (square brackets also
//! accepted) and the usual propositional connectives.

use std::fmt;

use super::lexer::{syntax, tokenize, Tok, Token};
use super::ParseError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PathQuantifier {
    All,
    Some,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CtlFormula {
    True,
    False,
    Atom(String),
    Not(Box<CtlFormula>),
    And(Box<CtlFormula>, Box<CtlFormula>),
    Or(Box<CtlFormula>, Box<CtlFormula>),
    Implies(Box<CtlFormula>, Box<CtlFormula>),
    Iff(Box<CtlFormula>, Box<CtlFormula>),
    Next(PathQuantifier, Box<CtlFormula>),
    Finally(PathQuantifier, Box<CtlFormula>),
    Globally(PathQuantifier, Box<CtlFormula>),
    Until(PathQuantifier, Box<CtlFormula>, Box<CtlFormula>),
    Release(PathQuantifier, Box<CtlFormula>, Box<CtlFormula>),
}

impl CtlFormula {
    pub fn atom(name: impl Into<String>) -> Self {
        CtlFormula::Atom(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: CtlFormula) -> Self {
        CtlFormula::Not(Box::new(f))
    }

    pub fn and(a: CtlFormula, b: CtlFormula) -> Self {
        CtlFormula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: CtlFormula, b: CtlFormula) -> Self {
        CtlFormula::Or(Box::new(a), Box::new(b))
    }

    /// Temporal nesting depth.
    pub fn depth(&self) -> usize {
        use CtlFormula::*;
        match self {
            True | False | Atom(_) => 0,
            Not(a) => a.depth(),
            And(a, b) | Or(a, b) | Implies(a, b) | Iff(a, b) => a.depth().max(b.depth()),
            Next(_, a) | Finally(_, a) | Globally(_, a) => 1 + a.depth(),
            Until(_, a, b) | Release(_, a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    fn precedence(&self) -> u8 {
        use CtlFormula::*;
        match self {
            Iff(..) => 1,
            Implies(..) => 2,
            Or(..) => 3,
            And(..) => 4,
            _ => 6,
        }
    }
}

fn q(p: PathQuantifier) -> char {
    match p {
        PathQuantifier::All => 'A',
        PathQuantifier::Some => 'E',
    }
}

impl fmt::Display for CtlFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use CtlFormula::*;
        let wrap = |x: &CtlFormula, paren: bool| {
            if paren {
                format!("({x})")
            } else {
                x.to_string()
            }
        };
        let p = self.precedence();
        match self {
            True => f.write_str("true"),
            False => f.write_str("false"),
            Atom(a) => f.write_str(a),
            Not(a) => write!(f, "!{}", wrap(a, a.precedence() < 6)),
            And(a, b) => write!(f, "{} & {}", wrap(a, a.precedence() < p), wrap(b, b.precedence() <= p)),
            Or(a, b) => write!(f, "{} | {}", wrap(a, a.precedence() < p), wrap(b, b.precedence() <= p)),
            Implies(a, b) => write!(f, "{} -> {}", wrap(a, a.precedence() <= p), wrap(b, b.precedence() < p)),
            Iff(a, b) => write!(
                f,
                "{} <-> {}",
                wrap(a, a.precedence() <= p),
                wrap(b, b.precedence() < p)
            ),
            Next(pq, a) => write!(f, "{}X {}", q(*pq), wrap(a, a.precedence() < 6)),
            Finally(pq, a) => write!(f, "{}F {}", q(*pq), wrap(a, a.precedence() < 6)),
            Globally(pq, a) => write!(f, "{}G {}", q(*pq), wrap(a, a.precedence() < 6)),
            Until(pq, a, b) => write!(f, "{}({a} U {b})", q(*pq)),
            Release(pq, a, b) => write!(f, "{}({a} R {b})", q(*pq)),
        }
    }
}

/// Parse a CTL formula.
pub fn parse_ctl(src: &str) -> Result<CtlFormula, ParseError> {
    let tokens = tokenize(src)?;
    let mut p = CtlParser {
        tokens,
        pos: 0,
        end: src.chars().count() + 1,
    };
    let f = p.iff()?;
    if p.pos < p.tokens.len() {
        return Err(syntax(p.column(), "unexpected trailing input"));
    }
    Ok(f)
}

struct CtlParser {
    tokens: Vec<Token>,
    pos: usize,
    end: usize,
}

impl CtlParser {
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

    fn iff(&mut self) -> Result<CtlFormula, ParseError> {
        let left = self.implies()?;
        if self.eat(&Tok::Iff) {
            Ok(CtlFormula::Iff(Box::new(left), Box::new(self.iff()?)))
        } else {
            Ok(left)
        }
    }

    fn implies(&mut self) -> Result<CtlFormula, ParseError> {
        let left = self.or()?;
        if self.eat(&Tok::Implies) {
            Ok(CtlFormula::Implies(Box::new(left), Box::new(self.implies()?)))
        } else {
            Ok(left)
        }
    }

    fn or(&mut self) -> Result<CtlFormula, ParseError> {
        let mut left = self.and()?;
        while self.eat(&Tok::Or) {
            left = CtlFormula::or(left, self.and()?);
        }
        Ok(left)
    }

    fn and(&mut self) -> Result<CtlFormula, ParseError> {
        let mut left = self.unary()?;
        while self.eat(&Tok::And) {
            left = CtlFormula::and(left, self.unary()?);
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<CtlFormula, ParseError> {
        use PathQuantifier::{All, Some as Ex};
        let col = self.column();
        let Some(tok) = self.peek().cloned() else {
            return Err(syntax(col, "unexpected end of formula"));
        };
        self.pos += 1;
        match tok {
            Tok::Not => Ok(CtlFormula::not(self.unary()?)),
            Tok::LParen => {
                let inner = self.iff()?;
                if !self.eat(&Tok::RParen) {
                    return Err(syntax(self.column(), "expected `)`"));
                }
                Ok(inner)
            }
            Tok::Ident(w) => {
                let boxed = |s: &mut Self| s.unary().map(Box::new);
                match w.as_str() {
                    "true" => Ok(CtlFormula::True),
                    "false" => Ok(CtlFormula::False),
                    "AX" => Ok(CtlFormula::Next(All, boxed(self)?)),
                    "EX" => Ok(CtlFormula::Next(Ex, boxed(self)?)),
                    "AF" => Ok(CtlFormula::Finally(All, boxed(self)?)),
                    "EF" => Ok(CtlFormula::Finally(Ex, boxed(self)?)),
                    "AG" => Ok(CtlFormula::Globally(All, boxed(self)?)),
                    "EG" => Ok(CtlFormula::Globally(Ex, boxed(self)?)),
                    "A" | "E" => {
                        let pq = if w == "A" { All } else { Ex };
                        self.binary(pq)
                    }
                    "X" | "F" | "G" | "U" | "R" => {
                        Err(syntax(col, format!("temporal operator `{w}` needs a path quantifier")))
                    }
                    _ if w.starts_with(|c: char| c.is_ascii_digit()) => {
                        Err(syntax(col, format!("`{w}` is not an atom name")))
                    }
                    _ => Ok(CtlFormula::Atom(w)),
                }
            }
            _ => Err(syntax(col, "unexpected token")),
        }
    }

    fn binary(&mut self, pq: PathQuantifier) -> Result<CtlFormula, ParseError> {
        let close = if self.eat(&Tok::LParen) {
            Tok::RParen
        } else if self.eat(&Tok::LBracket) {
            Tok::RBracket
        } else {
            return Err(syntax(self.column(), "expected `(` or `[` after path quantifier"));
        };
        let left = self.iff()?;
        let col = self.column();
        let until = match self.peek() {
            Some(Tok::Ident(w)) if w == "U" => true,
            Some(Tok::Ident(w)) if w == "R" => false,
            _ => return Err(syntax(col, "expected `U` or `R`")),
        };
        self.pos += 1;
        let right = self.iff()?;
        if !self.eat(&close) {
            return Err(syntax(self.column(), "unclosed path formula"));
        }
        let (l, r) = (Box::new(left), Box::new(right));
        Ok(if until {
            CtlFormula::Until(pq, l, r)
        } else {
            CtlFormula::Release(pq, l, r)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        for s in ["AX p", "E(p U q)", "A(!p R q | r)", "EF p & AG !q", "!EX (p -> q)"] {
            let f = parse_ctl(s).unwrap();
            assert_eq!(parse_ctl(&f.to_string()).unwrap(), f, "{s}");
        }
        assert_eq!(parse_ctl("E[p U q]").unwrap(), parse_ctl("E(p U q)").unwrap());
        assert_eq!(parse_ctl("AG EF p").unwrap().depth(), 2);
        assert!(parse_ctl("X p").is_err());
        assert!(parse_ctl("A(p q)").is_err());
    }
}
