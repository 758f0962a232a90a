//! Recursive-descent parser for state formulas.
//!
//! Binding strength, tightest first: unary operators, `U`/`R`, `&`, `|`,
//! `->`, `<->`. `&` and `|` associate to the left, `->` and `<->` to the
//! right, and `U`/`R` do not chain without parentheses.

use super::lexer::{syntax, tokenize, Tok, Token};
use super::{Flavor, Formula, ParseError};

/// Parse a state formula. `dia` and `box` take the flavor of the other
/// operators, or SDL when there are none.
pub fn parse_formula(src: &str) -> Result<Formula, ParseError> {
    parse_formula_with_default(src, Flavor::Sdl)
}

/// Like [`parse_formula`] with a chosen flavor for operator-free `dia`/`box`.
pub fn parse_formula_with_default(src: &str, default: Flavor) -> Result<Formula, ParseError> {
    let f = parse_expression_with_default(src, default)?;
    f.validate_state_formula()?;
    Ok(f)
}

/// Parse without requiring path operators to sit under a strategic operator,
/// so bare `p U q` or `X p` are accepted.
pub fn parse_expression(src: &str) -> Result<Formula, ParseError> {
    parse_expression_with_default(src, Flavor::Sdl)
}

fn parse_expression_with_default(src: &str, default: Flavor) -> Result<Formula, ParseError> {
    let tokens = tokenize(src)?;
    let mut flavor: Option<Flavor> = None;
    for t in &tokens {
        if let Tok::Strat(op) = &t.tok {
            let fl = op.mode.flavor();
            match flavor {
                None => flavor = Some(fl),
                Some(g) if g != fl => return Err(ParseError::MixedFlavor(g, fl)),
                _ => {}
            }
        }
    }
    let mut p = Parser {
        tokens,
        pos: 0,
        flavor: flavor.unwrap_or(default),
        end: src.chars().count() + 1,
    };
    let f = p.iff()?;
    if p.pos < p.tokens.len() {
        return Err(syntax(p.column(), "unexpected trailing input"));
    }
    Ok(f)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    flavor: Flavor,
    end: usize,
}

impl Parser {
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

    fn is_word(&self, w: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(x)) if x == w)
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let left = self.implies()?;
        if self.eat(&Tok::Iff) {
            Ok(Formula::iff(left, self.iff()?))
        } else {
            Ok(left)
        }
    }

    fn implies(&mut self) -> Result<Formula, ParseError> {
        let left = self.or()?;
        if self.eat(&Tok::Implies) {
            Ok(Formula::implies(left, self.implies()?))
        } else {
            Ok(left)
        }
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut left = self.and()?;
        while self.eat(&Tok::Or) {
            left = Formula::or(left, self.and()?);
        }
        Ok(left)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut left = self.temporal()?;
        while self.eat(&Tok::And) {
            left = Formula::and(left, self.temporal()?);
        }
        Ok(left)
    }

    fn temporal(&mut self) -> Result<Formula, ParseError> {
        let left = self.unary()?;
        self.binary_path(left)
    }

    fn binary_path(&mut self, left: Formula) -> Result<Formula, ParseError> {
        let f = if self.is_word("U") {
            self.pos += 1;
            Formula::until(left, self.unary()?)
        } else if self.is_word("R") {
            self.pos += 1;
            Formula::release(left, self.unary()?)
        } else {
            return Ok(left);
        };
        if self.is_word("U") || self.is_word("R") {
            return Err(syntax(self.column(), "chained U/R needs parentheses"));
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        let col = self.column();
        let Some(tok) = self.peek().cloned() else {
            return Err(syntax(col, "unexpected end of formula"));
        };
        self.pos += 1;
        match tok {
            Tok::Not => Ok(Formula::not(self.unary()?)),
            Tok::LParen => {
                let inner = self.iff()?;
                if !self.eat(&Tok::RParen) {
                    return Err(syntax(self.column(), "expected `)`"));
                }
                Ok(inner)
            }
            Tok::Strat(op) => {
                let path = self.path()?;
                Ok(Formula::strategic(op, path))
            }
            Tok::Ident(w) => match w.as_str() {
                "true" => Ok(Formula::True),
                "false" => Ok(Formula::False),
                "X" => Ok(Formula::next(self.unary()?)),
                "F" => Ok(Formula::eventually(self.unary()?)),
                "G" => Ok(Formula::always(self.unary()?)),
                "dia" => Ok(Formula::diamond(self.flavor, self.unary()?)),
                "box" => Ok(Formula::boxed(self.flavor, self.unary()?)),
                "U" | "R" => Err(syntax(col, format!("`{w}` needs a left operand"))),
                _ => {
                    if w.starts_with(|c: char| c.is_ascii_digit()) {
                        Err(syntax(col, format!("`{w}` is not an atom name")))
                    } else {
                        Ok(Formula::Atom(w))
                    }
                }
            },
            other => Err(syntax(col, format!("unexpected {}", describe(&other)))),
        }
    }

    /// The path formula after a strategic operator.
    fn path(&mut self) -> Result<Formula, ParseError> {
        if self.is_word("X") || self.is_word("F") || self.is_word("G") {
            return self.unary();
        }
        let left = self.unary()?;
        if self.is_word("U") || self.is_word("R") {
            return self.binary_path(left);
        }
        // A parenthesised path such as `<d:1> (p U q)`.
        Ok(left)
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(w) => format!("`{w}`"),
        Tok::Not => "`!`".into(),
        Tok::And => "`&`".into(),
        Tok::Or => "`|`".into(),
        Tok::Implies => "`->`".into(),
        Tok::Iff => "`<->`".into(),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::LBracket => "`[`".into(),
        Tok::RBracket => "`]`".into(),
        Tok::Colon => "`:`".into(),
        Tok::Strat(op) => format!("`{op}`"),
    }
}
