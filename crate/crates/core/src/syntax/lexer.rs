//! Shared tokenizer for formula, CTL and QBF text.

use super::{Coalition, Mode, ParseError, StrategicOp};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Not,
    And,
    Or,
    Implies,
    Iff,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Colon,
    Strat(StrategicOp),
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub tok: Tok,
    pub column: usize,
}

pub(crate) fn syntax(column: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        column,
        message: message.into(),
    }
}

struct Cursor<'a> {
    chars: Vec<char>,
    pos: usize,
    _src: &'a str,
}

impl Cursor<'_> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn peek_at(&self, k: usize) -> Option<char> {
        self.chars.get(self.pos + k).copied()
    }

    fn column(&self) -> usize {
        self.pos + 1
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(syntax(self.column(), format!("expected `{c}`")))
        }
    }

    fn budget(&mut self) -> Result<u64, ParseError> {
        self.skip_ws();
        let col = self.column();
        let start = self.pos;
        while self
            .peek()
            .is_some_and(|c| c.is_ascii_alphanumeric() || c == '-' || c == '.')
        {
            self.pos += 1;
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        if text.is_empty() {
            return Err(syntax(col, "expected a budget"));
        }
        if !text.bytes().all(|b| b.is_ascii_digit()) {
            return Err(syntax(col, format!("budget `{text}` is not a natural number")));
        }
        text.parse()
            .map_err(|_| syntax(col, format!("budget `{text}` is too large")))
    }

    /// `<d:n>`, `<a:n>` and their bracketed duals; the opening bracket is consumed.
    fn single(&mut self, dual: bool) -> Result<StrategicOp, ParseError> {
        self.skip_ws();
        let col = self.column();
        let agent = self.peek();
        self.pos += 1;
        self.expect(':')?;
        let n = self.budget()?;
        self.expect(if dual { ']' } else { '>' })?;
        let mode = match agent {
            Some('d') => Mode::Demon(n),
            Some('a') => Mode::Angel(n),
            _ => return Err(syntax(col, "expected agent `a` or `d`")),
        };
        Ok(StrategicOp { mode, dual })
    }

    /// `<<C|n,m>>` and `[[C|n,m]]`; both opening brackets are consumed.
    fn update(&mut self, dual: bool) -> Result<StrategicOp, ParseError> {
        let mut listed: Vec<char> = Vec::new();
        loop {
            self.skip_ws();
            let col = self.column();
            match self.peek() {
                Some('|') => {
                    self.pos += 1;
                    break;
                }
                Some(',') if !listed.is_empty() => self.pos += 1,
                Some(c) if c.is_alphanumeric() || c == '_' => {
                    let start = self.pos;
                    while self.peek().is_some_and(|c| c.is_alphanumeric() || c == '_') {
                        self.pos += 1;
                    }
                    let name: String = self.chars[start..self.pos].iter().collect();
                    let agent = match name.as_str() {
                        "a" => 'a',
                        "d" => 'd',
                        _ => return Err(syntax(col, format!("unknown agent `{name}`"))),
                    };
                    if listed.contains(&agent) {
                        return Err(syntax(col, format!("agent `{name}` listed twice")));
                    }
                    listed.push(agent);
                }
                _ => return Err(syntax(col, "expected an agent or `|`")),
            }
        }
        let first = self.budget()?;
        self.expect(',')?;
        let second = self.budget()?;
        let close = if dual { ']' } else { '>' };
        self.expect(close)?;
        self.expect(close)?;
        // Budgets follow the listed agents, then the unlisted ones in a, d order.
        let mut order = listed.clone();
        for c in ['a', 'd'] {
            if !order.contains(&c) {
                order.push(c);
            }
        }
        let (angel_budget, demon_budget) = if order[0] == 'a' {
            (first, second)
        } else {
            (second, first)
        };
        Ok(StrategicOp {
            mode: Mode::Update {
                coalition: Coalition {
                    angel: listed.contains(&'a'),
                    demon: listed.contains(&'d'),
                },
                angel_budget,
                demon_budget,
            },
            dual,
        })
    }
}

pub(crate) fn tokenize(src: &str) -> Result<Vec<Token>, ParseError> {
    let mut cur = Cursor {
        chars: src.chars().collect(),
        pos: 0,
        _src: src,
    };
    let mut out = Vec::new();
    loop {
        cur.skip_ws();
        let column = cur.column();
        let Some(c) = cur.peek() else { break };
        let tok = match c {
            '!' | '~' => {
                cur.pos += 1;
                Tok::Not
            }
            '&' => {
                cur.pos += 1;
                Tok::And
            }
            '|' => {
                cur.pos += 1;
                Tok::Or
            }
            '(' => {
                cur.pos += 1;
                Tok::LParen
            }
            ')' => {
                cur.pos += 1;
                Tok::RParen
            }
            ']' => {
                cur.pos += 1;
                Tok::RBracket
            }
            ':' => {
                cur.pos += 1;
                Tok::Colon
            }
            '-' if cur.peek_at(1) == Some('>') => {
                cur.pos += 2;
                Tok::Implies
            }
            '<' if cur.peek_at(1) == Some('-') && cur.peek_at(2) == Some('>') => {
                cur.pos += 3;
                Tok::Iff
            }
            '<' if cur.peek_at(1) == Some('<') => {
                cur.pos += 2;
                Tok::Strat(cur.update(false)?)
            }
            '<' => {
                cur.pos += 1;
                Tok::Strat(cur.single(false)?)
            }
            '[' if cur.peek_at(1) == Some('[') => {
                cur.pos += 2;
                Tok::Strat(cur.update(true)?)
            }
            '[' => {
                // `[d:` and `[a:` open a dual operator, anything else is a bracket.
                let mut k = 1;
                while cur.peek_at(k).is_some_and(char::is_whitespace) {
                    k += 1;
                }
                let agent = cur.peek_at(k);
                let mut j = k + 1;
                while cur.peek_at(j).is_some_and(char::is_whitespace) {
                    j += 1;
                }
                if matches!(agent, Some('a' | 'd')) && cur.peek_at(j) == Some(':') {
                    cur.pos += 1;
                    Tok::Strat(cur.single(true)?)
                } else {
                    cur.pos += 1;
                    Tok::LBracket
                }
            }
            c if c.is_ascii_alphanumeric() || c == '_' => {
                let start = cur.pos;
                while cur.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == '_') {
                    cur.pos += 1;
                }
                Tok::Ident(cur.chars[start..cur.pos].iter().collect())
            }
            other => return Err(syntax(column, format!("unexpected character `{other}`"))),
        };
        out.push(Token { tok, column });
    }
    Ok(out)
}
