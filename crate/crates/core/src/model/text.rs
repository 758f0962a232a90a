//! The line-oriented model file format.
//!
//! ```text
//! # comment
//! states: s0 s1
//! edges: s0 -> s1, s1 -> s1
//! atom p: s1
//! cost s0 s1 3
//! default_cost: 1
//! point: s0
//! ```

use std::fmt::Write;

use super::{Model, ModelBuilder, ModelError, StateId};

/// A parsed model file: the model and its optional designated point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelDocument {
    pub model: Model,
    pub point: Option<StateId>,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok<'a> {
    Word(&'a str),
    Colon,
    Comma,
    Arrow,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> ModelError {
    ModelError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn tokenize(line_no: usize, line: &str) -> Result<Vec<(usize, Tok<'_>)>, ModelError> {
    let bytes = line.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let col = i + 1;
        match c {
            b' ' | b'\t' | b'\r' => i += 1,
            b':' => {
                out.push((col, Tok::Colon));
                i += 1;
            }
            b',' => {
                out.push((col, Tok::Comma));
                i += 1;
            }
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                out.push((col, Tok::Arrow));
                i += 2;
            }
            c if c.is_ascii_alphanumeric() || c == b'_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((col, Tok::Word(&line[start..i])));
            }
            _ => {
                let ch = line[i..].chars().next().unwrap_or('?');
                return Err(syntax(line_no, col, format!("unexpected character `{ch}`")));
            }
        }
    }
    Ok(out)
}

struct Line<'a> {
    no: usize,
    toks: Vec<(usize, Tok<'a>)>,
    pos: usize,
    end_col: usize,
}

impl<'a> Line<'a> {
    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |t| t.0)
    }

    fn peek(&self) -> Option<&Tok<'a>> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn word(&mut self, what: &str) -> Result<&'a str, ModelError> {
        match self.peek() {
            Some(Tok::Word(w)) => {
                let w = *w;
                self.pos += 1;
                Ok(w)
            }
            _ => Err(syntax(self.no, self.col(), format!("expected {what}"))),
        }
    }

    fn expect(&mut self, t: Tok<'static>, what: &str) -> Result<(), ModelError> {
        if self.peek() == Some(&t) {
            self.pos += 1;
            Ok(())
        } else {
            Err(syntax(self.no, self.col(), format!("expected {what}")))
        }
    }

    fn number(&mut self) -> Result<u64, ModelError> {
        let col = self.col();
        let w = self.word("a positive integer")?;
        let v: u64 = w
            .parse()
            .map_err(|_| syntax(self.no, col, format!("`{w}` is not a positive integer")))?;
        if v == 0 {
            return Err(ModelError::NonPositiveCost(0));
        }
        Ok(v)
    }

    fn done(&self) -> Result<(), ModelError> {
        if self.pos < self.toks.len() {
            Err(syntax(self.no, self.col(), "unexpected trailing input"))
        } else {
            Ok(())
        }
    }

    /// Identifiers separated by whitespace or commas, up to end of line.
    fn id_list(&mut self) -> Result<Vec<&'a str>, ModelError> {
        let mut ids = Vec::new();
        while let Some(t) = self.peek() {
            match t {
                Tok::Comma => self.pos += 1,
                Tok::Word(_) => ids.push(self.word("a state identifier")?),
                _ => return Err(syntax(self.no, self.col(), "expected a state identifier")),
            }
        }
        Ok(ids)
    }
}

/// Parse a model file, ignoring any `point:` line.
pub fn parse_model(text: &str) -> Result<Model, ModelError> {
    parse_model_document(text).map(|d| d.model)
}

/// Parse a model file, keeping the designated point if there is one.
pub fn parse_model_document(text: &str) -> Result<ModelDocument, ModelError> {
    let mut states: Option<Vec<String>> = None;
    let mut default_cost: Option<u64> = None;
    let mut point: Option<(usize, String)> = None;
    let mut edges = Vec::new();
    let mut atoms = Vec::new();
    let mut costs = Vec::new();
    let mut last_line = 1;

    for (idx, raw) in text.lines().enumerate() {
        let no = idx + 1;
        last_line = no;
        let content = raw.split('#').next().unwrap_or("");
        let toks = tokenize(no, content)?;
        if toks.is_empty() {
            continue;
        }
        let mut line = Line {
            no,
            toks,
            pos: 0,
            end_col: content.len() + 1,
        };
        let head_col = line.col();
        let head = line.word("a directive")?;
        match head {
            "states" => {
                line.expect(Tok::Colon, "`:`")?;
                if states.is_some() {
                    return Err(syntax(no, head_col, "`states:` given more than once"));
                }
                states = Some(line.id_list()?.into_iter().map(String::from).collect());
            }
            "edges" => {
                line.expect(Tok::Colon, "`:`")?;
                loop {
                    if line.peek().is_none() {
                        break;
                    }
                    let a = line.word("a source state")?;
                    line.expect(Tok::Arrow, "`->`")?;
                    let b = line.word("a target state")?;
                    edges.push((a.to_string(), b.to_string()));
                    match line.peek() {
                        None => break,
                        Some(Tok::Comma) => line.pos += 1,
                        Some(_) => return Err(syntax(no, line.col(), "expected `,`")),
                    }
                }
            }
            "atom" => {
                let name = line.word("an atom name")?;
                line.expect(Tok::Colon, "`:`")?;
                let members: Vec<String> = line.id_list()?.into_iter().map(String::from).collect();
                atoms.push((name.to_string(), members));
            }
            "cost" => {
                let a = line.word("a source state")?;
                let b = line.word("a target state")?;
                let c = line.number()?;
                line.done()?;
                costs.push((a.to_string(), b.to_string(), c));
            }
            "default_cost" => {
                line.expect(Tok::Colon, "`:`")?;
                if default_cost.is_some() {
                    return Err(syntax(no, head_col, "`default_cost:` given more than once"));
                }
                default_cost = Some(line.number()?);
                line.done()?;
            }
            "point" => {
                line.expect(Tok::Colon, "`:`")?;
                if point.is_some() {
                    return Err(syntax(no, head_col, "`point:` given more than once"));
                }
                point = Some((no, line.word("a state identifier")?.to_string()));
                line.done()?;
            }
            other => {
                return Err(syntax(no, head_col, format!("unknown directive `{other}`")));
            }
        }
    }

    let states = states.ok_or_else(|| syntax(last_line, 1, "missing `states:` line"))?;
    let default_cost = default_cost.ok_or_else(|| syntax(last_line, 1, "missing `default_cost:` line"))?;
    let mut b = ModelBuilder::new(default_cost).states(states);
    for (x, y) in edges {
        b = b.edge(x, y);
    }
    for (name, members) in atoms {
        b = b.atom(name, members);
    }
    for (x, y, c) in costs {
        b = b.cost(x, y, c);
    }
    let model = b.build()?;
    let point = match point {
        Some((_, name)) => Some(model.state_id(&name)?),
        None => None,
    };
    Ok(ModelDocument { model, point })
}

/// Canonical text form: states, edges, atoms and cost entries in
/// lexicographic order, one `edges:` line per source state.
pub fn serialize_model(m: &Model, point: Option<StateId>) -> String {
    let mut out = String::new();
    let names: Vec<&str> = m.states().map(|s| m.state_name(s)).collect();
    let _ = writeln!(out, "states: {}", names.join(" "));
    for s in m.states() {
        let succ = m.successors(s);
        if succ.is_empty() {
            continue;
        }
        let list: Vec<String> = succ
            .iter()
            .map(|&d| format!("{} -> {}", m.state_name(s), m.state_name(d)))
            .collect();
        let _ = writeln!(out, "edges: {}", list.join(", "));
    }
    for atom in m.atoms() {
        let members: Vec<&str> = m.atom_states(atom).into_iter().map(|s| m.state_name(s)).collect();
        if members.is_empty() {
            let _ = writeln!(out, "atom {atom}:");
        } else {
            let _ = writeln!(out, "atom {atom}: {}", members.join(" "));
        }
    }
    for (a, b, c) in m.explicit_costs() {
        let _ = writeln!(out, "cost {} {} {c}", m.state_name(a), m.state_name(b));
    }
    let _ = writeln!(out, "default_cost: {}", m.default_cost());
    if let Some(p) = point {
        let _ = writeln!(out, "point: {}", m.state_name(p));
    }
    out
}
