//! Parser for the line-oriented circuit file format.
//!
//! ```text
//! # comment
//! dim 3
//! wires 2
//! prep 0 basis 0
//! prep 1 basis 0
//! gate SUM 0 1
//! gate M_a 1 param 2
//! measure 0 1
//! ```
//!
//! `dim` and `wires` appear exactly once, in that order, before any `prep`.
//! Preparations precede gates and the single `measure` line is terminal.
//! Gate names are not checked here; that is the backend's job.

use std::fmt;

use thiserror::Error;

use super::{Circuit, GateApp, Prep};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

struct Token<'a> {
    column: usize,
    text: &'a str,
}

fn tokenize(line: &str) -> Vec<Token<'_>> {
    let content = match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    };
    let mut tokens = Vec::new();
    let mut start = None;
    for (i, ch) in content.char_indices() {
        match (ch.is_whitespace(), start) {
            (true, Some(s)) => {
                tokens.push(Token { column: content[..s].chars().count() + 1, text: &content[s..i] });
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        tokens.push(Token { column: content[..s].chars().count() + 1, text: &content[s..] });
    }
    tokens
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Section {
    Start,
    Dim,
    Wires,
    Preps,
    Gates,
    Measured,
}

impl fmt::Display for Section {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Section::Start => "start of file",
            Section::Dim => "dim",
            Section::Wires => "wires",
            Section::Preps => "prep",
            Section::Gates => "gate",
            Section::Measured => "measure",
        })
    }
}

struct Parser {
    line: usize,
    section: Section,
    dim: u32,
    n_wires: usize,
    preps: Vec<Prep>,
    prepared: Vec<bool>,
    gates: Vec<GateApp>,
    measured: Vec<usize>,
}

impl Parser {
    fn err(&self, column: usize, message: impl Into<String>) -> ParseError {
        ParseError { line: self.line, column, message: message.into() }
    }

    fn int<T: std::str::FromStr>(&self, tok: &Token<'_>, what: &str) -> Result<T, ParseError> {
        tok.text.parse().map_err(|_| self.err(tok.column, format!("expected {what}, found '{}'", tok.text)))
    }

    fn wire(&self, tok: &Token<'_>) -> Result<usize, ParseError> {
        let w: usize = self.int(tok, "wire index")?;
        if w >= self.n_wires {
            return Err(self.err(tok.column, format!("wire {w} out of range")));
        }
        Ok(w)
    }

    fn expect_after(&self, tok: &Token<'_>, required: Section, next: Section) -> Result<(), ParseError> {
        if self.section < required {
            return Err(self.err(tok.column, format!("'{}' must follow '{}'", tok.text, required)));
        }
        if self.section > next {
            return Err(self.err(tok.column, format!("'{}' not allowed after '{}'", tok.text, self.section)));
        }
        Ok(())
    }

    fn line(&mut self, tokens: &[Token<'_>]) -> Result<(), ParseError> {
        let head = &tokens[0];
        let args = &tokens[1..];
        let end_col = tokens.last().map(|t| t.column + t.text.chars().count()).unwrap_or(1);
        match head.text {
            "dim" => {
                if self.section != Section::Start {
                    return Err(self.err(head.column, "'dim' must be the first directive and appear once"));
                }
                let [d] = args else {
                    return Err(self.err(head.column, "usage: dim <d>"));
                };
                let d: u32 = self.int(d, "dimension")?;
                if d < 2 {
                    return Err(self.err(args[0].column, format!("dimension {d} is below 2")));
                }
                self.dim = d;
                self.section = Section::Dim;
            }
            "wires" => {
                if self.section != Section::Dim {
                    return Err(self.err(head.column, "'wires' must directly follow 'dim' and appear once"));
                }
                let [n] = args else {
                    return Err(self.err(head.column, "usage: wires <n>"));
                };
                let n: usize = self.int(n, "wire count")?;
                if n == 0 {
                    return Err(self.err(args[0].column, "circuit needs at least one wire"));
                }
                self.n_wires = n;
                self.prepared = vec![false; n];
                self.section = Section::Wires;
            }
            "prep" => {
                self.expect_after(head, Section::Wires, Section::Preps)?;
                let [w, kw, j] = args else {
                    return Err(self.err(head.column, "usage: prep <wire> basis <j>"));
                };
                let wire = self.wire(w)?;
                if kw.text != "basis" {
                    return Err(self.err(kw.column, format!("expected 'basis', found '{}'", kw.text)));
                }
                let label: u32 = self.int(j, "basis label")?;
                if label >= self.dim {
                    return Err(self.err(j.column, format!("basis label {label} out of range for dim {}", self.dim)));
                }
                if std::mem::replace(&mut self.prepared[wire], true) {
                    return Err(self.err(w.column, format!("duplicate preparation of wire {wire}")));
                }
                self.preps.push(Prep { wire, label });
                self.section = Section::Preps;
            }
            "gate" => {
                self.expect_after(head, Section::Wires, Section::Gates)?;
                if self.section < Section::Preps || self.prepared.iter().any(|p| !p) {
                    let w = self.prepared.iter().position(|p| !p).unwrap_or(0);
                    return Err(self.err(head.column, format!("wire {w} has no preparation before the first gate")));
                }
                let Some((name, rest)) = args.split_first() else {
                    return Err(self.err(end_col, "usage: gate <NAME> <w1> [<w2>] [param <a>]"));
                };
                let (wire_toks, param) = match rest.iter().position(|t| t.text == "param") {
                    Some(i) => {
                        let [a] = &rest[i + 1..] else {
                            return Err(self.err(rest[i].column, "usage: param <a>"));
                        };
                        let a: u32 = self.int(a, "gate parameter")?;
                        if a == 0 || a >= self.dim {
                            return Err(
                                self.err(rest[i + 1].column, format!("parameter {a} outside [1, {}]", self.dim - 1))
                            );
                        }
                        (&rest[..i], Some(a))
                    }
                    None => (rest, None),
                };
                if wire_toks.is_empty() || wire_toks.len() > 2 {
                    return Err(self.err(name.column, "a gate acts on 1 or 2 wires"));
                }
                let wires = wire_toks.iter().map(|t| self.wire(t)).collect::<Result<Vec<_>, _>>()?;
                if wires.len() == 2 && wires[0] == wires[1] {
                    return Err(self.err(wire_toks[1].column, "gate wires must be distinct"));
                }
                self.gates.push(GateApp { name: name.text.to_string(), wires, param });
                self.section = Section::Gates;
            }
            "measure" => {
                self.expect_after(head, Section::Wires, Section::Gates)?;
                if let Some(w) = self.prepared.iter().position(|p| !p) {
                    return Err(self.err(head.column, format!("wire {w} has no preparation")));
                }
                let mut seen = vec![false; self.n_wires];
                for t in args {
                    let w: usize = self.int(t, "wire index")?;
                    if w >= self.n_wires {
                        return Err(self.err(t.column, format!("measurement of unknown wire {w}")));
                    }
                    if std::mem::replace(&mut seen[w], true) {
                        return Err(self.err(t.column, format!("wire {w} measured twice")));
                    }
                    self.measured.push(w);
                }
                self.section = Section::Measured;
            }
            other => return Err(self.err(head.column, format!("unknown directive '{other}'"))),
        }
        Ok(())
    }
}

/// Parses circuit-file text. Diagnostics carry 1-based line and column.
pub fn parse_circuit(text: &str) -> Result<Circuit, ParseError> {
    let mut p = Parser {
        line: 0,
        section: Section::Start,
        dim: 0,
        n_wires: 0,
        preps: Vec::new(),
        prepared: Vec::new(),
        gates: Vec::new(),
        measured: Vec::new(),
    };
    let mut last_line = 0;
    for (i, raw) in text.lines().enumerate() {
        last_line = i + 1;
        p.line = i + 1;
        let tokens = tokenize(raw);
        if tokens.is_empty() {
            continue;
        }
        p.line(&tokens)?;
    }
    p.line = last_line + 1;
    match p.section {
        Section::Start => return Err(p.err(1, "missing 'dim' line")),
        Section::Dim => return Err(p.err(1, "missing 'wires' line")),
        _ => {}
    }
    if let Some(w) = p.prepared.iter().position(|x| !x) {
        return Err(p.err(1, format!("wire {w} has no preparation")));
    }
    Ok(Circuit {
        name: String::new(),
        dim: p.dim,
        n_wires: p.n_wires,
        preps: p.preps,
        gates: p.gates,
        measured: p.measured,
    })
}
