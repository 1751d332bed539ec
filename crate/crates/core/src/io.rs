//! Text formats: algebra files, prefix terms and decision reports.
//!
//! An algebra file looks like
//!
//! ```text
//! format maltsev-lab/1      # optional
//! algebra meet-semilattice
//! size 2
//! op meet 2
//! 0 0
//! 0 1
//! ```
//!
//! Tables are row-major with the leftmost argument most significant; entries
//! are whitespace separated and may be laid out freely. `#` starts a comment.

use std::collections::HashSet;
use std::fmt::Write as _;

use crate::algebra::{table_len, Elem, FiniteAlgebra, Operation, Term};
use crate::decision::{Answer, DecisionReport};
use crate::error::{Error, Result};

pub const FORMAT_VERSION: &str = "maltsev-lab/1";

#[derive(Debug, Clone, Copy)]
struct Token<'a> {
    text: &'a str,
    line: usize,
    column: usize,
}

fn err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn tokenize(text: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    for (l, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let mut rest = line;
        let mut offset = 0;
        while let Some(start) = rest.find(|c: char| !c.is_whitespace()) {
            let tail = &rest[start..];
            let end = tail.find(char::is_whitespace).unwrap_or(tail.len());
            out.push(Token {
                text: &tail[..end],
                line: l + 1,
                column: offset + start + 1,
            });
            offset += start + end;
            rest = &tail[end..];
        }
    }
    out
}

fn valid_symbol(s: &str) -> bool {
    !s.is_empty()
        && !s.starts_with(|c: char| c.is_ascii_digit())
        && !s.contains(['(', ')', '#'])
        && !s.contains(char::is_whitespace)
}

/// Parses the algebra file format; errors point at the offending token.
pub fn parse_algebra(text: &str) -> Result<FiniteAlgebra> {
    let tokens = tokenize(text);
    let end = {
        let lines = text.lines().count().max(1);
        (lines, text.lines().last().map_or(0, str::len) + 1)
    };
    let mut pos = 0;
    let next = |pos: &mut usize, what: &str| -> Result<Token<'_>> {
        let t = tokens.get(*pos).copied().ok_or_else(|| {
            err(
                end.0,
                end.1,
                format!("unexpected end of input, expected {what}"),
            )
        })?;
        *pos += 1;
        Ok(t)
    };
    let number = |t: Token<'_>, what: &str| -> Result<usize> {
        t.text.parse::<usize>().map_err(|_| {
            err(
                t.line,
                t.column,
                format!("expected {what}, found `{}`", t.text),
            )
        })
    };

    let mut name: Option<String> = None;
    let mut size: Option<usize> = None;
    let mut ops: Vec<Operation> = Vec::new();
    let mut symbols = HashSet::new();

    while pos < tokens.len() {
        let kw = next(&mut pos, "a keyword")?;
        match kw.text {
            "format" => {
                if pos != 1 {
                    return Err(err(kw.line, kw.column, "`format` must come first"));
                }
                let v = next(&mut pos, "a format version")?;
                if v.text != FORMAT_VERSION {
                    return Err(err(
                        v.line,
                        v.column,
                        format!(
                            "unsupported format `{}` (expected {FORMAT_VERSION})",
                            v.text
                        ),
                    ));
                }
            }
            "algebra" => {
                if name.is_some() {
                    return Err(err(kw.line, kw.column, "duplicate `algebra` line"));
                }
                // The name is the rest of the line.
                let mut parts = Vec::new();
                while let Some(t) = tokens.get(pos).filter(|t| t.line == kw.line) {
                    parts.push(t.text);
                    pos += 1;
                }
                if parts.is_empty() {
                    return Err(err(kw.line, kw.column, "missing algebra name"));
                }
                name = Some(parts.join(" "));
            }
            "size" => {
                if size.is_some() {
                    return Err(err(kw.line, kw.column, "duplicate `size` line"));
                }
                let t = next(&mut pos, "the universe size")?;
                let n = number(t, "the universe size")?;
                if n == 0 {
                    return Err(err(t.line, t.column, "size must be at least 1"));
                }
                size = Some(n);
            }
            "op" => {
                let n = size.ok_or_else(|| err(kw.line, kw.column, "`size` must precede `op`"))?;
                let sym = next(&mut pos, "an operation symbol")?;
                if !valid_symbol(sym.text) {
                    return Err(err(
                        sym.line,
                        sym.column,
                        format!("invalid operation symbol `{}`", sym.text),
                    ));
                }
                if !symbols.insert(sym.text) {
                    return Err(err(
                        sym.line,
                        sym.column,
                        format!("duplicate operation symbol `{}`", sym.text),
                    ));
                }
                let at = next(&mut pos, "an arity")?;
                let arity = number(at, "an arity")?;
                let len = table_len(n, arity)
                    .filter(|&l| l <= 1 << 26)
                    .ok_or_else(|| err(at.line, at.column, "table too large"))?;
                let mut table = Vec::with_capacity(len);
                while table.len() < len {
                    match tokens.get(pos) {
                        Some(t) if t.text.parse::<usize>().is_ok() => {
                            let v = number(*t, "a table entry")?;
                            if v >= n {
                                return Err(err(
                                    t.line,
                                    t.column,
                                    format!("entry {v} out of range for size {n}"),
                                ));
                            }
                            table.push(v as Elem);
                            pos += 1;
                        }
                        Some(t)
                            if t.text.starts_with('-')
                                || t.text.starts_with(|c: char| c.is_ascii_digit()) =>
                        {
                            return Err(err(
                                t.line,
                                t.column,
                                format!("invalid table entry `{}`", t.text),
                            ));
                        }
                        _ => {
                            return Err(err(
                                sym.line,
                                sym.column,
                                format!(
                                    "table of `{}` has {} entries, expected {len} ({n}^{arity})",
                                    sym.text,
                                    table.len()
                                ),
                            ))
                        }
                    }
                }
                ops.push(Operation::new(sym.text, arity, table));
            }
            other => {
                let message = if other.parse::<i64>().is_ok() {
                    "too many table entries".to_string()
                } else {
                    format!("unknown keyword `{other}`")
                };
                return Err(err(kw.line, kw.column, message));
            }
        }
    }

    let name = name.ok_or_else(|| err(1, 1, "missing `algebra` line"))?;
    let size = size.ok_or_else(|| err(1, 1, "missing `size` line"))?;
    if ops.is_empty() {
        return Err(err(end.0, end.1, "an algebra needs at least one operation"));
    }
    FiniteAlgebra::new(name, size, ops)
}

/// Serializes `alg`; one table row (last argument varying) per line.
pub fn format_algebra(alg: &FiniteAlgebra) -> String {
    let n = alg.size();
    let mut out = format!(
        "format {FORMAT_VERSION}\nalgebra {}\nsize {n}\n",
        alg.name()
    );
    for op in alg.ops() {
        let _ = writeln!(out, "op {} {}", op.symbol(), op.arity());
        let row = if op.arity() == 0 { 1 } else { n };
        for chunk in op.table().chunks(row) {
            let cells: Vec<String> = chunk.iter().map(Elem::to_string).collect();
            let _ = writeln!(out, "{}", cells.join(" "));
        }
    }
    out
}

pub fn read_algebra(path: &std::path::Path) -> Result<FiniteAlgebra> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::NotFound(format!("{}: {e}", path.display())))?;
    parse_algebra(&text)
}

/// Parses a prefix term: `x3`, `(f x0 (g x1))`, `(c)`.
pub fn parse_term(text: &str) -> Result<Term> {
    let mut p = TermParser { src: text, pos: 0 };
    let t = p.term()?;
    p.skip_ws();
    if p.pos < text.len() {
        return Err(p.error("trailing input after term"));
    }
    Ok(t)
}

struct TermParser<'a> {
    src: &'a str,
    pos: usize,
}

impl TermParser<'_> {
    fn error(&self, message: &str) -> Error {
        let before = &self.src[..self.pos];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        err(line, column, message)
    }

    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn atom(&mut self) -> &str {
        let rest = &self.src[self.pos..];
        let end = rest
            .find(|c: char| c.is_whitespace() || c == '(' || c == ')')
            .unwrap_or(rest.len());
        self.pos += end;
        &rest[..end]
    }

    fn term(&mut self) -> Result<Term> {
        self.skip_ws();
        match self.src[self.pos..].chars().next() {
            None => Err(self.error("expected a term")),
            Some(')') => Err(self.error("unexpected `)`")),
            Some('(') => {
                self.pos += 1;
                self.skip_ws();
                let start = self.pos;
                let symbol = self.atom().to_string();
                if symbol.is_empty() {
                    self.pos = start;
                    return Err(self.error("expected an operation symbol"));
                }
                let mut args = Vec::new();
                loop {
                    self.skip_ws();
                    match self.src[self.pos..].chars().next() {
                        Some(')') => {
                            self.pos += 1;
                            return Ok(Term::apply(symbol, args));
                        }
                        None => return Err(self.error("unclosed `(`")),
                        _ => args.push(self.term()?),
                    }
                }
            }
            Some(_) => {
                let start = self.pos;
                let atom = self.atom();
                match atom.strip_prefix('x').map(str::parse::<usize>) {
                    Some(Ok(i)) => Ok(Term::Var(i)),
                    _ => {
                        self.pos = start;
                        Err(self.error("expected a variable `x<i>` or `(`"))
                    }
                }
            }
        }
    }
}

fn tuple(t: &[Elem]) -> String {
    let cells: Vec<String> = t.iter().map(Elem::to_string).collect();
    format!("({})", cells.join(","))
}

/// Human-readable report. Witness terms are included when `witnesses` is set.
pub fn format_report(report: &DecisionReport, witnesses: bool) -> String {
    let mut out = String::new();
    let answer = match report.answer {
        Answer::Yes => "yes",
        Answer::No => "no",
    };
    let _ = writeln!(out, "problem: {}", report.problem.name());
    let _ = writeln!(out, "algebra: {}", report.algebra);
    let _ = writeln!(out, "k: {}", report.k);
    if let Some(n) = report.n {
        let _ = writeln!(out, "n: {n}");
    }
    let _ = writeln!(out, "answer: {answer}");
    let s = &report.stats;
    let _ = writeln!(
        out,
        "stats: pairs {} tuples {} largest {} rounds {} productions {} time {:.3}ms",
        s.pairs_checked,
        s.tuples_generated,
        s.largest_subpower,
        s.max_rounds,
        s.productions,
        s.elapsed_ms
    );
    if let Some(r) = &report.refutation {
        let _ = writeln!(
            out,
            "refuted by pair {} {} (subpower of size {} has no target tuple)",
            tuple(&r.first),
            tuple(&r.second),
            r.subpower_size
        );
    }
    if witnesses {
        for w in &report.witnesses {
            let _ = writeln!(
                out,
                "witness {} {}: {}",
                tuple(&w.first),
                tuple(&w.second),
                w.term
            );
            let _ = writeln!(out, "  gives {}; {}", tuple(&w.tuple), w.identities);
        }
    }
    out
}

pub fn report_to_json(report: &DecisionReport) -> String {
    serde_json::to_string_pretty(report).expect("reports always serialize")
}

pub fn report_from_json(text: &str) -> Result<DecisionReport> {
    serde_json::from_str(text).map_err(|e| err(e.line(), e.column(), e.to_string()))
}
