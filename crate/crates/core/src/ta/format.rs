//! `.nta` text format, timed-word syntax and DOT export.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::rational::{fmt_q_dec, parse_q};
use crate::ta::automaton::{TimedAutomaton, TimedWord};
use crate::ta::constraint::{Cmp, Constraint};

fn err(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        col,
        msg: msg.into(),
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(i64),
    Op(Cmp),
    Minus,
    Not,
    And,
    Or,
    LParen,
    RParen,
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '.' | '\'' | '@' | '*' | '$' | '[' | ']')
}

fn lex(src: &str, line: usize, col0: usize) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    let mut out = Vec::new();
    while i < chars.len() {
        let c = chars[i];
        let col = col0 + i;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let two: String = chars[i..(i + 2).min(chars.len())].iter().collect();
        let (tok, len) = match two.as_str() {
            "&&" => (Tok::And, 2),
            "||" => (Tok::Or, 2),
            "<=" => (Tok::Op(Cmp::Le), 2),
            ">=" => (Tok::Op(Cmp::Ge), 2),
            "==" => (Tok::Op(Cmp::Eq), 2),
            _ => match c {
                '<' => (Tok::Op(Cmp::Lt), 1),
                '>' => (Tok::Op(Cmp::Gt), 1),
                '=' => (Tok::Op(Cmp::Eq), 1),
                '!' => (Tok::Not, 1),
                '(' => (Tok::LParen, 1),
                ')' => (Tok::RParen, 1),
                '-' if chars.get(i + 1).map_or(false, |d| d.is_ascii_digit()) && matches!(out.last(), Some((Tok::Op(_), _))) => {
                    let mut j = i + 1;
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                    let s: String = chars[i..j].iter().collect();
                    let v = s.parse().map_err(|_| err(line, col, "integer out of range"))?;
                    (Tok::Int(v), j - i)
                }
                '-' => (Tok::Minus, 1),
                d if d.is_ascii_digit() => {
                    let mut j = i;
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                    let s: String = chars[i..j].iter().collect();
                    let v = s.parse().map_err(|_| err(line, col, "integer out of range"))?;
                    (Tok::Int(v), j - i)
                }
                a if is_ident_char(a) => {
                    let mut j = i;
                    while j < chars.len() && is_ident_char(chars[j]) {
                        j += 1;
                    }
                    (Tok::Ident(chars[i..j].iter().collect()), j - i)
                }
                other => return Err(err(line, col, format!("unexpected character `{other}`"))),
            },
        };
        out.push((tok, col));
        i += len;
    }
    Ok(out)
}

struct CParser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    line: usize,
    end_col: usize,
    clocks: &'a [String],
}

impl CParser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |(_, c)| *c)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        t
    }

    fn or(&mut self) -> Result<Constraint> {
        let mut c = self.and()?;
        while self.peek() == Some(&Tok::Or) {
            self.pos += 1;
            c = Constraint::Or(Box::new(c), Box::new(self.and()?));
        }
        Ok(c)
    }

    fn and(&mut self) -> Result<Constraint> {
        let mut c = self.unary()?;
        while self.peek() == Some(&Tok::And) {
            self.pos += 1;
            c = Constraint::And(Box::new(c), Box::new(self.unary()?));
        }
        Ok(c)
    }

    fn clock(&self, name: &str, col: usize) -> Result<usize> {
        self.clocks
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| Error::Semantic(format!("line {}:{col}: unknown clock `{name}`", self.line)))
    }

    fn unary(&mut self) -> Result<Constraint> {
        let col = self.col();
        match self.next() {
            Some(Tok::Not) => Ok(Constraint::Not(Box::new(self.unary()?))),
            Some(Tok::LParen) => {
                let c = self.or()?;
                let col = self.col();
                match self.next() {
                    Some(Tok::RParen) => Ok(c),
                    _ => Err(err(self.line, col, "expected `)`")),
                }
            }
            Some(Tok::Ident(s)) if s == "true" => Ok(Constraint::True),
            Some(Tok::Ident(s)) if s == "false" => Ok(Constraint::False),
            Some(Tok::Ident(x)) => {
                let cx = self.clock(&x, col)?;
                let minus = if self.peek() == Some(&Tok::Minus) {
                    self.pos += 1;
                    let col = self.col();
                    match self.next() {
                        Some(Tok::Ident(y)) => Some(self.clock(&y, col)?),
                        _ => return Err(err(self.line, col, "expected clock after `-`")),
                    }
                } else {
                    None
                };
                let col = self.col();
                let op = match self.next() {
                    Some(Tok::Op(op)) => op,
                    _ => return Err(err(self.line, col, "expected comparison operator")),
                };
                let col = self.col();
                let bound = match self.next() {
                    Some(Tok::Int(v)) => v,
                    _ => return Err(err(self.line, col, "expected integer constant")),
                };
                Ok(Constraint::Atom {
                    clock: cx,
                    minus,
                    op,
                    bound,
                })
            }
            _ => Err(err(self.line, col, "expected constraint")),
        }
    }
}

/// Parses a constraint over the given clock names.
pub fn parse_constraint(src: &str, clocks: &[String]) -> Result<Constraint> {
    parse_constraint_at(src, clocks, 1, 1)
}

fn parse_constraint_at(src: &str, clocks: &[String], line: usize, col0: usize) -> Result<Constraint> {
    let toks = lex(src, line, col0)?;
    let mut p = CParser {
        toks,
        pos: 0,
        line,
        end_col: col0 + src.chars().count(),
        clocks,
    };
    let c = p.or()?;
    if p.pos < p.toks.len() {
        return Err(err(line, p.col(), "trailing tokens in constraint"));
    }
    Ok(c)
}

/// Parses a `.nta` document into a validated automaton.
pub fn parse_automaton(text: &str) -> Result<TimedAutomaton> {
    let mut a = TimedAutomaton::new("A", vec![], vec![]);
    let mut have_alphabet = false;
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let body = raw.split('#').next().unwrap_or("");
        let trimmed = body.trim_start();
        let indent = body.len() - trimmed.len();
        let trimmed = trimmed.trim_end();
        if trimmed.is_empty() {
            continue;
        }
        let mut words = trimmed.split_whitespace();
        let kw = words.next().unwrap();
        let rest: Vec<&str> = words.collect();
        match kw {
            "automaton" => {
                a.name = rest.first().ok_or_else(|| err(line, indent + 1, "missing automaton name"))?.to_string();
            }
            "alphabet" => {
                for s in rest {
                    if a.alphabet.iter().any(|x| x == s) {
                        return Err(Error::Semantic(format!("line {line}: duplicate symbol `{s}`")));
                    }
                    a.alphabet.push(s.to_string());
                }
                have_alphabet = true;
            }
            "clocks" => {
                for c in rest {
                    if a.clocks.iter().any(|x| x == c) {
                        return Err(Error::Semantic(format!("line {line}: duplicate clock `{c}`")));
                    }
                    a.clocks.push(c.to_string());
                }
            }
            "location" => {
                let name = rest.first().ok_or_else(|| err(line, indent + 1, "missing location name"))?;
                if a.location(name).is_some() {
                    return Err(Error::Semantic(format!("line {line}: duplicate location `{name}`")));
                }
                let mut init = false;
                let mut fin = false;
                for flag in &rest[1..] {
                    match *flag {
                        "init" | "initial" => init = true,
                        "final" | "accepting" => fin = true,
                        other => return Err(err(line, indent + 1, format!("unknown location flag `{other}`"))),
                    }
                }
                a.add_location(*name, init, fin);
            }
            "trans" => parse_trans(&mut a, trimmed, line, indent)?,
            other => return Err(err(line, indent + 1, format!("unknown keyword `{other}`"))),
        }
    }
    if !have_alphabet {
        return Err(err(1, 1, "missing `alphabet` line"));
    }
    a.validate()?;
    Ok(a)
}

fn parse_trans(a: &mut TimedAutomaton, s: &str, line: usize, indent: usize) -> Result<()> {
    // trans <src> -> <dst> on <sym> [when <constraint>] [reset {<clock>,...}]
    let col_of = |sub: &str| indent + 1 + s.find(sub).unwrap_or(0);
    let after_kw = &s["trans".len()..];
    let (head, tail) = match after_kw.find(" on ") {
        Some(i) => (&after_kw[..i], &after_kw[i + 4..]),
        None => return Err(err(line, indent + 1, "expected `on <symbol>`")),
    };
    let (src, dst) = head
        .split_once("->")
        .ok_or_else(|| err(line, indent + 7, "expected `<src> -> <dst>`"))?;
    let (src, dst) = (src.trim(), dst.trim());
    let lookup = |name: &str| {
        a.location(name)
            .ok_or_else(|| Error::Semantic(format!("line {line}: unknown location `{name}`")))
    };
    let source = lookup(src)?;
    let target = lookup(dst)?;
    let tail = tail.trim_start();
    let (sym, tail) = tail.split_once(char::is_whitespace).unwrap_or((tail, ""));
    let symbol = a
        .symbol(sym)
        .ok_or_else(|| Error::Semantic(format!("line {line}: unknown symbol `{sym}`")))?;
    let tail = tail.trim();
    let (guard_src, reset_src) = match tail.find("reset") {
        Some(i) => (&tail[..i], Some(&tail[i + 5..])),
        None => (tail, None),
    };
    let guard_src = guard_src.trim();
    let guard = if guard_src.is_empty() {
        Constraint::True
    } else if let Some(g) = guard_src.strip_prefix("when") {
        parse_constraint_at(g, &a.clocks, line, col_of(g))?
    } else {
        return Err(err(line, col_of(guard_src), "expected `when` or `reset`"));
    };
    let mut resets = Vec::new();
    if let Some(r) = reset_src {
        let r = r.trim();
        let inner = r
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .ok_or_else(|| err(line, col_of(r), "expected `{clock,...}`"))?;
        for c in inner.split(',').map(str::trim).filter(|c| !c.is_empty()) {
            resets.push(
                a.clock(c)
                    .ok_or_else(|| Error::Semantic(format!("line {line}: unknown clock `{c}`")))?,
            );
        }
    }
    a.add_rule(source, symbol, guard, resets, target);
    Ok(())
}

/// Serialises to the `.nta` format; `parse_automaton` reads it back.
pub fn to_nta(a: &TimedAutomaton) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "automaton {}", a.name);
    let _ = writeln!(s, "alphabet {}", a.alphabet.join(" "));
    let _ = writeln!(s, "clocks {}", a.clocks.join(" "));
    for (i, l) in a.locations.iter().enumerate() {
        let mut line = format!("location {l}");
        if a.initial.contains(&i) {
            line.push_str(" init");
        }
        if a.finals.contains(&i) {
            line.push_str(" final");
        }
        let _ = writeln!(s, "{line}");
    }
    for r in &a.rules {
        let mut line = format!(
            "trans {} -> {} on {} when {}",
            a.locations[r.source],
            a.locations[r.target],
            a.alphabet[r.symbol],
            r.guard.display(&a.clocks)
        );
        if !r.resets.is_empty() {
            let names: Vec<&str> = r.resets.iter().map(|&c| a.clocks[c].as_str()).collect();
            let _ = write!(line, " reset {{{}}}", names.join(","));
        }
        let _ = writeln!(s, "{line}");
    }
    s
}

/// Graphviz rendering for visual inspection.
pub fn to_dot(a: &TimedAutomaton) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "digraph \"{}\" {{", a.name);
    let _ = writeln!(s, "  rankdir=LR;");
    for (i, l) in a.locations.iter().enumerate() {
        let shape = if a.finals.contains(&i) { "doublecircle" } else { "circle" };
        let _ = writeln!(s, "  n{i} [label=\"{}\", shape={shape}];", l.replace('"', "\\\""));
        if a.initial.contains(&i) {
            let _ = writeln!(s, "  init{i} [shape=point];");
            let _ = writeln!(s, "  init{i} -> n{i};");
        }
    }
    for r in &a.rules {
        let mut label = format!("{}, {}", a.alphabet[r.symbol], r.guard.display(&a.clocks));
        if !r.resets.is_empty() {
            let names: Vec<&str> = r.resets.iter().map(|&c| a.clocks[c].as_str()).collect();
            let _ = write!(label, ", {{{}}}:=0", names.join(","));
        }
        let _ = writeln!(s, "  n{} -> n{} [label=\"{}\"];", r.source, r.target, label.replace('"', "\\\""));
    }
    s.push_str("}\n");
    s
}

/// Parses `a@0 b@1/2 a@2.5`.
pub fn parse_word(text: &str) -> Result<TimedWord> {
    let mut letters = Vec::new();
    for (i, tok) in text.split_whitespace().enumerate() {
        let (sym, t) = tok.rsplit_once('@').ok_or_else(|| err(1, i + 1, format!("token `{tok}` is not sym@time")))?;
        if sym.is_empty() {
            return Err(err(1, i + 1, "empty symbol"));
        }
        let t = parse_q(t).map_err(|_| err(1, i + 1, format!("bad timestamp in `{tok}`")))?;
        letters.push((sym.to_string(), t));
    }
    TimedWord::new(letters)
}

pub fn format_word(w: &TimedWord) -> String {
    w.0.iter()
        .map(|(a, t)| format!("{a}@{}", fmt_q_dec(t)))
        .collect::<Vec<_>>()
        .join(" ")
}
