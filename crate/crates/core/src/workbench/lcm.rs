//! Lossy counter machines: parsing, bounded reachability, the reversal
//! encoding of runs as timed words, and a one-clock automaton accepting
//! exactly the words that are not such encodings.
//!
//! Encoding conventions (the automaton checks exactly these):
//! - the word is `p_n d_n u_n  ...  p_1 d_1 u_1  p_0`, block `i` starting at
//!   time `n - i`; the instruction letter shares its block's timestamp;
//! - counter letters lie strictly inside their block's unit interval, with
//!   strictly increasing timestamps, sorted by counter;
//! - a unit of block `i` that survives from configuration `i - 1` reappears
//!   exactly one time unit later in block `i - 1`;
//! - after `incr c`, the last `c` of the block may be new (no partner);
//! - after `decr c`, the last `c` of the following block is the consumed
//!   unit and is nobody's partner.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::rational::{floor, midpoint, q, Q};
use crate::ta::automaton::{TimedAutomaton, TimedWord};
use crate::ta::constraint::{Cmp, Constraint};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Op {
    Incr(usize),
    Decr(usize),
    Ztest(usize),
}

impl Op {
    pub fn counter(self) -> usize {
        match self {
            Op::Incr(c) | Op::Decr(c) | Op::Ztest(c) => c,
        }
    }

    fn keyword(self) -> &'static str {
        match self {
            Op::Incr(_) => "incr",
            Op::Decr(_) => "decr",
            Op::Ztest(_) => "ztest",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instr {
    pub name: String,
    pub source: usize,
    pub op: Op,
    pub target: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lcm {
    pub counters: Vec<String>,
    pub locations: Vec<String>,
    pub initial: usize,
    pub instrs: Vec<Instr>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LcmConfig {
    pub loc: usize,
    pub values: Vec<u64>,
}

impl Lcm {
    pub fn start(&self) -> LcmConfig {
        LcmConfig {
            loc: self.initial,
            values: vec![0; self.counters.len()],
        }
    }

    /// Largest valuation reachable by `instr` from `u`, if it is enabled.
    pub fn step(&self, instr: usize, u: &LcmConfig) -> Option<LcmConfig> {
        let d = &self.instrs[instr];
        if d.source != u.loc {
            return None;
        }
        let mut v = u.values.clone();
        match d.op {
            Op::Incr(c) => v[c] += 1,
            Op::Decr(c) => v[c] = v[c].checked_sub(1)?,
            Op::Ztest(c) if v[c] != 0 => return None,
            Op::Ztest(_) => {}
        }
        Some(LcmConfig { loc: d.target, values: v })
    }

    /// Whether `v` is a lossy successor of `u` under `instr`.
    pub fn allows(&self, instr: usize, u: &LcmConfig, v: &LcmConfig) -> bool {
        self.step(instr, u)
            .is_some_and(|top| top.loc == v.loc && v.values.iter().zip(&top.values).all(|(a, b)| a <= b))
    }

    pub fn instr(&self, name: &str) -> Option<usize> {
        self.instrs.iter().position(|d| d.name == name)
    }

    /// `Q ∪ Δ ∪ C`, in that order.
    pub fn alphabet(&self) -> Vec<String> {
        let mut out = self.locations.clone();
        out.extend(self.instrs.iter().map(|d| d.name.clone()));
        out.extend(self.counters.iter().cloned());
        out
    }

    pub fn config_display(&self, c: &LcmConfig) -> String {
        let vals: Vec<String> = c.values.iter().map(u64::to_string).collect();
        format!("({}, [{}])", self.locations[c.loc], vals.join(","))
    }
}

impl fmt::Display for Lcm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "counters {}", self.counters.join(" "))?;
        for (i, l) in self.locations.iter().enumerate() {
            writeln!(f, "location {l}{}", if i == self.initial { " init" } else { "" })?;
        }
        for d in &self.instrs {
            writeln!(
                f,
                "instr {} {} {} {} as {}",
                self.locations[d.source],
                d.op.keyword(),
                self.counters[d.op.counter()],
                self.locations[d.target],
                d.name
            )?;
        }
        Ok(())
    }
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        col: 1,
        msg: msg.into(),
    }
}

/// Line grammar:
///
/// ```text
/// counters 4                 # or explicit names: counters a b c d
/// location p init
/// location q
/// instr p incr c1 q          # optional `as NAME` for the letter
/// ```
///
/// Instruction letters default to `p.incr.c1.q`.
pub fn parse_lcm(text: &str) -> Result<Lcm> {
    let mut counters: Option<Vec<String>> = None;
    let mut locations: Vec<String> = vec![];
    let mut initial = None;
    let mut raw: Vec<(usize, Vec<String>)> = vec![];
    for (i, line) in text.lines().enumerate() {
        let ln = i + 1;
        let line = line.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let toks: Vec<String> = line.split_whitespace().map(str::to_string).collect();
        match toks[0].as_str() {
            "counters" => {
                if counters.is_some() {
                    return Err(perr(ln, "counters declared twice"));
                }
                let names = match toks.get(1).map(|t| t.parse::<usize>()) {
                    Some(Ok(n)) if toks.len() == 2 => (1..=n).map(|i| format!("c{i}")).collect(),
                    _ => toks[1..].to_vec(),
                };
                counters = Some(names);
            }
            "location" => {
                let name = toks.get(1).ok_or_else(|| perr(ln, "location needs a name"))?;
                if locations.contains(name) {
                    return Err(perr(ln, format!("location `{name}` declared twice")));
                }
                match toks.get(2).map(String::as_str) {
                    None => {}
                    Some("init") if initial.is_none() => initial = Some(locations.len()),
                    Some("init") => return Err(perr(ln, "second initial location")),
                    Some(other) => return Err(perr(ln, format!("unexpected `{other}`"))),
                }
                locations.push(name.clone());
            }
            "instr" => raw.push((ln, toks)),
            other => return Err(perr(ln, format!("unknown directive `{other}`"))),
        }
    }
    let counters = counters.unwrap_or_else(|| (1..=4).map(|i| format!("c{i}")).collect());
    let initial = initial.ok_or_else(|| perr(1, "no initial location"))?;
    let mut instrs = vec![];
    for (ln, toks) in raw {
        let name_at = |k: usize| toks.get(k).ok_or_else(|| perr(ln, "instr p op c q [as NAME]"));
        let loc = |s: &String| locations.iter().position(|l| l == s).ok_or_else(|| perr(ln, format!("unknown location `{s}`")));
        let source = loc(name_at(1)?)?;
        let cname = name_at(3)?;
        let c = counters
            .iter()
            .position(|x| x == cname)
            .ok_or_else(|| perr(ln, format!("unknown counter `{cname}`")))?;
        let op = match name_at(2)?.as_str() {
            "incr" => Op::Incr(c),
            "decr" => Op::Decr(c),
            "ztest" => Op::Ztest(c),
            other => return Err(perr(ln, format!("unknown operation `{other}`"))),
        };
        let target = loc(name_at(4)?)?;
        let name = match toks.get(5).map(String::as_str) {
            None => format!("{}.{}.{}.{}", toks[1], toks[2], toks[3], toks[4]),
            Some("as") => name_at(6)?.clone(),
            Some(other) => return Err(perr(ln, format!("unexpected `{other}`"))),
        };
        instrs.push(Instr { name, source, op, target });
    }
    let lcm = Lcm {
        counters,
        locations,
        initial,
        instrs,
    };
    let letters = lcm.alphabet();
    let distinct: BTreeSet<&String> = letters.iter().collect();
    if distinct.len() != letters.len() {
        return Err(Error::Semantic("locations, instructions and counters must have distinct names".into()));
    }
    Ok(lcm)
}

/// A run from the initial configuration: each step names the instruction
/// and the configuration it leads to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LcmRun {
    pub steps: Vec<(usize, LcmConfig)>,
}

impl LcmRun {
    pub fn configs(&self, m: &Lcm) -> Vec<LcmConfig> {
        let mut out = vec![m.start()];
        out.extend(self.steps.iter().map(|(_, c)| c.clone()));
        out
    }

    pub fn check(&self, m: &Lcm) -> Result<()> {
        let mut u = m.start();
        for (i, (d, v)) in self.steps.iter().enumerate() {
            if !m.allows(*d, &u, v) {
                return Err(Error::Precondition(format!(
                    "step {} ({}) cannot lead from {} to {}",
                    i + 1,
                    m.instrs[*d].name,
                    m.config_display(&u),
                    m.config_display(v)
                )));
            }
            u = v.clone();
        }
        Ok(())
    }
}

/// Whitespace-separated steps `NAME` (no loss) or `NAME=v1,v2,...`.
pub fn parse_run(m: &Lcm, text: &str) -> Result<LcmRun> {
    let mut u = m.start();
    let mut steps = vec![];
    for (i, tok) in text.split_whitespace().enumerate() {
        let (name, vals) = match tok.split_once('=') {
            Some((n, v)) => (n, Some(v)),
            None => (tok, None),
        };
        let d = m.instr(name).ok_or_else(|| perr(1, format!("unknown instruction `{name}` in step {}", i + 1)))?;
        let top = m
            .step(d, &u)
            .ok_or_else(|| Error::Precondition(format!("step {} ({name}) is not enabled in {}", i + 1, m.config_display(&u))))?;
        let v = match vals {
            None => top,
            Some(vs) => {
                let values = vs
                    .split(',')
                    .map(|s| s.trim().parse::<u64>().map_err(|_| perr(1, format!("bad counter value `{s}`"))))
                    .collect::<Result<Vec<_>>>()?;
                if values.len() != m.counters.len() {
                    return Err(perr(1, format!("step {} needs {} counter values", i + 1, m.counters.len())));
                }
                LcmConfig { loc: top.loc, values }
            }
        };
        if !m.allows(d, &u, &v) {
            return Err(Error::Precondition(format!("step {} ({name}) cannot reach {}", i + 1, m.config_display(&v))));
        }
        u = v.clone();
        steps.push((d, v));
    }
    Ok(LcmRun { steps })
}

/// Reachable configurations explored up to a counter cap.
#[derive(Debug, Clone)]
pub struct BoundedReach {
    /// Downward closed: every lossy successor is listed.
    pub configs: BTreeSet<LcmConfig>,
    /// Every explored counter value stayed strictly below the cap.
    pub below_cap: bool,
    /// The exploration finished within the configuration limit.
    pub complete: bool,
}

/// Breadth-first search of the lossy semantics with counters truncated at
/// `cap`. A labelling heuristic for generated instances: finiteness itself
/// is undecidable.
pub fn lcm_bounded_reach(m: &Lcm, cap: u64, max_configs: usize) -> BoundedReach {
    let mut configs = BTreeSet::from([m.start()]);
    let mut queue = VecDeque::from([m.start()]);
    let mut below_cap = true;
    while let Some(u) = queue.pop_front() {
        for d in 0..m.instrs.len() {
            let Some(mut top) = m.step(d, &u) else { continue };
            for v in top.values.iter_mut() {
                if *v >= cap {
                    below_cap = false;
                    *v = cap;
                }
            }
            for v in downward(&top) {
                if configs.contains(&v) {
                    continue;
                }
                if configs.len() >= max_configs {
                    return BoundedReach {
                        configs,
                        below_cap,
                        complete: false,
                    };
                }
                configs.insert(v.clone());
                queue.push_back(v);
            }
        }
    }
    BoundedReach {
        configs,
        below_cap,
        complete: true,
    }
}

fn downward(top: &LcmConfig) -> Vec<LcmConfig> {
    let mut out = vec![LcmConfig {
        loc: top.loc,
        values: vec![],
    }];
    for &bound in &top.values {
        out = out
            .into_iter()
            .flat_map(|c| {
                (0..=bound).map(move |v| {
                    let mut c = c.clone();
                    c.values.push(v);
                    c
                })
            })
            .collect();
    }
    out
}

/// A reversal encoding together with the persistence pairs it contains.
#[derive(Debug, Clone)]
pub struct Encoding {
    pub word: TimedWord,
    /// `(i, j)`: letter `i` reappears as letter `j` one time unit later.
    pub partners: Vec<(usize, usize)>,
    /// Letters that may go unmatched: the unit created by an increment.
    pub fresh: BTreeSet<usize>,
    /// Word positions of control letters.
    pub controls: Vec<usize>,
}

/// Builds the reversal encoding of `run`. Every unit keeps a fixed
/// fractional offset for as long as it survives.
pub fn reversal_encoding(m: &Lcm, run: &LcmRun) -> Result<Encoding> {
    run.check(m)?;
    let configs = run.configs(m);
    let n = run.steps.len();
    let cn = m.counters.len();
    // units[j][c]: (offset, id) of config j's units of counter c, ascending
    let mut units: Vec<Vec<Vec<(Q, usize)>>> = vec![vec![vec![]; cn]];
    let mut next_id = 0usize;
    let mut fresh_ids = BTreeSet::new();
    for (j, (d, v)) in run.steps.iter().enumerate() {
        let prev = &units[j];
        let op = m.instrs[*d].op;
        let mut cur: Vec<Vec<(Q, usize)>> = (0..cn)
            .map(|c| {
                let mut cand = prev[c].clone();
                if op == Op::Decr(c) {
                    cand.pop();
                }
                cand.truncate(v.values[c] as usize);
                cand
            })
            .collect();
        if let Op::Incr(c) = op {
            if (cur[c].len() as u64) < v.values[c] {
                let lo = cur[..=c].iter().flatten().map(|(f, _)| f.clone()).max().unwrap_or_else(|| q(0));
                let hi = cur[c + 1..].iter().flatten().map(|(f, _)| f.clone()).min().unwrap_or_else(|| q(1));
                cur[c].push((midpoint(&lo, &hi), next_id));
                fresh_ids.insert(next_id);
                next_id += 1;
            }
        }
        debug_assert!(cur.iter().zip(&v.values).all(|(u, &x)| u.len() as u64 == x));
        units.push(cur);
    }
    let mut word = TimedWord::default();
    let mut pos: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut fresh = BTreeSet::new();
    let mut controls = vec![];
    for j in (0..=n).rev() {
        let base = q((n - j) as i64);
        controls.push(word.len());
        word.push(m.locations[configs[j].loc].clone(), base.clone());
        if j == 0 {
            break;
        }
        word.push(m.instrs[run.steps[j - 1].0].name.clone(), base.clone());
        for (c, us) in units[j].iter().enumerate() {
            for (f, id) in us {
                pos.insert((j, *id), word.len());
                if fresh_ids.contains(id) && !units[j - 1][c].iter().any(|(_, i)| i == id) {
                    fresh.insert(word.len());
                }
                word.push(m.counters[c].clone(), &base + f);
            }
        }
    }
    let mut partners = vec![];
    for j in 1..=n {
        for us in &units[j] {
            for (_, id) in us {
                if let Some(&later) = pos.get(&(j - 1, *id)) {
                    partners.push((pos[&(j, *id)], later));
                }
            }
        }
    }
    partners.sort();
    Ok(Encoding {
        word,
        partners,
        fresh,
        controls,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// Moves a control letter off the one-second grid.
    ShiftControl,
    /// Moves a counter letter so that it loses its partner.
    ShiftCounter,
    /// Deletes the later occurrence of a persisting unit.
    DropPartner,
}

impl Fault {
    pub const ALL: [Fault; 3] = [Fault::ShiftControl, Fault::ShiftCounter, Fault::DropPartner];
}

/// Applies a single fault to a valid encoding; `None` when the encoding
/// offers no place for it (no persisting unit that must be matched).
pub fn inject_fault(m: &Lcm, enc: &Encoding, fault: Fault) -> Option<TimedWord> {
    let w = &enc.word.0;
    match fault {
        Fault::ShiftControl => {
            let mut out = w.clone();
            match enc.controls.last() {
                Some(&i) if i > 0 => {
                    let t = midpoint(&w[i - 1].1, &w[i].1);
                    out[i].1 = t;
                }
                _ => out[0].1 = midpoint(&w[0].1, &q(1)),
            }
            Some(TimedWord(out))
        }
        Fault::ShiftCounter | Fault::DropPartner => {
            let &(_, later) = enc.partners.iter().find(|(i, _)| must_match(m, enc, *i))?;
            let mut out = w.clone();
            if fault == Fault::DropPartner {
                out.remove(later);
            } else {
                let t = &w[later].1;
                let ceiling = Q::from_integer(floor(t) + 1);
                let bound = w.get(later + 1).map(|(_, s)| s.clone()).unwrap_or(ceiling.clone()).min(ceiling);
                out[later].1 = midpoint(t, &bound);
            }
            Some(TimedWord(out))
        }
    }
}

/// Whether losing the partner of letter `i` breaks the encoding: it does
/// unless `i` is the last unit of its counter right after an increment of it.
fn must_match(m: &Lcm, enc: &Encoding, i: usize) -> bool {
    let w = &enc.word.0;
    let letter = &w[i].0;
    let block = enc.controls.iter().rposition(|&c| c < i).expect("counter letters follow a control letter");
    let instr = m.instr(&w[enc.controls[block] + 1].0).expect("instruction follows control");
    let is_last = w.get(i + 1).is_none_or(|(l, _)| l != letter);
    let counter = m.counters.iter().position(|c| c == letter).expect("counter letter");
    !(is_last && m.instrs[instr].op == Op::Incr(counter))
}

struct Builder<'a> {
    m: &'a Lcm,
    a: TimedAutomaton,
    acc: usize,
}

fn x(op: Cmp, c: i64) -> Constraint {
    Constraint::atom(0, op, c)
}

impl Builder<'_> {
    fn loc(&mut self, name: String, initial: bool, fin: bool) -> usize {
        self.a.add_location(name, initial, fin)
    }

    fn rule(&mut self, s: usize, sym: usize, g: Constraint, reset: bool, t: usize) {
        self.a.add_rule(s, sym, g, if reset { vec![0] } else { vec![] }, t);
    }

    fn sym_instr(&self, d: usize) -> usize {
        self.m.locations.len() + d
    }

    fn sym_counter(&self, c: usize) -> usize {
        self.m.locations.len() + self.m.instrs.len() + c
    }

    fn controls(&self) -> impl Iterator<Item = usize> {
        0..self.m.locations.len()
    }

    fn instr_syms(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.m.instrs.len()).map(|d| self.sym_instr(d))
    }

    fn counter_syms(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.m.counters.len()).map(|c| self.sym_counter(c))
    }

    fn all_syms(&self) -> std::ops::Range<usize> {
        0..self.a.alphabet.len()
    }

    fn idle(&mut self, name: &str) -> usize {
        let l = self.loc(format!("{name}.idle"), true, false);
        for s in self.all_syms() {
            self.rule(l, s, Constraint::True, false, l);
        }
        l
    }

    /// Complement of the untimed block grammar `(p d c1* .. ck*)* q0`,
    /// including the control consistency of each instruction.
    fn structure(&mut self) {
        let m = self.m;
        let (nq, nd, nc) = (m.locations.len(), m.instrs.len(), m.counters.len());
        let init = self.loc("s.init".into(), true, true);
        let p: Vec<usize> = (0..nq).map(|i| self.loc(format!("s.at.{}", m.locations[i]), false, i != m.initial)).collect();
        let d: Vec<Vec<usize>> = (0..nd)
            .map(|i| (0..=nc).map(|j| self.loc(format!("s.{}.{j}", m.instrs[i].name), false, true)).collect())
            .collect();
        let sink = self.acc;
        for s in self.all_syms() {
            let next = if s < nq { p[s] } else { sink };
            self.rule(init, s, Constraint::True, false, next);
        }
        for (i, &pi) in p.iter().enumerate() {
            for s in self.all_syms() {
                let next = match s.checked_sub(nq) {
                    Some(di) if di < nd && m.instrs[di].target == i => d[di][0],
                    _ => sink,
                };
                self.rule(pi, s, Constraint::True, false, next);
            }
        }
        for di in 0..nd {
            for j in 0..=nc {
                for s in self.all_syms() {
                    let next = if s < nq {
                        if m.instrs[di].source == s { p[s] } else { sink }
                    } else if s >= nq + nd {
                        let c = s - nq - nd;
                        if c + 1 >= j { d[di][c + 1] } else { sink }
                    } else {
                        sink
                    };
                    self.rule(d[di][j], s, Constraint::True, false, next);
                }
            }
        }
    }

    /// Timing of control, instruction and counter letters.
    fn grid(&mut self) {
        let acc = self.acc;
        let first = self.loc("g.first".into(), true, false);
        for s in self.all_syms() {
            self.rule(first, s, x(Cmp::Gt, 0), false, acc);
        }
        let idle = self.idle("g");
        let at = self.loc("g.control".into(), false, false);
        let inside = self.loc("g.inside".into(), false, false);
        let controls: Vec<usize> = self.controls().collect();
        let instrs: Vec<usize> = self.instr_syms().collect();
        let counters: Vec<usize> = self.counter_syms().collect();
        for &p in &controls {
            self.rule(idle, p, Constraint::True, true, at);
            let off_grid = x(Cmp::Lt, 1).or(x(Cmp::Gt, 1));
            self.rule(inside, p, off_grid, false, acc);
        }
        for &d in &instrs {
            self.rule(at, d, x(Cmp::Gt, 0), false, acc);
            self.rule(at, d, x(Cmp::Eq, 0), false, inside);
        }
        for &c in &counters {
            self.rule(inside, c, x(Cmp::Eq, 0).or(x(Cmp::Ge, 1)), false, acc);
            self.rule(inside, c, x(Cmp::Gt, 0).and(x(Cmp::Lt, 1)), false, inside);
        }
        // two counter letters at one instant
        let idle = self.idle("g2");
        let last = self.loc("g2.counter".into(), false, false);
        for &c in &counters {
            self.rule(idle, c, Constraint::True, true, last);
            for &c2 in &counters {
                self.rule(last, c2, x(Cmp::Eq, 0), false, acc);
            }
        }
    }

    /// A unit of `c` without a partner one time unit later, where one is due.
    fn unmatched(&mut self, c: usize) {
        let acc = self.acc;
        let name = format!("u.{}", self.m.counters[c]);
        let idle = self.idle(&name);
        let blk = [self.loc(format!("{name}.block"), false, false), self.loc(format!("{name}.block_incr"), false, false)];
        let need = self.loc(format!("{name}.not_last"), false, false);
        let wait = self.loc(format!("{name}.wait"), false, true);
        let sc = self.sym_counter(c);
        for d in 0..self.m.instrs.len() {
            let k = usize::from(self.m.instrs[d].op == Op::Incr(c));
            self.rule(idle, self.sym_instr(d), Constraint::True, false, blk[k]);
        }
        let counters: Vec<usize> = self.counter_syms().collect();
        for (k, &b) in blk.iter().enumerate() {
            for &s in &counters {
                self.rule(b, s, Constraint::True, false, b);
            }
            self.rule(b, sc, Constraint::True, true, if k == 1 { need } else { wait });
        }
        self.rule(need, sc, x(Cmp::Lt, 1), false, wait);
        for s in self.all_syms() {
            let g = if s == sc { x(Cmp::Lt, 1) } else { x(Cmp::Le, 1) };
            self.rule(wait, s, g, false, wait);
            self.rule(wait, s, x(Cmp::Gt, 1), false, acc);
        }
    }

    /// `decr c` whose next block has no `c`, or whose last `c` there has a
    /// predecessor; `ztest c` whose next block has a `c`.
    fn decrements(&mut self, c: usize) {
        let acc = self.acc;
        let cn = self.m.counters[c].clone();
        let sc = self.sym_counter(c);
        let counters: Vec<usize> = self.counter_syms().collect();
        let controls: Vec<usize> = self.controls().collect();
        let instrs: Vec<usize> = self.instr_syms().collect();
        let decrs: Vec<usize> = (0..self.m.instrs.len()).filter(|&d| self.m.instrs[d].op == Op::Decr(c)).map(|d| self.sym_instr(d)).collect();
        let ztests: Vec<usize> = (0..self.m.instrs.len()).filter(|&d| self.m.instrs[d].op == Op::Ztest(c)).map(|d| self.sym_instr(d)).collect();
        for (tag, trigger, want_c) in [("decr", &decrs, false), ("ztest", &ztests, true)] {
            if trigger.is_empty() {
                continue;
            }
            let name = format!("{tag}.{cn}");
            let idle = self.idle(&name);
            let here = self.loc(format!("{name}.here"), false, false);
            let next = self.loc(format!("{name}.next"), false, !want_c);
            for &d in trigger {
                self.rule(idle, d, Constraint::True, false, here);
            }
            for &s in &counters {
                self.rule(here, s, Constraint::True, false, here);
            }
            for &p in &controls {
                self.rule(here, p, Constraint::True, false, next);
                if !want_c {
                    self.rule(next, p, Constraint::True, false, acc);
                }
            }
            for &s in counters.iter().chain(&instrs) {
                if s != sc {
                    self.rule(next, s, Constraint::True, false, next);
                }
            }
            if want_c {
                self.rule(next, sc, Constraint::True, false, acc);
            }
        }
        if decrs.is_empty() {
            return;
        }
        let name = format!("consumed.{cn}");
        let idle = self.idle(&name);
        let here = self.loc(format!("{name}.here"), false, false);
        let wait = self.loc(format!("{name}.wait"), false, false);
        let hit = self.loc(format!("{name}.hit"), false, true);
        for &d in &decrs {
            self.rule(idle, d, Constraint::True, false, here);
        }
        for &s in &counters {
            self.rule(here, s, Constraint::True, false, here);
        }
        self.rule(here, sc, Constraint::True, true, wait);
        for s in self.all_syms() {
            self.rule(wait, s, x(Cmp::Lt, 1), false, wait);
            if s != sc {
                self.rule(wait, s, x(Cmp::Eq, 1), false, wait);
                self.rule(hit, s, Constraint::True, false, acc);
            }
        }
        self.rule(wait, sc, x(Cmp::Eq, 1), false, hit);
    }
}

/// One-clock automaton over `Q ∪ Δ ∪ C` accepting exactly the timed words
/// that are not reversal encodings of runs of `m`. Uses the constants 0
/// and 1 only.
pub fn encode_lcm(m: &Lcm) -> TimedAutomaton {
    let mut a = TimedAutomaton::new("lcm_complement", m.alphabet(), vec!["x".into()]);
    let acc = a.add_location("acc", false, true);
    for s in 0..a.alphabet.len() {
        a.add_rule(acc, s, Constraint::True, vec![], acc);
    }
    let mut b = Builder { m, a, acc };
    b.structure();
    b.grid();
    for c in 0..m.counters.len() {
        b.unmatched(c);
        b.decrements(c);
    }
    b.a
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qf;
    use crate::ta::semantics::accepts;

    const LOOP: &str = "counters 4\nlocation q0 init\nlocation q1\ninstr q0 incr c1 q1 as up\ninstr q1 incr c2 q0 as up2\ninstr q0 decr c1 q0 as down\ninstr q1 ztest c3 q1 as zero\n";

    #[test]
    fn parses_and_prints() {
        let m = parse_lcm(LOOP).unwrap();
        assert_eq!(m.counters.len(), 4);
        assert_eq!(m.instrs[0].op, Op::Incr(0));
        let again = parse_lcm(&m.to_string()).unwrap();
        assert_eq!(again, m);
        let named = parse_lcm("counters 2\nlocation p init\ninstr p incr c1 p\n").unwrap();
        assert_eq!(named.instrs[0].name, "p.incr.c1.p");
    }

    #[test]
    fn bounded_reach_labels() {
        let m = parse_lcm("counters 4\nlocation p init\nlocation q\ninstr p decr c1 q\ninstr p ztest c2 q\n").unwrap();
        let r = lcm_bounded_reach(&m, 1, 1000);
        assert!(r.below_cap && r.complete);
        let m = parse_lcm("counters 4\nlocation p init\ninstr p incr c1 p\n").unwrap();
        let r = lcm_bounded_reach(&m, 3, 1000);
        assert!(!r.below_cap);
        for c in &r.configs {
            for (i, &v) in c.values.iter().enumerate() {
                for w in 0..v {
                    let mut d = c.clone();
                    d.values[i] = w;
                    assert!(r.configs.contains(&d));
                }
            }
        }
    }

    #[test]
    fn empty_run_is_rejected() {
        let m = parse_lcm(LOOP).unwrap();
        let a = encode_lcm(&m);
        assert_eq!(a.clock_count(), 1);
        assert_eq!(a.max_constant(), 1);
        let enc = reversal_encoding(&m, &LcmRun { steps: vec![] }).unwrap();
        assert_eq!(enc.word.to_string(), "q0@0");
        assert!(!accepts(&a, &enc.word));
        assert!(accepts(&a, &TimedWord::default()));
    }

    #[test]
    fn increment_encoding() {
        let m = parse_lcm(LOOP).unwrap();
        let a = encode_lcm(&m);
        let run = parse_run(&m, "up up2 down").unwrap();
        let enc = reversal_encoding(&m, &run).unwrap();
        assert!(!accepts(&a, &enc.word), "{}", enc.word);
        // the c2 unit stays at distance one
        let mut w = enc.word.clone();
        let (_, later) = enc.partners[0];
        w.0[later].1 = &w.0[later].1 + qf(1, 10);
        assert!(accepts(&a, &w));
    }

    #[test]
    fn faults_are_accepted() {
        let m = parse_lcm(LOOP).unwrap();
        let a = encode_lcm(&m);
        let run = parse_run(&m, "up up2 down up up2").unwrap();
        let enc = reversal_encoding(&m, &run).unwrap();
        assert!(!accepts(&a, &enc.word));
        for f in Fault::ALL {
            let w = inject_fault(&m, &enc, f).expect("fault applies");
            w.check().unwrap();
            assert!(accepts(&a, &w), "{f:?}: {w}");
        }
    }

    #[test]
    fn lossy_steps_are_valid() {
        let m = parse_lcm(LOOP).unwrap();
        let a = encode_lcm(&m);
        let run = parse_run(&m, "up up2 up=0,1,0,0 up2 down=0,2,0,0").unwrap_err();
        assert!(matches!(run, Error::Precondition(_)));
        let run = parse_run(&m, "up up2=0,1,0,0 up up2=1,1,0,0").unwrap();
        let enc = reversal_encoding(&m, &run).unwrap();
        assert!(!accepts(&a, &enc.word), "{}", enc.word);
    }
}
