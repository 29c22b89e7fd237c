//! Reset-point operational semantics.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::rational::{zero, Q};
use crate::ta::automaton::{Rule, TimedAutomaton, TimedWord};

/// `(location, reset points, now)`; the valuation is `now - reset`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration {
    pub location: usize,
    pub reset: Vec<Q>,
    pub now: Q,
}

impl Configuration {
    pub fn initial(loc: usize, clocks: usize) -> Self {
        Configuration {
            location: loc,
            reset: vec![zero(); clocks],
            now: zero(),
        }
    }

    pub fn valuation_at(&self, t: &Q) -> Vec<Q> {
        self.reset.iter().map(|u| t - u).collect()
    }
}

/// One discrete step: `(rule index, timestamp, configuration after)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub rule: usize,
    pub time: Q,
    pub after: Configuration,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Run {
    pub start: Configuration,
    pub steps: Vec<Step>,
}

pub fn fire(rule: &Rule, c: &Configuration, t: &Q) -> Option<Configuration> {
    if rule.source != c.location || !rule.guard.eval(&c.valuation_at(t)) {
        return None;
    }
    let mut reset = c.reset.clone();
    for &x in &rule.resets {
        reset[x] = t.clone();
    }
    Some(Configuration {
        location: rule.target,
        reset,
        now: t.clone(),
    })
}

/// All configurations reachable from `c` by reading `(a, t)`.
pub fn successors(a: &TimedAutomaton, c: &Configuration, sym: usize, t: &Q) -> Result<BTreeSet<Configuration>> {
    if *t < c.now {
        return Err(Error::Precondition("timestamp precedes now".into()));
    }
    Ok(a.rules
        .iter()
        .filter(|r| r.symbol == sym)
        .filter_map(|r| fire(r, c, t))
        .collect())
}

/// Configurations reached from `start` after reading `w` (empty set if some
/// letter is outside the alphabet).
pub fn reach(a: &TimedAutomaton, start: impl IntoIterator<Item = Configuration>, w: &TimedWord) -> BTreeSet<Configuration> {
    let mut cur: BTreeSet<Configuration> = start.into_iter().collect();
    for (s, t) in &w.0 {
        let Some(sym) = a.symbol(s) else {
            return BTreeSet::new();
        };
        let mut next = BTreeSet::new();
        for c in &cur {
            if *t < c.now {
                continue;
            }
            for r in a.rules.iter().filter(|r| r.symbol == sym) {
                if let Some(d) = fire(r, c, t) {
                    next.insert(d);
                }
            }
        }
        cur = next;
        if cur.is_empty() {
            break;
        }
    }
    cur
}

pub fn initial_configurations(a: &TimedAutomaton) -> Vec<Configuration> {
    a.initial.iter().map(|&p| Configuration::initial(p, a.clock_count())).collect()
}

pub fn accepts(a: &TimedAutomaton, w: &TimedWord) -> bool {
    if w.check().is_err() {
        return false;
    }
    reach(a, initial_configurations(a), w).iter().any(|c| a.finals.contains(&c.location))
}

pub fn accepts_from(a: &TimedAutomaton, c: &Configuration, w: &TimedWord) -> bool {
    reach(a, [c.clone()], w).iter().any(|d| a.finals.contains(&d.location))
}

/// Some accepting run over `w`, if one exists.
pub fn accepting_run(a: &TimedAutomaton, w: &TimedWord) -> Option<Run> {
    fn go(a: &TimedAutomaton, c: &Configuration, w: &TimedWord, i: usize, steps: &mut Vec<Step>) -> bool {
        if i == w.len() {
            return a.finals.contains(&c.location);
        }
        let (s, t) = &w.0[i];
        let Some(sym) = a.symbol(s) else { return false };
        if *t < c.now {
            return false;
        }
        for (ri, r) in a.rules.iter().enumerate().filter(|(_, r)| r.symbol == sym) {
            if let Some(d) = fire(r, c, t) {
                steps.push(Step {
                    rule: ri,
                    time: t.clone(),
                    after: d.clone(),
                });
                if go(a, &d, w, i + 1, steps) {
                    return true;
                }
                steps.pop();
            }
        }
        false
    }
    for c in initial_configurations(a) {
        let mut steps = Vec::new();
        if go(a, &c, w, 0, &mut steps) {
            return Some(Run { start: c, steps });
        }
    }
    None
}

/// Re-checks every guard, reset and timestamp of a run.
pub fn replay_run(a: &TimedAutomaton, run: &Run) -> bool {
    let mut cur = run.start.clone();
    for st in &run.steps {
        let Some(r) = a.rules.get(st.rule) else { return false };
        if st.time < cur.now {
            return false;
        }
        match fire(r, &cur, &st.time) {
            Some(d) if d == st.after => cur = d,
            _ => return false,
        }
    }
    true
}
