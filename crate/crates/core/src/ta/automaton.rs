use std::collections::{BTreeSet, HashSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::rational::{fmt_q_dec, Q};
use crate::ta::constraint::Constraint;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rule {
    pub source: usize,
    pub symbol: usize,
    pub guard: Constraint,
    /// Sorted, duplicate-free clock indices.
    pub resets: Vec<usize>,
    pub target: usize,
}

/// Shared syntax of NTA and DTA.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TimedAutomaton {
    pub name: String,
    pub alphabet: Vec<String>,
    pub locations: Vec<String>,
    pub clocks: Vec<String>,
    pub initial: BTreeSet<usize>,
    pub finals: BTreeSet<usize>,
    pub rules: Vec<Rule>,
}

impl TimedAutomaton {
    pub fn new(name: impl Into<String>, alphabet: Vec<String>, clocks: Vec<String>) -> Self {
        TimedAutomaton {
            name: name.into(),
            alphabet,
            locations: Vec::new(),
            clocks,
            initial: BTreeSet::new(),
            finals: BTreeSet::new(),
            rules: Vec::new(),
        }
    }

    pub fn add_location(&mut self, name: impl Into<String>, initial: bool, fin: bool) -> usize {
        let id = self.locations.len();
        self.locations.push(name.into());
        if initial {
            self.initial.insert(id);
        }
        if fin {
            self.finals.insert(id);
        }
        id
    }

    pub fn add_rule(&mut self, source: usize, symbol: usize, guard: Constraint, resets: impl IntoIterator<Item = usize>, target: usize) {
        let mut resets: Vec<usize> = resets.into_iter().collect();
        resets.sort_unstable();
        resets.dedup();
        self.rules.push(Rule {
            source,
            symbol,
            guard,
            resets,
            target,
        });
    }

    pub fn symbol(&self, name: &str) -> Option<usize> {
        self.alphabet.iter().position(|s| s == name)
    }

    pub fn location(&self, name: &str) -> Option<usize> {
        self.locations.iter().position(|s| s == name)
    }

    pub fn clock(&self, name: &str) -> Option<usize> {
        self.clocks.iter().position(|s| s == name)
    }

    pub fn clock_count(&self) -> usize {
        self.clocks.len()
    }

    pub fn location_count(&self) -> usize {
        self.locations.len()
    }

    pub fn max_constant(&self) -> i64 {
        self.rules.iter().map(|r| r.guard.max_constant()).max().unwrap_or(0)
    }

    pub fn is_always_resetting(&self) -> bool {
        self.rules.iter().all(|r| !r.resets.is_empty())
    }

    pub fn rules_from(&self, loc: usize, symbol: usize) -> impl Iterator<Item = &Rule> {
        self.rules.iter().filter(move |r| r.source == loc && r.symbol == symbol)
    }

    pub fn validate(&self) -> Result<()> {
        let mut seen = HashSet::new();
        for l in &self.locations {
            if !seen.insert(l) {
                return Err(Error::Semantic(format!("duplicate location `{l}`")));
            }
        }
        let mut seen = HashSet::new();
        for c in &self.clocks {
            if !seen.insert(c) {
                return Err(Error::Semantic(format!("duplicate clock `{c}`")));
            }
        }
        let mut seen = HashSet::new();
        for a in &self.alphabet {
            if !seen.insert(a) {
                return Err(Error::Semantic(format!("duplicate symbol `{a}`")));
            }
        }
        let n = self.locations.len();
        let k = self.clocks.len();
        if self.initial.iter().chain(&self.finals).any(|&l| l >= n) {
            return Err(Error::Semantic("initial/final location out of range".into()));
        }
        for r in &self.rules {
            if r.source >= n || r.target >= n {
                return Err(Error::Semantic("rule endpoint out of range".into()));
            }
            if r.symbol >= self.alphabet.len() {
                return Err(Error::Semantic("rule symbol out of range".into()));
            }
            if r.resets.iter().any(|&x| x >= k) || r.guard.clocks().iter().any(|&x| x >= k) {
                return Err(Error::Semantic("rule mentions an unknown clock".into()));
            }
        }
        Ok(())
    }

    /// Structural one-clock greedy-resetting check: every rule either resets
    /// the clock or its guard confines the clock to a bounded open unit interval.
    pub fn is_greedily_resetting(&self) -> bool {
        if self.clock_count() != 1 {
            return false;
        }
        let m = self.max_constant();
        let regions = crate::regions::enumerate_regions(1, m);
        self.rules.iter().all(|r| {
            !r.resets.is_empty()
                || regions.iter().all(|reg| {
                    let v = reg.realiser();
                    !r.guard.eval(&v) || reg.codes[0].is_open_bounded()
                })
        })
    }
}

/// A finite timed word; timestamps are weakly increasing and nonnegative.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct TimedWord(pub Vec<(String, Q)>);

impl TimedWord {
    pub fn new(letters: Vec<(String, Q)>) -> Result<Self> {
        let w = TimedWord(letters);
        w.check()?;
        Ok(w)
    }

    pub fn check(&self) -> Result<()> {
        let mut last = crate::rational::zero();
        for (_, t) in &self.0 {
            if *t < last {
                return Err(Error::Precondition("timestamps must be nonnegative and monotone".into()));
            }
            last = t.clone();
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn last_time(&self) -> Option<&Q> {
        self.0.last().map(|(_, t)| t)
    }

    pub fn push(&mut self, sym: impl Into<String>, t: Q) {
        self.0.push((sym.into(), t));
    }
}

impl fmt::Display for TimedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(a, t)| format!("{a}@{}", fmt_q_dec(t))).collect();
        write!(f, "{}", parts.join(" "))
    }
}
