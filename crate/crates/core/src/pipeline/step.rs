//! One step of the determinisation: successor macro-configuration, least
//! support, closure and clock reallocation.

use std::collections::BTreeSet;

use crate::equiv::bounded::bounded_discrepancy;
use crate::equiv::engine::{macro_equivalent_with, Options};
use crate::error::{Error, Result};
use crate::orbits::automorphism::perturbation_automorphism;
use crate::orbits::key::{orbit_key, OrbitKey};
use crate::orbits::macroconf::{close_under, Desc, MacroSet, SymbolicMacroConfig};
use crate::rational::{fmt_q, fract, midpoint, q, Q};
use crate::ta::automaton::{TimedAutomaton, TimedWord};

/// A closed macro-configuration together with the clocks holding its support.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PipelineState {
    pub macro_conf: SymbolicMacroConfig,
    /// Reset point of each clock of the deterministic automaton being built.
    pub mu: Vec<Q>,
    pub key: OrbitKey,
    /// The input read from the initial state to reach this one.
    pub word: TimedWord,
}

impl PipelineState {
    pub fn now(&self) -> &Q {
        &self.macro_conf.now
    }

    pub fn support(&self) -> &[Q] {
        &self.macro_conf.support
    }
}

/// The initial locations at reset point 0, all `k` clocks reset at 0.
pub fn initial_state(a: &TimedAutomaton, k: usize) -> Result<PipelineState> {
    let m = a.max_constant();
    let zero = q(0);
    let items = MacroSet::from_points(zero.clone(), a.initial.iter().map(|&p| (p, zero.clone())));
    let macro_conf = close_under(&[zero.clone()], &items, m);
    let mu = vec![zero; k];
    let key = orbit_key(&macro_conf, &mu);
    Ok(PipelineState {
        macro_conf,
        mu,
        key,
        word: TimedWord::default(),
    })
}

/// Configurations reached from `x` by reading `(sym, t)`.
pub fn macro_successor(a: &TimedAutomaton, x: &SymbolicMacroConfig, sym: usize, t: &Q) -> Result<MacroSet> {
    if *t < x.now {
        return Err(Error::Precondition("timestamp precedes now".into()));
    }
    let m = a.max_constant();
    let mut out = MacroSet::new(t.clone());
    for (i, ls) in x.slots.iter().enumerate() {
        if ls.is_empty() {
            continue;
        }
        let d = x.slot_desc(i);
        let pieces: Vec<(Desc, Q)> = match &d {
            Desc::Point(u) => vec![(d.clone(), u.clone())],
            Desc::Open(a0, b0) => {
                let mut cuts: Vec<Q> = (0..=m).map(|z| t - q(z)).filter(|c| a0 < c && c < b0).collect();
                cuts.sort();
                let mut bounds = vec![a0.clone()];
                bounds.extend(cuts.iter().cloned());
                bounds.push(b0.clone());
                let mut ps: Vec<(Desc, Q)> = bounds
                    .windows(2)
                    .map(|w| (Desc::Open(w[0].clone(), w[1].clone()), midpoint(&w[0], &w[1])))
                    .collect();
                ps.extend(cuts.into_iter().map(|c| (Desc::Point(c.clone()), c)));
                ps
            }
        };
        for &p in ls {
            for r in a.rules_from(p, sym) {
                for (piece, rep) in &pieces {
                    if !r.guard.eval(&[t - rep]) {
                        continue;
                    }
                    if !r.resets.is_empty() {
                        out.insert(r.target, Desc::Point(t.clone()));
                        continue;
                    }
                    out.insert(r.target, piece.clone());
                }
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SupportOutcome {
    Fits(Vec<Q>),
    /// The least support, which has more than `k` elements.
    Overflow(Vec<Q>),
}

/// Least fraction support of `L(a, succ)` inside `old ∪ {t}`, found by
/// trying to drop each old element, largest first.
pub fn least_support(a: &TimedAutomaton, succ: &MacroSet, old: &[Q], t: &Q, k: usize, opts: &Options) -> Result<SupportOutcome> {
    let ft = fract(t);
    let mut cand: BTreeSet<Q> = old.iter().filter(|s| fract(s) != ft).cloned().collect();
    cand.insert(t.clone());
    let order: Vec<Q> = cand.iter().rev().filter(|s| *s != t).cloned().collect();
    for s in order {
        let current: Vec<Q> = cand.iter().cloned().collect();
        let pi = perturbation_automorphism(&current, &s);
        let moved = succ.map(&pi);
        // shallow refutation first; the exact check only when that finds nothing
        let same = moved == *succ
            || (bounded_discrepancy(a, succ, &moved, 1).is_none() && macro_equivalent_with(a, succ, &moved, opts)?.included);
        if same {
            cand.remove(&s);
        }
    }
    let s: Vec<Q> = cand.into_iter().collect();
    let limit = k.max(1);
    Ok(if s.len() > limit { SupportOutcome::Overflow(s) } else { SupportOutcome::Fits(s) })
}

/// Reassigns clocks: a clock keeps its reset point if that point is still
/// in the support and no later clock holds it; otherwise it is reset at `t`.
pub fn clock_realloc(mu: &[Q], support: &[Q], t: &Q) -> Result<(Vec<Q>, Vec<usize>)> {
    if support.len() > mu.len().max(1) {
        return Err(Error::Precondition("support larger than the clock count".into()));
    }
    let mut out = Vec::with_capacity(mu.len());
    for (i, u) in mu.iter().enumerate() {
        let dup = mu[i + 1..].contains(u);
        if dup || !support.contains(u) {
            out.push(t.clone());
        } else {
            out.push(u.clone());
        }
    }
    let resets: Vec<usize> = (0..out.len()).filter(|&i| out[i] == *t).collect();
    let image: BTreeSet<&Q> = out.iter().collect();
    let want: BTreeSet<&Q> = support.iter().collect();
    if !out.is_empty() && image != want {
        return Err(Error::Inconsistent(format!(
            "clock image {{{}}} differs from support {{{}}}",
            image.iter().map(|v| fmt_q(v)).collect::<Vec<_>>().join(", "),
            want.iter().map(|v| fmt_q(v)).collect::<Vec<_>>().join(", ")
        )));
    }
    Ok((out, resets))
}

/// Outcome of one pipeline transition.
#[derive(Debug, Clone)]
pub enum Transition {
    Next { state: PipelineState, resets: Vec<usize> },
    Overflow { support: Vec<Q>, word: TimedWord },
}

/// Reads `(sym, t)` from `z` with `k` clocks.
pub fn transition(a: &TimedAutomaton, z: &PipelineState, sym: usize, t: &Q, k: usize, opts: &Options) -> Result<Transition> {
    let m = a.max_constant();
    let succ = macro_successor(a, &z.macro_conf, sym, t)?;
    let mut word = z.word.clone();
    word.push(a.alphabet[sym].clone(), t.clone());
    let support = match least_support(a, &succ, z.support(), t, k, opts)? {
        SupportOutcome::Fits(s) => s,
        SupportOutcome::Overflow(support) => return Ok(Transition::Overflow { support, word }),
    };
    if let Some(s) = support.iter().find(|s| t - *s > q(m)) {
        return Err(Error::SpanEscape(format!(
            "support element {} is more than {m} before {} after {word}",
            fmt_q(s),
            fmt_q(t)
        )));
    }
    let macro_conf = close_under(&support, &succ, m);
    let (mu, resets) = if k == 0 { (vec![], vec![]) } else { clock_realloc(&z.mu, &support, t)? };
    let key = orbit_key(&macro_conf, &mu);
    Ok(Transition::Next {
        state: PipelineState {
            macro_conf,
            mu,
            key,
            word,
        },
        resets,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qf;
    use crate::ta::format::parse_automaton;
    use crate::ta::greedy::greedy_reset_normalise;

    fn last_gap() -> TimedAutomaton {
        greedy_reset_normalise(&parse_automaton(include_str!("../../data/last_gap.nta")).unwrap()).unwrap()
    }

    #[test]
    fn realloc_resets_duplicates_and_dropped() {
        let mu = [q(2), q(2), q(3)];
        let (out, resets) = clock_realloc(&mu, &[q(2), qf(7, 2)], &qf(7, 2)).unwrap();
        assert_eq!(out, vec![qf(7, 2), q(2), qf(7, 2)]);
        assert_eq!(resets, vec![0, 2]);
        let (out, _) = clock_realloc(&mu, &[qf(7, 2)], &qf(7, 2)).unwrap();
        assert!(out.iter().all(|v| *v == qf(7, 2)));
    }

    #[test]
    fn worked_allocation() {
        let mu = [qf(37, 10), qf(42, 10), q(3)];
        let (out, resets) = clock_realloc(&mu, &[qf(37, 10), qf(42, 10), q(5)], &q(5)).unwrap();
        assert_eq!(out, vec![qf(37, 10), qf(42, 10), q(5)]);
        assert_eq!(resets, vec![2]);
    }

    #[test]
    fn two_letters_need_two_classes() {
        let a = last_gap();
        let z0 = initial_state(&a, 1).unwrap();
        let opts = Options::default();
        let Transition::Next { state: z1, .. } = transition(&a, &z0, 0, &q(0), 1, &opts).unwrap() else {
            panic!("first letter fits one clock");
        };
        assert_eq!(z1.support(), &[q(0)]);
        match transition(&a, &z1, 0, &qf(1, 2), 1, &opts).unwrap() {
            Transition::Overflow { support, .. } => assert_eq!(support, vec![q(0), qf(1, 2)]),
            other => panic!("expected overflow, got {other:?}"),
        }
    }

    #[test]
    fn guard_split_keeps_point() {
        let a = parse_automaton(
            "alphabet a\nclocks x\nlocation q init\nlocation r final\ntrans q -> r on a when x == 1\ntrans q -> q on a when x > 0 && x < 1\n",
        )
        .unwrap();
        let mut items = MacroSet::new(q(1));
        items.insert(0, Desc::Open(q(0), q(1)));
        let x = close_under(&[q(1)], &items, 1);
        let succ = macro_successor(&a, &x, 0, &qf(3, 2)).unwrap();
        assert!(succ.items.contains(&(1, Desc::Point(qf(1, 2)))));
        assert!(succ.items.contains(&(0, Desc::Open(qf(1, 2), q(1)))));
    }
}
