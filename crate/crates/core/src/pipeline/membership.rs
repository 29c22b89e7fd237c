//! Membership of a one-clock language in the deterministic classes, and
//! step-by-step tracing of the pipeline along a word.

use std::fmt;
use std::time::{Duration, Instant};

use num_bigint::BigUint;

use crate::equiv::witness::{validate_witness_with, WitnessReport};
use crate::error::{Error, Result};
use crate::pipeline::explore::{emit_dta, explore, is_timeless, orbit_bound, Exploration, ExploreOptions, Refutation};
use crate::pipeline::step::{initial_state, transition, PipelineState, Transition};
use crate::rational::{fmt_q, Q};
use crate::ta::automaton::{TimedAutomaton, TimedWord};
use crate::ta::greedy::greedy_reset_normalise;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Some deterministic automaton with `k` clocks.
    KDta,
    /// Some deterministic automaton with `k` clocks and constants at most `m`.
    KmDta(Option<i64>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Answer {
    Yes,
    No,
    Unknown,
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Answer::Yes => "YES",
            Answer::No => "NO",
            Answer::Unknown => "UNKNOWN",
        })
    }
}

#[derive(Debug, Clone, Default)]
pub struct Timings {
    pub normalise: Duration,
    pub explore: Duration,
    pub validate: Duration,
}

#[derive(Debug, Clone)]
pub struct MembershipVerdict {
    pub answer: Answer,
    pub k: usize,
    /// Largest constant of the normalised input.
    pub m: i64,
    /// Why the answer is `Unknown`.
    pub reason: Option<String>,
    pub witness: Option<TimedAutomaton>,
    pub witness_check: Option<WitnessReport>,
    pub refutation: Option<Refutation>,
    /// Deterministic automaton with `k + 1` clocks found when `k` clocks overflow.
    pub candidate: Option<TimedAutomaton>,
    pub orbit_count: usize,
    pub f_bound: BigUint,
    pub timings: Timings,
}

fn unknown(k: usize, m: i64, n: usize, reason: String, timings: Timings) -> MembershipVerdict {
    MembershipVerdict {
        answer: Answer::Unknown,
        k,
        m,
        reason: Some(reason),
        witness: None,
        witness_check: None,
        refutation: None,
        candidate: None,
        orbit_count: 0,
        f_bound: orbit_bound(k, m, n),
        timings,
    }
}

/// Runs `explore`, folding resource exhaustion and span escapes into `Err(reason)`.
fn soft(r: Result<Exploration>) -> Result<std::result::Result<Exploration, String>> {
    match r {
        Ok(e) => Ok(Ok(e)),
        Err(Error::Budget(n)) => Ok(Err(format!("BUDGET: resource cap {n} reached"))),
        Err(Error::SpanEscape(s)) => Ok(Err(format!("SPAN: {s}"))),
        Err(e) => Err(e),
    }
}

/// Decides whether `L(a)` is recognised by a deterministic automaton with
/// `k` clocks (and, in `KmDta` mode, the input's own constant bound).
pub fn decide_membership(a: &TimedAutomaton, k: usize, mode: Mode, opts: &ExploreOptions) -> Result<MembershipVerdict> {
    if a.clock_count() != 1 {
        return Err(Error::Precondition("membership expects a one-clock automaton".into()));
    }
    if k == 0 && !is_timeless(a) {
        return Err(Error::Precondition("zero clocks only suit automata without timing constraints".into()));
    }
    let mut timings = Timings::default();
    let clock = Instant::now();
    let n = greedy_reset_normalise(a)?;
    timings.normalise = clock.elapsed();
    let m = n.max_constant();
    if let Mode::KmDta(Some(target)) = mode {
        if target != m {
            return Err(Error::Precondition(format!(
                "constant bound {target} differs from the normalised input's bound {m}; only the latter is decided"
            )));
        }
    }
    let locs = n.location_count();
    let clock = Instant::now();
    let first = soft(explore(&n, k, opts))?;
    timings.explore = clock.elapsed();
    match first {
        Err(reason) => Ok(unknown(k, m, locs, reason, timings)),
        Ok(Exploration::Complete(g)) => {
            let b = emit_dta(&n, &g);
            let clock = Instant::now();
            let check = match validate_witness_with(a, &b, &opts.equiv) {
                Ok(c) => c,
                Err(Error::Budget(cap)) => {
                    return Ok(unknown(k, m, locs, format!("BUDGET: witness check hit cap {cap}"), timings));
                }
                Err(e) => return Err(e),
            };
            timings.validate = clock.elapsed();
            if !check.passed() {
                return Err(Error::Inconsistent(format!(
                    "emitted automaton differs from the input (missing {:?}, extra {:?})",
                    check.missing.as_ref().map(|w| w.to_string()),
                    check.extra.as_ref().map(|w| w.to_string())
                )));
            }
            Ok(MembershipVerdict {
                answer: Answer::Yes,
                k,
                m,
                reason: None,
                witness: Some(b),
                witness_check: Some(check),
                refutation: None,
                candidate: None,
                orbit_count: g.nodes.len(),
                f_bound: orbit_bound(k, m, locs),
                timings,
            })
        }
        Ok(Exploration::Refuted(first_ref)) => {
            let clock = Instant::now();
            let second = soft(explore(&n, k + 1, opts))?;
            timings.explore += clock.elapsed();
            match second {
                Err(reason) => {
                    let mut v = unknown(k, m, locs, reason, timings);
                    v.refutation = Some(first_ref);
                    Ok(v)
                }
                Ok(Exploration::Refuted(r)) => Ok(MembershipVerdict {
                    answer: Answer::No,
                    k,
                    m,
                    reason: None,
                    witness: None,
                    witness_check: None,
                    refutation: Some(r),
                    candidate: None,
                    orbit_count: 0,
                    f_bound: orbit_bound(k + 1, m, locs),
                    timings,
                }),
                Ok(Exploration::Complete(g)) => {
                    let mut v = unknown(
                        k,
                        m,
                        locs,
                        format!("{k} clocks overflow but {} suffice; separability not decided", k + 1),
                        timings,
                    );
                    v.refutation = Some(first_ref);
                    v.orbit_count = g.nodes.len();
                    v.candidate = Some(emit_dta(&n, &g));
                    Ok(v)
                }
            }
        }
    }
}

/// Pipeline state after one prefix of a traced word.
#[derive(Debug, Clone)]
pub struct TraceStep {
    pub prefix: TimedWord,
    pub state: Option<PipelineState>,
    /// Least support after the prefix; larger than `k` on overflow.
    pub support: Vec<Q>,
    pub overflow: bool,
}

impl TraceStep {
    pub fn render(&self, a: &TimedAutomaton) -> String {
        let sup: Vec<String> = self.support.iter().map(fmt_q).collect();
        let mut s = format!("after \"{}\": support {{{}}}", self.prefix, sup.join(", "));
        match &self.state {
            Some(z) => {
                let mu: Vec<String> = z.mu.iter().map(fmt_q).collect();
                s.push_str(&format!(
                    " clocks [{}] macro {}",
                    mu.join(", "),
                    z.macro_conf.display(&a.locations)
                ));
            }
            None if self.overflow => s.push_str(" OVERFLOW"),
            None => {}
        }
        s
    }
}

/// Replays the pipeline with `k` clocks along `w` on the normalised input.
/// Stops at the first overflow.
pub fn trace_word(a: &TimedAutomaton, k: usize, w: &TimedWord, opts: &ExploreOptions) -> Result<(TimedAutomaton, Vec<TraceStep>)> {
    w.check()?;
    let n = greedy_reset_normalise(a)?;
    let mut z = initial_state(&n, k)?;
    let mut out = vec![TraceStep {
        prefix: TimedWord::default(),
        support: z.support().to_vec(),
        state: Some(z.clone()),
        overflow: false,
    }];
    for (sym, t) in &w.0 {
        let s = n
            .symbol(sym)
            .ok_or_else(|| Error::Alphabet(format!("symbol `{sym}` is not in the alphabet")))?;
        match transition(&n, &z, s, t, k, &opts.equiv)? {
            Transition::Next { state, .. } => {
                out.push(TraceStep {
                    prefix: state.word.clone(),
                    support: state.support().to_vec(),
                    state: Some(state.clone()),
                    overflow: false,
                });
                z = state;
            }
            Transition::Overflow { support, word } => {
                out.push(TraceStep {
                    prefix: word,
                    state: None,
                    support,
                    overflow: true,
                });
                break;
            }
        }
    }
    Ok((n, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qf};
    use crate::ta::format::{parse_automaton, parse_word};

    #[test]
    fn last_gap_trace_overflows_on_second_letter() {
        let a = parse_automaton(include_str!("../../data/last_gap.nta")).unwrap();
        let w = parse_word("a@0 a@1/2").unwrap();
        let (_, steps) = trace_word(&a, 1, &w, &ExploreOptions::default()).unwrap();
        assert_eq!(steps.len(), 3);
        assert!(!steps[1].overflow);
        assert!(steps[2].overflow);
        assert_eq!(steps[2].support, vec![q(0), qf(1, 2)]);
    }

    #[test]
    fn last_gap_is_not_deterministic() {
        let a = parse_automaton(include_str!("../../data/last_gap.nta")).unwrap();
        for k in 1..=2 {
            let v = decide_membership(&a, k, Mode::KDta, &ExploreOptions::default()).unwrap();
            assert_eq!(v.answer, Answer::No);
            assert!(v.refutation.is_some());
        }
    }

    #[test]
    fn other_constant_bounds_are_rejected() {
        let a = parse_automaton(include_str!("../../data/last_gap.nta")).unwrap();
        assert!(decide_membership(&a, 1, Mode::KmDta(Some(3)), &ExploreOptions::default()).is_err());
    }
}
