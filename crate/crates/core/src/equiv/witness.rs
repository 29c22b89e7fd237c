//! Two-sided check that a deterministic automaton recognises the language
//! of a one-clock automaton.

use crate::equiv::engine::{automaton_included_with, Options};
use crate::error::{Error, Result};
use crate::ta::automaton::{TimedAutomaton, TimedWord};
use crate::ta::emptiness::find_accepted_word;
use crate::ta::ops::{complement_dta, is_deterministic, product};
use crate::ta::semantics::accepts;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessReport {
    /// A word of `L(a)` missing from `L(b)`, if any.
    pub missing: Option<TimedWord>,
    /// A word of `L(b)` missing from `L(a)`, if any.
    pub extra: Option<TimedWord>,
}

impl WitnessReport {
    pub fn passed(&self) -> bool {
        self.missing.is_none() && self.extra.is_none()
    }
}

pub fn validate_witness(a: &TimedAutomaton, b: &TimedAutomaton) -> Result<WitnessReport> {
    validate_witness_with(a, b, &Options::default())
}

pub fn validate_witness_with(a: &TimedAutomaton, b: &TimedAutomaton, opts: &Options) -> Result<WitnessReport> {
    if !is_deterministic(b) {
        return Err(Error::NotDeterministic);
    }
    let missing = find_accepted_word(&product(a, &complement_dta(b)?)?);
    let extra = automaton_included_with(b, a, opts)?.counterexample;
    for (w, in_a) in [(&missing, true), (&extra, false)] {
        if let Some(w) = w {
            if accepts(a, w) != in_a || accepts(b, w) == in_a {
                return Err(Error::Inconsistent(format!("counterexample {w} does not replay")));
            }
        }
    }
    Ok(WitnessReport { missing, extra })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ta::format::parse_automaton;

    const CLOCKED: &str = "alphabet a\nclocks x\nlocation p init final\ntrans p -> p on a when x == 1 reset {x}\n";

    #[test]
    fn self_witness_passes() {
        let a = parse_automaton(CLOCKED).unwrap();
        assert!(validate_witness(&a, &a).unwrap().passed());
    }

    #[test]
    fn flipped_final_is_caught() {
        let a = parse_automaton(CLOCKED).unwrap();
        let mut b = a.clone();
        b.finals.clear();
        let r = validate_witness(&a, &b).unwrap();
        assert!(r.missing.is_some());
        assert!(r.extra.is_none());
    }

    #[test]
    fn nonregular_input_has_no_witness() {
        let a = parse_automaton(include_str!("../../data/last_gap.nta")).unwrap();
        let b = parse_automaton(
            "alphabet a\nclocks x\nlocation s init\nlocation f final\ntrans s -> s on a when x < 1\ntrans s -> f on a when x >= 1 reset {x}\ntrans f -> f on a reset {x}\n",
        )
        .unwrap();
        assert!(!validate_witness(&a, &b).unwrap().passed());
    }
}
