//! Concatenation through a fresh separator letter, with the second
//! automaton's time origin moved to the separator.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::ta::automaton::TimedAutomaton;
use crate::ta::constraint::Constraint;

pub const SEPARATOR: &str = "$";

/// Automaton for the words `v ($, t) u'` where `v` is accepted by `l` and
/// `u'` is a word accepted by `m` with every timestamp shifted by `t`.
/// The clocks of `m` are all reset on the separator, so its guards measure
/// time from there.
pub fn compose(l: &TimedAutomaton, m: &TimedAutomaton) -> Result<TimedAutomaton> {
    let sl: BTreeSet<&String> = l.alphabet.iter().collect();
    if let Some(s) = m.alphabet.iter().find(|s| sl.contains(s)) {
        return Err(Error::Alphabet(format!("letter `{s}` is shared by both automata")));
    }
    if sl.contains(&SEPARATOR.to_string()) || m.alphabet.iter().any(|s| s == SEPARATOR) {
        return Err(Error::Alphabet(format!("the separator `{SEPARATOR}` must be fresh")));
    }
    let mut alphabet = l.alphabet.clone();
    alphabet.push(SEPARATOR.into());
    alphabet.extend(m.alphabet.iter().cloned());
    let mut clocks = l.clocks.clone();
    for c in &m.clocks {
        let mut name = c.clone();
        while clocks.contains(&name) {
            name.push('\'');
        }
        clocks.push(name);
    }
    let (kl, nl) = (l.clock_count(), l.location_count());
    let sep = l.alphabet.len();
    let mut out = TimedAutomaton::new(format!("{}_then_{}", l.name, m.name), alphabet, clocks);
    for (i, name) in l.locations.iter().enumerate() {
        out.add_location(format!("L.{name}"), l.initial.contains(&i), false);
    }
    for (i, name) in m.locations.iter().enumerate() {
        out.add_location(format!("M.{name}"), false, m.finals.contains(&i));
    }
    for r in &l.rules {
        out.add_rule(r.source, r.symbol, r.guard.clone(), r.resets.iter().copied(), r.target);
    }
    for r in &m.rules {
        out.add_rule(
            nl + r.source,
            sep + 1 + r.symbol,
            r.guard.map_clocks(&|c| c + kl),
            r.resets.iter().map(|c| c + kl),
            nl + r.target,
        );
    }
    let anchors: Vec<usize> = (kl..kl + m.clock_count()).collect();
    for &f in &l.finals {
        for &i in &m.initial {
            out.add_rule(f, sep, Constraint::True, anchors.iter().copied(), nl + i);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ta::format::{parse_automaton, parse_word};
    use crate::ta::ops::universal;
    use crate::ta::semantics::accepts;
    use crate::ta::emptiness::is_empty;

    fn last_gap() -> TimedAutomaton {
        parse_automaton(include_str!("../../data/last_gap.nta")).unwrap()
    }

    #[test]
    fn shifted_suffix() {
        let l = universal(&["b".to_string()]);
        let c = compose(&l, &last_gap()).unwrap();
        for (w, suffix) in [("b@0 $@1 a@1 a@2", "a@0 a@1"), ("b@0 $@1 a@1 a@2.5", "a@0 a@1.5"), ("$@0.5 a@1 a@1.5 a@2", "a@0.5 a@1 a@1.5")] {
            let expect = accepts(&last_gap(), &parse_word(suffix).unwrap());
            assert_eq!(accepts(&c, &parse_word(w).unwrap()), expect, "{w}");
        }
        assert!(accepts(&c, &parse_word("b@0 $@1 a@1 a@2").unwrap()));
        assert!(!accepts(&c, &parse_word("b@0 a@1 a@2").unwrap()));
    }

    #[test]
    fn empty_prefix_language() {
        let mut l = universal(&["b".to_string()]);
        l.finals.clear();
        assert!(is_empty(&compose(&l, &last_gap()).unwrap()));
    }

    #[test]
    fn shared_letters_are_rejected() {
        let l = universal(&["a".to_string()]);
        assert!(matches!(compose(&l, &last_gap()), Err(Error::Alphabet(_))));
    }
}
