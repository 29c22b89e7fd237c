//! Region-graph reachability with concrete witness extraction.

use std::collections::{HashSet, VecDeque};

use crate::rational::Q;
use crate::regions::{region_of, timestamp_region_choices, Region};
use crate::ta::automaton::{TimedAutomaton, TimedWord};
use crate::ta::semantics::{fire, initial_configurations, Configuration};

/// `None` when the language is empty, otherwise an accepted word whose
/// timestamps are the canonical representatives of each region step.
pub fn find_accepted_word(a: &TimedAutomaton) -> Option<TimedWord> {
    let m = a.max_constant();
    let key = |c: &Configuration| -> (usize, Region) { (c.location, region_of(&c.valuation_at(&c.now), m)) };
    let mut seen: HashSet<(usize, Region)> = HashSet::new();
    // (configuration, parent index, letter that led here)
    let mut nodes: Vec<(Configuration, Option<usize>, Option<(String, Q)>)> = Vec::new();
    let mut queue = VecDeque::new();
    for c in initial_configurations(a) {
        if seen.insert(key(&c)) {
            nodes.push((c, None, None));
            queue.push_back(nodes.len() - 1);
        }
    }
    while let Some(i) = queue.pop_front() {
        let c = nodes[i].0.clone();
        if a.finals.contains(&c.location) {
            let mut letters = Vec::new();
            let mut cur = Some(i);
            while let Some(j) = cur {
                if let Some(l) = &nodes[j].2 {
                    letters.push(l.clone());
                }
                cur = nodes[j].1;
            }
            letters.reverse();
            return Some(TimedWord(letters));
        }
        for (_, t) in timestamp_region_choices(&c.reset, &c.now, m) {
            for r in &a.rules {
                if let Some(d) = fire(r, &c, &t) {
                    if seen.insert(key(&d)) {
                        nodes.push((d, Some(i), Some((a.alphabet[r.symbol].clone(), t.clone()))));
                        queue.push_back(nodes.len() - 1);
                    }
                }
            }
        }
    }
    None
}

pub fn is_empty(a: &TimedAutomaton) -> bool {
    find_accepted_word(a).is_none()
}
