//! Greedy-resetting normal form for one-clock automata.
//!
//! The clock is reset as soon as its value is an integer `<= m` or exceeds
//! `m`; the integral value (or an over-`m` flag) moves into the location.

use std::collections::{BTreeMap, VecDeque};

use crate::error::{Error, Result};
use crate::rational::q;
use crate::regions::{enumerate_regions, Code};
use crate::ta::automaton::TimedAutomaton;
use crate::ta::constraint::{Cmp, Constraint};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Tag {
    Int(i64),
    Over,
}

pub fn greedy_reset_normalise(a: &TimedAutomaton) -> Result<TimedAutomaton> {
    if a.clock_count() != 1 {
        return Err(Error::Precondition(format!(
            "greedy normalisation needs exactly one clock, got {}",
            a.clock_count()
        )));
    }
    let m = a.max_constant();
    let regions = enumerate_regions(1, m);
    let mut out = TimedAutomaton::new(format!("{}_greedy", a.name), a.alphabet.clone(), a.clocks.clone());
    let mut ids: BTreeMap<(usize, Tag), usize> = BTreeMap::new();
    let mut queue = VecDeque::new();
    let mut get = |out: &mut TimedAutomaton, queue: &mut VecDeque<(usize, Tag)>, p: usize, tag: Tag| -> usize {
        *ids.entry((p, tag)).or_insert_with(|| {
            queue.push_back((p, tag));
            let name = match tag {
                Tag::Int(j) => format!("{}@{}", a.locations[p], j),
                Tag::Over => format!("{}@>", a.locations[p]),
            };
            out.add_location(name, a.initial.contains(&p) && tag == Tag::Int(0), a.finals.contains(&p))
        })
    };
    for &p in &a.initial {
        get(&mut out, &mut queue, p, Tag::Int(0));
    }
    while let Some((p, tag)) = queue.pop_front() {
        let src = get(&mut out, &mut queue, p, tag);
        for r in a.rules.iter().filter(|r| r.source == p) {
            let resets_clock = !r.resets.is_empty();
            match tag {
                Tag::Over => {
                    if r.guard.eval(&[q(m + 1)]) {
                        let to = if resets_clock { Tag::Int(0) } else { Tag::Over };
                        let dst = get(&mut out, &mut queue, r.target, to);
                        out.add_rule(src, r.symbol, Constraint::True, [0], dst);
                    }
                }
                Tag::Int(j) => {
                    for reg in &regions {
                        if !r.guard.eval(&reg.realiser()) {
                            continue;
                        }
                        // guard on the stored clock, whose true value is clock + j
                        let (guard, to, reset) = match reg.codes[0] {
                            Code::Int(z) if z >= j => (
                                Constraint::atom(0, Cmp::Eq, z - j),
                                if resets_clock { Tag::Int(0) } else { Tag::Int(z) },
                                true,
                            ),
                            Code::Open(z) if z >= j => (
                                Constraint::atom(0, Cmp::Gt, z - j).and(Constraint::atom(0, Cmp::Lt, z - j + 1)),
                                if resets_clock { Tag::Int(0) } else { Tag::Int(j) },
                                resets_clock,
                            ),
                            Code::Above => (
                                Constraint::atom(0, Cmp::Gt, m - j),
                                if resets_clock { Tag::Int(0) } else { Tag::Over },
                                true,
                            ),
                            _ => continue,
                        };
                        let dst = get(&mut out, &mut queue, r.target, to);
                        let resets: Vec<usize> = if reset { vec![0] } else { vec![] };
                        out.add_rule(src, r.symbol, guard, resets, dst);
                    }
                }
            }
        }
    }
    Ok(out)
}
