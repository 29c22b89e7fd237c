//! Determinism, totalisation, complementation and synchronous product.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::rational::Q;
use crate::regions::enumerate_regions;
use crate::ta::automaton::TimedAutomaton;
use crate::ta::constraint::Constraint;

/// Decides satisfiability of a conjunction of guards by enumerating the
/// regions of the clocks they mention.
pub fn jointly_satisfiable(guards: &[&Constraint], clock_count: usize) -> bool {
    let mut used: BTreeSet<usize> = BTreeSet::new();
    let mut m = 0;
    for g in guards {
        used.extend(g.clocks());
        m = m.max(g.max_constant());
    }
    let used: Vec<usize> = used.into_iter().collect();
    enumerate_regions(used.len(), m).iter().any(|r| {
        let small = r.realiser();
        let mut v = vec![Q::default(); clock_count];
        for (i, &c) in used.iter().enumerate() {
            v[c] = small[i].clone();
        }
        guards.iter().all(|g| g.eval(&v))
    })
}

pub fn satisfiable(g: &Constraint, clock_count: usize) -> bool {
    jointly_satisfiable(&[g], clock_count)
}

pub fn is_deterministic(a: &TimedAutomaton) -> bool {
    if a.initial.len() != 1 {
        return false;
    }
    let k = a.clock_count();
    for (i, r) in a.rules.iter().enumerate() {
        for s in &a.rules[i + 1..] {
            if r.source == s.source
                && r.symbol == s.symbol
                && (r.resets != s.resets || r.target != s.target)
                && jointly_satisfiable(&[&r.guard, &s.guard], k)
            {
                return false;
            }
        }
    }
    true
}

fn fresh_name(a: &TimedAutomaton, base: &str) -> String {
    let mut name = base.to_string();
    while a.location(&name).is_some() {
        name.push('_');
    }
    name
}

/// Adds one non-final sink and, per location and symbol, a rule into it
/// guarded by the complement of the existing guards.
pub fn make_total(a: &TimedAutomaton) -> Result<TimedAutomaton> {
    if !is_deterministic(a) {
        return Err(Error::NotDeterministic);
    }
    let mut out = a.clone();
    let sink = out.add_location(fresh_name(a, "sink"), false, false);
    let k = out.clock_count();
    for loc in 0..out.location_count() {
        for sym in 0..out.alphabet.len() {
            let covered = Constraint::disj(out.rules_from(loc, sym).map(|r| r.guard.clone()).collect::<Vec<_>>());
            let rest = covered.negate();
            if satisfiable(&rest, k) {
                out.add_rule(loc, sym, rest, [], sink);
            }
        }
    }
    let _ = sink;
    Ok(out)
}

pub fn complement_dta(a: &TimedAutomaton) -> Result<TimedAutomaton> {
    let mut t = make_total(a)?;
    t.name = format!("{}_complement", a.name);
    t.finals = (0..t.location_count()).filter(|l| !t.finals.contains(l)).collect();
    Ok(t)
}

/// Synchronous product over a shared alphabet; clocks of `b` are renamed
/// on collision. Only syntactically reachable location pairs are kept.
pub fn product(a: &TimedAutomaton, b: &TimedAutomaton) -> Result<TimedAutomaton> {
    let sa: BTreeSet<&String> = a.alphabet.iter().collect();
    let sb: BTreeSet<&String> = b.alphabet.iter().collect();
    if sa != sb {
        return Err(Error::Alphabet(format!("{:?} vs {:?}", a.alphabet, b.alphabet)));
    }
    let mut clocks = a.clocks.clone();
    for c in &b.clocks {
        let mut name = c.clone();
        while clocks.contains(&name) {
            name = format!("{}_{}", b.name, name);
            if clocks.contains(&name) {
                name.push('\'');
            }
        }
        clocks.push(name);
    }
    let ka = a.clock_count();
    let mut out = TimedAutomaton::new(format!("{}_x_{}", a.name, b.name), a.alphabet.clone(), clocks);
    let mut ids: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut queue = VecDeque::new();
    let mut get = |out: &mut TimedAutomaton, queue: &mut VecDeque<(usize, usize)>, p: usize, q: usize, init: bool| -> usize {
        *ids.entry((p, q)).or_insert_with(|| {
            queue.push_back((p, q));
            let fin = a.finals.contains(&p) && b.finals.contains(&q);
            out.add_location(format!("{}*{}", a.locations[p], b.locations[q]), init, fin)
        })
    };
    for &p in &a.initial {
        for &q in &b.initial {
            get(&mut out, &mut queue, p, q, true);
        }
    }
    while let Some((p, q)) = queue.pop_front() {
        let src = get(&mut out, &mut queue, p, q, false);
        for ra in a.rules.iter().filter(|r| r.source == p) {
            let sym_name = &a.alphabet[ra.symbol];
            let sb = b.symbol(sym_name).expect("alphabets checked equal");
            for rb in b.rules.iter().filter(|r| r.source == q && r.symbol == sb) {
                let guard = ra.guard.clone().and(rb.guard.map_clocks(&|c| c + ka));
                let resets: Vec<usize> = ra.resets.iter().copied().chain(rb.resets.iter().map(|c| c + ka)).collect();
                let dst = get(&mut out, &mut queue, ra.target, rb.target, false);
                out.add_rule(src, ra.symbol, guard, resets, dst);
            }
        }
    }
    Ok(out)
}

/// One location, no clocks, every word accepted.
pub fn universal(alphabet: &[String]) -> TimedAutomaton {
    let mut u = TimedAutomaton::new("universal", alphabet.to_vec(), vec![]);
    let l = u.add_location("u", true, true);
    for s in 0..alphabet.len() {
        u.add_rule(l, s, Constraint::True, [], l);
    }
    u
}
