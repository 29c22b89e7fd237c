//! Depth-bounded enumerative comparison of macro-configurations, used as
//! an independent check of the exact procedure.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::orbits::macroconf::{Desc, MacroSet};
use crate::rational::{midpoint, q, Q};
use crate::ta::automaton::{TimedAutomaton, TimedWord};

type Items = BTreeSet<(usize, Desc)>;

fn step(a: &TimedAutomaton, items: &Items, sym: usize, t: &Q) -> Items {
    let m = a.max_constant();
    let mut out = Items::new();
    for (l, d) in items {
        let pieces: Vec<(Desc, Q)> = match d {
            Desc::Point(u) => vec![(d.clone(), u.clone())],
            Desc::Open(lo, hi) => {
                let mut cuts: Vec<Q> = (0..=m).map(|z| t - q(z)).filter(|c| lo < c && c < hi).collect();
                cuts.sort();
                let mut b = vec![lo.clone()];
                b.extend(cuts.iter().cloned());
                b.push(hi.clone());
                let mut ps: Vec<(Desc, Q)> = b.windows(2).map(|w| (Desc::Open(w[0].clone(), w[1].clone()), midpoint(&w[0], &w[1]))).collect();
                ps.extend(cuts.into_iter().map(|c| (Desc::Point(c.clone()), c)));
                ps
            }
        };
        for r in a.rules_from(*l, sym) {
            for (piece, rep) in &pieces {
                if r.guard.eval(&[t - rep]) {
                    if r.resets.is_empty() {
                        out.insert((r.target, piece.clone()));
                    } else {
                        out.insert((r.target, Desc::Point(t.clone())));
                    }
                }
            }
        }
    }
    tidy(out, t, m)
}

/// Merges abutting pieces and collapses configurations older than the
/// largest constant onto one representative per location.
fn tidy(items: Items, now: &Q, m: i64) -> Items {
    let old = now - q(m + 1);
    let horizon = now - q(m);
    let mut by_loc: HashMap<usize, Vec<Desc>> = HashMap::new();
    for (l, d) in items {
        let top = match &d {
            Desc::Point(u) => u.clone(),
            Desc::Open(_, b) => b.clone(),
        };
        let d = if top < horizon { Desc::Point(old.clone()) } else { d };
        by_loc.entry(l).or_default().push(d);
    }
    let mut out = Items::new();
    for (l, mut ds) in by_loc {
        ds.sort_by(|x, y| lower(x).cmp(&lower(y)).then(is_open(x).cmp(&is_open(y))));
        ds.dedup();
        let mut merged: Vec<Desc> = Vec::new();
        for d in ds {
            if let Some(last) = merged.last_mut() {
                if let Some(j) = join(last, &d) {
                    *last = j;
                    continue;
                }
            }
            merged.push(d);
        }
        // a point followed by an interval starting there, and so on
        let mut again: Vec<Desc> = Vec::new();
        for d in merged {
            if let Some(last) = again.last_mut() {
                if let Some(j) = join(last, &d) {
                    *last = j;
                    continue;
                }
            }
            again.push(d);
        }
        out.extend(again.into_iter().map(|d| (l, d)));
    }
    out
}

fn lower(d: &Desc) -> Q {
    match d {
        Desc::Point(u) => u.clone(),
        Desc::Open(a, _) => a.clone(),
    }
}

fn is_open(d: &Desc) -> bool {
    matches!(d, Desc::Open(..))
}

fn join(x: &Desc, y: &Desc) -> Option<Desc> {
    match (x, y) {
        (Desc::Open(a, b), Desc::Point(u)) if u > a && u < b => Some(x.clone()),
        (Desc::Open(a, b), Desc::Open(c, d)) if c < b => Some(Desc::Open(a.clone(), b.clone().max(d.clone()))),
        _ => None,
    }
}

fn accepting(a: &TimedAutomaton, items: &Items) -> bool {
    items.iter().any(|(l, _)| a.finals.contains(l))
}

fn candidate_times(values: &BTreeSet<Q>, now: &Q, m: i64) -> Vec<Q> {
    let mut crit: BTreeSet<Q> = BTreeSet::new();
    crit.insert(now.clone());
    for v in values {
        for z in 0..=m + 1 {
            let c = v + q(z);
            if c > *now {
                crit.insert(c);
            }
        }
    }
    let pts: Vec<Q> = crit.into_iter().collect();
    let mut out = Vec::new();
    for (i, p) in pts.iter().enumerate() {
        out.push(p.clone());
        out.push(match pts.get(i + 1) {
            Some(n) => midpoint(p, n),
            None => p + q(1),
        });
    }
    out
}

fn values(items: &Items) -> impl Iterator<Item = Q> + '_ {
    items.iter().flat_map(|(_, d)| d.endpoints().into_iter().cloned())
}

fn shifted(items: &Items, by: &Q) -> Items {
    items
        .iter()
        .map(|(l, d)| {
            let d = match d {
                Desc::Point(u) => Desc::Point(u - by),
                Desc::Open(a, b) => Desc::Open(a - by, b - by),
            };
            (*l, d)
        })
        .collect()
}

/// A shortest word of length at most `depth` accepted from exactly one of
/// the two macro-configurations, if any.
pub fn bounded_discrepancy(a: &TimedAutomaton, x1: &MacroSet, x2: &MacroSet, depth: usize) -> Option<TimedWord> {
    let m = a.max_constant();
    let now = x1.now.clone();
    let s1 = tidy(x1.items.clone(), &now, m);
    let s2 = tidy(x2.items.clone(), &now, m);
    if accepting(a, &s1) != accepting(a, &s2) {
        return Some(TimedWord::default());
    }
    let mut best: HashMap<(Items, Items), usize> = HashMap::new();
    let mut queue: VecDeque<(Items, Items, Q, TimedWord)> = VecDeque::new();
    queue.push_back((s1, s2, now, TimedWord::default()));
    while let Some((s1, s2, now, w)) = queue.pop_front() {
        if w.len() == depth {
            continue;
        }
        let mut vals: BTreeSet<Q> = values(&s1).chain(values(&s2)).collect();
        vals.insert(now.clone());
        for t in candidate_times(&vals, &now, m) {
            for (sym, name) in a.alphabet.iter().enumerate() {
                let n1 = step(a, &s1, sym, &t);
                let n2 = step(a, &s2, sym, &t);
                let mut w2 = w.clone();
                w2.push(name.clone(), t.clone());
                if accepting(a, &n1) != accepting(a, &n2) {
                    return Some(w2);
                }
                if n1.is_empty() && n2.is_empty() {
                    continue;
                }
                let key = (shifted(&n1, &t), shifted(&n2, &t));
                let d = w2.len();
                if best.get(&key).is_some_and(|&e| e <= d) {
                    continue;
                }
                best.insert(key, d);
                queue.push_back((n1, n2, t.clone(), w2));
            }
        }
    }
    None
}

/// Whether no word of length at most `depth` separates the two
/// macro-configurations.
pub fn bounded_equivalent(a: &TimedAutomaton, x1: &MacroSet, x2: &MacroSet, depth: usize) -> bool {
    bounded_discrepancy(a, x1, x2, depth).is_none()
}
