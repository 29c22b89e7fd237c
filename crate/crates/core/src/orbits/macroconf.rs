//! Macro-configurations of a one-clock automaton: finite unions of
//! reset-point values and open intervals, each tagged with a location.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::rational::{floor, fmt_q_dec, fract, q, Q};
use crate::orbits::automorphism::TimedAutomorphism;

/// A reset point or an open interval of reset points.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Desc {
    Point(Q),
    Open(Q, Q),
}

impl Desc {
    pub fn contains(&self, u: &Q) -> bool {
        match self {
            Desc::Point(p) => p == u,
            Desc::Open(a, b) => a < u && u < b,
        }
    }

    pub fn map(&self, pi: &TimedAutomorphism) -> Desc {
        match self {
            Desc::Point(p) => Desc::Point(pi.apply(p)),
            Desc::Open(a, b) => Desc::Open(pi.apply(a), pi.apply(b)),
        }
    }

    pub fn endpoints(&self) -> Vec<&Q> {
        match self {
            Desc::Point(p) => vec![p],
            Desc::Open(a, b) => vec![a, b],
        }
    }
}

impl fmt::Display for Desc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Desc::Point(p) => write!(f, "{}", fmt_q_dec(p)),
            Desc::Open(a, b) => write!(f, "({},{})", fmt_q_dec(a), fmt_q_dec(b)),
        }
    }
}

/// A finite union `{(p, u, now) : (p, d) in items, u in d}`. No closure
/// property is assumed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MacroSet {
    pub now: Q,
    pub items: BTreeSet<(usize, Desc)>,
}

impl MacroSet {
    pub fn new(now: Q) -> Self {
        MacroSet {
            now,
            items: BTreeSet::new(),
        }
    }

    pub fn from_points(now: Q, pts: impl IntoIterator<Item = (usize, Q)>) -> Self {
        MacroSet {
            now,
            items: pts.into_iter().map(|(p, u)| (p, Desc::Point(u))).collect(),
        }
    }

    pub fn insert(&mut self, loc: usize, d: Desc) {
        self.items.insert((loc, d));
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn contains(&self, loc: usize, u: &Q) -> bool {
        self.items.iter().any(|(p, d)| *p == loc && d.contains(u))
    }

    pub fn locations(&self) -> BTreeSet<usize> {
        self.items.iter().map(|(p, _)| *p).collect()
    }

    /// Point values and interval endpoints, plus `now`.
    pub fn values(&self) -> BTreeSet<Q> {
        let mut v: BTreeSet<Q> = self.items.iter().flat_map(|(_, d)| d.endpoints().into_iter().cloned()).collect();
        v.insert(self.now.clone());
        v
    }

    pub fn map(&self, pi: &TimedAutomorphism) -> MacroSet {
        MacroSet {
            now: pi.apply(&self.now),
            items: self.items.iter().map(|(p, d)| (*p, d.map(pi))).collect(),
        }
    }

    pub fn display<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        DisplayItems(self.items.iter().map(|(p, d)| (d.clone(), BTreeSet::from([*p]))).collect(), names)
    }
}

struct DisplayItems<'a>(Vec<(Desc, BTreeSet<usize>)>, &'a [String]);

impl fmt::Display for DisplayItems<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // merge equal descriptors, print in descriptor order
        let mut merged: BTreeMap<Desc, BTreeSet<usize>> = BTreeMap::new();
        for (d, ls) in &self.0 {
            merged.entry(d.clone()).or_default().extend(ls);
        }
        let mut entries: Vec<(Desc, BTreeSet<usize>)> = merged.into_iter().collect();
        entries.sort_by(|a, b| desc_key(&a.0).cmp(&desc_key(&b.0)));
        let parts: Vec<String> = entries
            .iter()
            .map(|(d, ls)| {
                let names: Vec<&str> = ls.iter().map(|&l| self.1[l].as_str()).collect();
                match d {
                    Desc::Point(_) => format!("{{{d}:{{{}}}}}", names.join(",")),
                    Desc::Open(..) => format!("{d}:{{{}}}", names.join(",")),
                }
            })
            .collect();
        write!(f, "{}", parts.join(", "))
    }
}

fn desc_key(d: &Desc) -> (Q, u8) {
    match d {
        Desc::Point(p) => (p.clone(), 1),
        Desc::Open(a, _) => (a.clone(), 2),
    }
}

/// Grid `{s + z}` of a support inside the span window `(now - m, now]`,
/// sorted, always containing `now`.
pub fn support_grid(support: &[Q], now: &Q, m: i64) -> Vec<Q> {
    let lo = now - q(m);
    let mut g: BTreeSet<Q> = BTreeSet::new();
    g.insert(now.clone());
    for s in support {
        // smallest s + z strictly above lo
        let z = floor(&(&lo - s)) + 1;
        let mut v = s + Q::from_integer(z);
        while v <= *now {
            g.insert(v.clone());
            v += q(1);
        }
    }
    g.into_iter().collect()
}

/// The orbit of `u` under automorphisms fixing `support`, cut to the window.
pub fn orbit_of_real(support: &[Q], u: &Q, now: &Q, m: i64) -> Desc {
    let grid = support_grid(support, now, m);
    if grid.contains(u) {
        return Desc::Point(u.clone());
    }
    let lo = now - q(m);
    let below = grid.iter().rev().find(|g| *g < u).cloned().unwrap_or(lo);
    let above = grid.iter().find(|g| *g > u).cloned().expect("u lies below now");
    Desc::Open(below, above)
}

/// A macro-configuration closed under automorphisms fixing its support,
/// stored as location sets over the canonical slot layout of the grid:
/// `(now-m, g1), {g1}, (g1, g2), ..., {g_r = now}`; with `m = 0` the only
/// slot is `{now}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SymbolicMacroConfig {
    pub now: Q,
    pub m: i64,
    pub support: Vec<Q>,
    pub grid: Vec<Q>,
    pub slots: Vec<BTreeSet<usize>>,
}

impl SymbolicMacroConfig {
    pub fn empty(support: &[Q], now: &Q, m: i64) -> Self {
        let mut support: Vec<Q> = support.to_vec();
        support.sort();
        support.dedup();
        let grid = support_grid(&support, now, m);
        let n = if m == 0 { 1 } else { 2 * grid.len() };
        SymbolicMacroConfig {
            now: now.clone(),
            m,
            support,
            grid,
            slots: vec![BTreeSet::new(); n],
        }
    }

    /// Interval endpoints of the slot layout: the window bound `now - m`
    /// followed by the grid.
    pub fn endpoints(&self) -> Vec<Q> {
        let mut e = Vec::with_capacity(self.grid.len() + 1);
        if self.m > 0 {
            e.push(&self.now - q(self.m));
        }
        e.extend(self.grid.iter().cloned());
        e
    }

    pub fn slot_desc(&self, i: usize) -> Desc {
        if self.m == 0 {
            return Desc::Point(self.now.clone());
        }
        let j = i / 2;
        if i % 2 == 1 {
            Desc::Point(self.grid[j].clone())
        } else {
            let lo = if j == 0 { &self.now - q(self.m) } else { self.grid[j - 1].clone() };
            Desc::Open(lo, self.grid[j].clone())
        }
    }

    /// Slots whose descriptor meets `d` (for an interval: every gap it
    /// overlaps and every grid point strictly inside it).
    pub fn slots_meeting(&self, d: &Desc) -> Vec<usize> {
        (0..self.slots.len())
            .filter(|&i| match (&self.slot_desc(i), d) {
                (Desc::Point(g), d) => d.contains(g),
                (Desc::Open(a, b), Desc::Point(u)) => a < u && u < b,
                (Desc::Open(a, b), Desc::Open(c, e)) => a.max(c) < b.min(e),
            })
            .collect()
    }

    pub fn contains(&self, loc: usize, u: &Q) -> bool {
        self.slots_meeting(&Desc::Point(u.clone())).iter().any(|&i| self.slots[i].contains(&loc))
    }

    pub fn to_macro_set(&self) -> MacroSet {
        let mut out = MacroSet::new(self.now.clone());
        for (i, ls) in self.slots.iter().enumerate() {
            for &p in ls {
                out.insert(p, self.slot_desc(i));
            }
        }
        out
    }

    pub fn locations(&self) -> BTreeSet<usize> {
        self.slots.iter().flatten().copied().collect()
    }

    /// Image under `pi`; the slot layout is preserved by monotonicity.
    pub fn map(&self, pi: &TimedAutomorphism) -> SymbolicMacroConfig {
        let mut support: Vec<Q> = self.support.iter().map(|s| pi.apply(s)).collect();
        support.sort();
        SymbolicMacroConfig {
            now: pi.apply(&self.now),
            m: self.m,
            support,
            grid: self.grid.iter().map(|g| pi.apply(g)).collect(),
            slots: self.slots.clone(),
        }
    }

    pub fn display<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        DisplayItems(
            self.slots
                .iter()
                .enumerate()
                .filter(|(_, ls)| !ls.is_empty())
                .map(|(i, ls)| (self.slot_desc(i), ls.clone()))
                .collect(),
            names,
        )
    }
}

/// Least `support`-invariant superset of `items`, as a symbolic macro-configuration.
pub fn close_under(support: &[Q], items: &MacroSet, m: i64) -> SymbolicMacroConfig {
    let mut x = SymbolicMacroConfig::empty(support, &items.now, m);
    for (p, d) in &items.items {
        for i in x.slots_meeting(d) {
            x.slots[i].insert(*p);
        }
    }
    x
}

/// Whether no two values share a fractional part.
pub fn fraction_independent(values: &[Q]) -> bool {
    let fr: BTreeSet<Q> = values.iter().map(fract).collect();
    fr.len() == values.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qf;

    fn s_example() -> Vec<Q> {
        vec![qf(37, 10), qf(42, 10), q(5)]
    }

    #[test]
    fn grid_of_worked_example() {
        let g = SymbolicMacroConfig::empty(&s_example(), &q(5), 2).endpoints();
        assert_eq!(support_grid(&s_example(), &q(5), 2), g[1..].to_vec());
        let want: Vec<Q> = [30, 32, 37, 40, 42, 47, 50].iter().map(|v| qf(*v, 10)).collect();
        assert_eq!(g, want);
    }

    #[test]
    fn orbits_of_reals() {
        let s = s_example();
        assert_eq!(orbit_of_real(&s, &qf(39, 10), &q(5), 2), Desc::Open(qf(37, 10), q(4)));
        assert_eq!(orbit_of_real(&s, &qf(37, 10), &q(5), 2), Desc::Point(qf(37, 10)));
        assert_eq!(orbit_of_real(&s, &qf(45, 10), &q(5), 2), Desc::Open(qf(42, 10), qf(47, 10)));
        assert_eq!(orbit_of_real(&s, &qf(31, 10), &q(5), 2), Desc::Open(q(3), qf(32, 10)));
    }

    #[test]
    fn interval_closure() {
        let mut items = MacroSet::new(q(5));
        items.insert(1, Desc::Open(qf(38, 10), qf(43, 10)));
        let x = close_under(&s_example(), &items, 2);
        let got: Vec<Desc> = x.to_macro_set().items.into_iter().map(|(_, d)| d).collect();
        let mut want = vec![
            Desc::Open(qf(37, 10), q(4)),
            Desc::Point(q(4)),
            Desc::Open(q(4), qf(42, 10)),
            Desc::Point(qf(42, 10)),
            Desc::Open(qf(42, 10), qf(47, 10)),
        ];
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn printed_form_of_closed_points() {
        let names: Vec<String> = ["p", "q", "r"].iter().map(|s| s.to_string()).collect();
        let items = MacroSet::from_points(q(5), [(0, qf(37, 10)), (1, qf(39, 10)), (2, qf(42, 10))]);
        let x = close_under(&s_example(), &items, 2);
        assert_eq!(x.display(&names).to_string(), "{3.7:{p}}, (3.7,4):{q}, {4.2:{r}}");
    }
}
