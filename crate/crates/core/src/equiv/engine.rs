//! Exact inclusion of configuration languages into the language of a
//! macro-configuration of a one-clock automaton.
//!
//! The left side is a single configuration of some automaton (tracked
//! existentially), the right side is the full set of configurations of the
//! one-clock automaton reachable so far. Right-hand configurations are kept
//! as location sets over tracked points in the window `[now - m, now]`, the
//! open gaps between them, and one bucket for everything older than the
//! window. States are explored up to timed automorphism and pruned by
//! subsumption.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::orbits::automorphism::{normalising_automorphism, TimedAutomorphism};
use crate::orbits::macroconf::{Desc, MacroSet};
use crate::rational::{floor_i64, fract, is_integer, midpoint, q, Q};
use crate::regions::critical_times;
use crate::ta::automaton::{TimedAutomaton, TimedWord};

pub type LocSet = u128;

pub const DEFAULT_BUDGET: usize = 1_000_000;

#[derive(Debug, Clone)]
pub struct Options {
    /// Maximal number of abstract states kept before giving up.
    pub budget: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options { budget: DEFAULT_BUDGET }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub included: bool,
    /// A word (timestamps from `now` on) accepted on the left but not on the right.
    pub counterexample: Option<TimedWord>,
}

/// Reset point of a left-hand clock; `Over` once its value exceeds `m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) enum Val {
    At(Q),
    Over,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Lhs {
    loc: usize,
    resets: Vec<Val>,
}

/// Right-hand configurations over the window, plus the left configuration.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Joint {
    now: Q,
    lhs: Lhs,
    /// Ascending, inside `[now - m, now]`, last element `now`.
    points: Vec<Q>,
    psets: Vec<LocSet>,
    /// `gaps[i]` is the open interval below `points[i]`, down to
    /// `points[i - 1]` or to `now - m`.
    gaps: Vec<LocSet>,
    over: LocSet,
}

impl Joint {
    fn lo(&self, m: i64) -> Q {
        &self.now - q(m)
    }

    fn gap_bounds(&self, i: usize, m: i64) -> (Q, Q) {
        let a = if i == 0 { self.lo(m) } else { self.points[i - 1].clone() };
        (a, self.points[i].clone())
    }

    /// Locations of right-hand configurations with reset point `u`.
    fn set_at(&self, u: &Q, m: i64) -> LocSet {
        let lo = self.lo(m);
        if *u < lo {
            return self.over;
        }
        match self.points.binary_search(u) {
            Ok(i) => self.psets[i],
            Err(i) if i < self.points.len() && *u > lo => self.gaps[i],
            Err(_) => 0,
        }
    }

    fn set_of(&self, v: &Val, m: i64) -> LocSet {
        match v {
            Val::At(u) => self.set_at(u, m),
            Val::Over => self.over,
        }
    }

    fn union(&self) -> LocSet {
        self.psets.iter().chain(&self.gaps).fold(self.over, |acc, s| acc | s)
    }

    fn lhs_points(&self) -> impl Iterator<Item = &Q> {
        self.lhs.resets.iter().filter_map(|v| match v {
            Val::At(u) => Some(u),
            Val::Over => None,
        })
    }
}

fn bit(l: usize) -> LocSet {
    1u128 << l
}

fn locs(s: LocSet) -> impl Iterator<Item = usize> {
    (0..128).filter(move |i| s & (1u128 << i) != 0)
}

fn mask(set: &BTreeSet<usize>) -> LocSet {
    set.iter().fold(0, |acc, &l| acc | bit(l))
}

/// Builds the right-hand part over `points` (which get `now` added) from a
/// finite union of points and intervals.
fn rhs_from_items(
    items: &BTreeSet<(usize, Desc)>,
    now: &Q,
    m: i64,
    extra: &[Q],
) -> Result<(Vec<Q>, Vec<LocSet>, Vec<LocSet>, LocSet)> {
    let lo = now - q(m);
    let mut pts: BTreeSet<Q> = BTreeSet::new();
    pts.insert(now.clone());
    for u in extra {
        if *u >= lo {
            pts.insert(u.clone());
        }
    }
    for (_, d) in items {
        if let Desc::Open(a, b) = d {
            if a < &lo && &lo < b {
                pts.insert(lo.clone());
            }
        }
        for e in d.endpoints() {
            if e > now {
                return Err(Error::Precondition(format!("reset point {e} lies after now")));
            }
            if *e >= lo {
                pts.insert(e.clone());
            }
        }
    }
    let points: Vec<Q> = pts.into_iter().collect();
    let mut psets = vec![0; points.len()];
    let mut gaps = vec![0; points.len()];
    let mut over = 0;
    for (l, d) in items {
        match d {
            Desc::Point(u) => {
                if *u < lo {
                    over |= bit(*l);
                } else {
                    let i = points.binary_search(u).expect("endpoint is tracked");
                    psets[i] |= bit(*l);
                }
            }
            Desc::Open(a, b) => {
                if *a < lo {
                    over |= bit(*l);
                }
                for (i, p) in points.iter().enumerate() {
                    if a < p && p < b {
                        psets[i] |= bit(*l);
                    }
                    let ga = if i == 0 { &lo } else { &points[i - 1] };
                    if ga < p && a <= ga && p <= b {
                        gaps[i] |= bit(*l);
                    }
                }
            }
        }
    }
    Ok((points, psets, gaps, over))
}

struct Node {
    joint: Joint,
    parent: Option<usize>,
    step: Option<(usize, Q)>,
    /// Maps the coordinates the state was computed in to canonical ones.
    kappa: TimedAutomorphism,
}

struct Engine<'a> {
    left: &'a TimedAutomaton,
    right: &'a TimedAutomaton,
    /// Left automaton is the right one, so containment prunes.
    same: bool,
    m: i64,
    sym_map: Vec<Option<usize>>,
    right_finals: LocSet,
    budget: usize,
}

impl<'a> Engine<'a> {
    fn new(left: &'a TimedAutomaton, right: &'a TimedAutomaton, same: bool, budget: usize) -> Result<Self> {
        if right.clock_count() != 1 {
            return Err(Error::Precondition("right-hand automaton must have one clock".into()));
        }
        if right.location_count() > 128 {
            return Err(Error::Precondition("right-hand automaton has more than 128 locations".into()));
        }
        let m = right.max_constant().max(left.max_constant());
        let sym_map = left.alphabet.iter().map(|s| right.symbol(s)).collect();
        Ok(Engine {
            left,
            right,
            same,
            m,
            sym_map,
            right_finals: mask(&right.finals),
            budget,
        })
    }

    fn violation(&self, j: &Joint) -> bool {
        self.left.finals.contains(&j.lhs.loc) && j.union() & self.right_finals == 0
    }

    fn covered(&self, j: &Joint) -> bool {
        self.same && j.set_of(&j.lhs.resets[0], self.m) & bit(j.lhs.loc) != 0
    }

    fn value(&self, v: &Val, t: &Q) -> Q {
        match v {
            Val::At(u) => t - u,
            Val::Over => q(self.m + 1),
        }
    }

    fn lhs_step(&self, l: &Lhs, sym: usize, t: &Q) -> Vec<Lhs> {
        let lo = t - q(self.m);
        let val: Vec<Q> = l.resets.iter().map(|v| self.value(v, t)).collect();
        let mut out: Vec<Lhs> = Vec::new();
        for r in self.left.rules_from(l.loc, sym) {
            if !r.guard.eval(&val) {
                continue;
            }
            let mut resets = l.resets.clone();
            for &x in &r.resets {
                resets[x] = Val::At(t.clone());
            }
            for v in resets.iter_mut() {
                if matches!(v, Val::At(u) if *u < lo) {
                    *v = Val::Over;
                }
            }
            let n = Lhs { loc: r.target, resets };
            if !out.contains(&n) {
                out.push(n);
            }
        }
        out
    }

    /// Right-hand successor sets, on the point set `points` of the new state.
    fn rhs_step(&self, j: &Joint, sym: Option<usize>, t: &Q, points: &[Q]) -> (Vec<LocSet>, Vec<LocSet>, LocSet) {
        let m = self.m;
        let lo = t - q(m);
        let mut psets = vec![0; points.len()];
        let mut gaps = vec![0; points.len()];
        let mut over: LocSet = 0;
        let Some(sym) = sym else {
            return (psets, gaps, over);
        };
        let t_idx = points.len() - 1;
        let put_point = |u: &Q, l: usize, psets: &mut Vec<LocSet>, over: &mut LocSet| {
            if *u < lo {
                *over |= bit(l);
            } else {
                psets[points.binary_search(u).expect("tracked point")] |= bit(l);
            }
        };
        let fire = |l: usize, v: &Q, f: &mut dyn FnMut(usize, bool)| {
            for r in self.right.rules_from(l, sym) {
                if r.guard.eval(std::slice::from_ref(v)) {
                    f(r.target, !r.resets.is_empty());
                }
            }
        };
        for (u, &s) in j.points.iter().zip(&j.psets) {
            let v = t - u;
            for l in locs(s) {
                fire(l, &v, &mut |tg, reset| {
                    if reset {
                        psets[t_idx] |= bit(tg);
                    } else {
                        put_point(u, tg, &mut psets, &mut over);
                    }
                });
            }
        }
        for l in locs(j.over) {
            fire(l, &q(m + 1), &mut |tg, reset| {
                if reset {
                    psets[t_idx] |= bit(tg);
                } else {
                    over |= bit(tg);
                }
            });
        }
        for (i, &s) in j.gaps.iter().enumerate() {
            if s == 0 {
                continue;
            }
            let (a, b) = j.gap_bounds(i, m);
            if a >= b {
                continue;
            }
            let mut cuts: Vec<Q> = (0..=m).map(|z| t - q(z)).filter(|c| a < *c && *c < b).collect();
            cuts.sort();
            let mut bounds = vec![a.clone()];
            bounds.extend(cuts.iter().cloned());
            bounds.push(b.clone());
            // open pieces
            for w in bounds.windows(2) {
                let rep = midpoint(&w[0], &w[1]);
                let v = t - &rep;
                for l in locs(s) {
                    fire(l, &v, &mut |tg, reset| {
                        if reset {
                            psets[t_idx] |= bit(tg);
                        } else if w[1] <= lo {
                            over |= bit(tg);
                        } else {
                            gaps[points.binary_search(&w[1]).expect("tracked point")] |= bit(tg);
                        }
                    });
                }
            }
            for c in &cuts {
                let v = t - c;
                for l in locs(s) {
                    fire(l, &v, &mut |tg, reset| {
                        if reset {
                            psets[t_idx] |= bit(tg);
                        } else {
                            put_point(c, tg, &mut psets, &mut over);
                        }
                    });
                }
            }
        }
        (psets, gaps, over)
    }

    fn successors(&self, j: &Joint, sym: usize, t: &Q) -> Vec<Joint> {
        let m = self.m;
        let lo = t - q(m);
        let lefts = self.lhs_step(&j.lhs, sym, t);
        if lefts.is_empty() {
            return vec![];
        }
        let mut pts: BTreeSet<Q> = j.points.iter().filter(|p| **p >= lo).cloned().collect();
        for z in 0..=m {
            pts.insert(t - q(z));
        }
        let points: Vec<Q> = pts.into_iter().collect();
        let (psets, gaps, over) = self.rhs_step(j, self.sym_map[sym], t, &points);
        lefts
            .into_iter()
            .map(|lhs| {
                let mut n = Joint {
                    now: t.clone(),
                    lhs,
                    points: points.clone(),
                    psets: psets.clone(),
                    gaps: gaps.clone(),
                    over,
                };
                collect_garbage(&mut n, m);
                n
            })
            .collect()
    }
}

/// Drops tracked points that carry the same content as both neighbouring gaps.
fn collect_garbage(j: &mut Joint, m: i64) {
    let lo = j.lo(m);
    let keep: BTreeSet<Q> = j.lhs_points().cloned().collect();
    let n = j.points.len();
    let mut points = Vec::with_capacity(n);
    let mut psets = Vec::with_capacity(n);
    let mut gaps = Vec::with_capacity(n);
    let mut pending_gap: Option<LocSet> = None;
    for i in 0..n {
        let below = pending_gap.unwrap_or(j.gaps[i]);
        let degenerate = i == 0 && j.points[0] == lo;
        let below = if degenerate { 0 } else { below };
        let removable = i + 1 < n
            && !keep.contains(&j.points[i])
            && j.psets[i] == below
            && j.gaps[i + 1] == below;
        if removable {
            pending_gap = Some(below);
            continue;
        }
        points.push(j.points[i].clone());
        psets.push(j.psets[i]);
        gaps.push(below);
        pending_gap = None;
    }
    j.points = points;
    j.psets = psets;
    j.gaps = gaps;
}

/// Moves `now` to 0 and the fraction classes of tracked points to evenly
/// spaced canonical positions.
fn canonicalise(j: &Joint) -> (Joint, TimedAutomorphism) {
    let tau = TimedAutomorphism::translation(&-j.now.clone());
    let fracs: BTreeSet<Q> = j.points.iter().map(|p| fract(&tau.apply(p))).collect();
    let kappa = normalising_automorphism(&fracs).compose(&tau);
    let c = Joint {
        now: kappa.apply(&j.now),
        lhs: Lhs {
            loc: j.lhs.loc,
            resets: j
                .lhs
                .resets
                .iter()
                .map(|v| match v {
                    Val::At(u) => Val::At(kappa.apply(u)),
                    Val::Over => Val::Over,
                })
                .collect(),
        },
        points: j.points.iter().map(|p| kappa.apply(p)).collect(),
        psets: j.psets.clone(),
        gaps: j.gaps.clone(),
        over: j.over,
    };
    (c, kappa)
}

/// Bucket of states that may subsume each other.
fn shape(j: &Joint) -> (usize, Vec<Option<(i64, bool)>>) {
    (
        j.lhs.loc,
        j.lhs
            .resets
            .iter()
            .map(|v| match v {
                Val::At(u) => Some((floor_i64(u), is_integer(u))),
                Val::Over => None,
            })
            .collect(),
    )
}

/// What subsumption looks at in a canonical state (`now = 0`), read off once.
struct Profile {
    lhs: Vec<Option<(i64, Option<usize>)>>,
    over: LocSet,
    /// Sets at the integers `-m..=0`.
    ints: Vec<LocSet>,
    fracs: Vec<Q>,
    /// `region[n][p]` for the period starting at integer `n - m`: odd `p` is
    /// the nonzero class `p / 2`, even `p` the stretch below class `p / 2`
    /// (or above the last class).
    region: Vec<Vec<LocSet>>,
}

fn profile(j: &Joint, m: i64) -> Profile {
    let fracs = nonzero_fracs(&j.points);
    let lhs = j
        .lhs
        .resets
        .iter()
        .map(|v| match v {
            Val::At(u) => {
                let f = fract(u);
                let class = if f == q(0) { None } else { Some(fracs.binary_search(&f).expect("left point is tracked")) };
                Some((floor_i64(u), class))
            }
            Val::Over => None,
        })
        .collect();
    let ints = (-m..=0).map(|n| j.set_at(&q(n), m)).collect();
    let width = 2 * fracs.len() + 1;
    let region = (-m..0)
        .map(|n| {
            (0..width)
                .map(|p| {
                    let f = if p % 2 == 1 {
                        fracs[p / 2].clone()
                    } else {
                        let (a, b) = frac_bounds(&fracs, p / 2);
                        midpoint(&a, &b)
                    };
                    j.set_at(&(q(n) + f), m)
                })
                .collect()
        })
        .collect();
    Profile {
        lhs,
        over: j.over,
        ints,
        fracs,
        region,
    }
}

/// `meet[n][lo][hi]`: locations common to positions `lo..=hi` of period `n`.
fn meets(p: &Profile) -> Vec<Vec<Vec<LocSet>>> {
    p.region
        .iter()
        .map(|row| {
            (0..row.len())
                .map(|lo| {
                    let mut acc = LocSet::MAX;
                    (0..row.len())
                        .map(|hi| {
                            if hi >= lo {
                                acc &= row[hi];
                            }
                            acc
                        })
                        .collect()
                })
                .collect()
        })
        .collect()
}

/// Whether some timed automorphism fixing the integers maps the left
/// configuration of `old` onto that of `new` and the right-hand set of `old`
/// into the right-hand set of `new`.
///
/// As far as the test goes, an automorphism is determined by where each
/// nonzero fraction class of `old` lands among the classes of `new`: on one
/// of them (odd position) or strictly between two (even position). The
/// constraints only relate neighbouring classes, so feasible placements are
/// found class by class.
fn subsumes(old: &Profile, new: &Profile, meet: &[Vec<Vec<LocSet>>]) -> bool {
    if old.over & !new.over != 0 || old.ints.iter().zip(&new.ints).any(|(o, n)| o & !n != 0) {
        return false;
    }
    let mut forced: Vec<Option<usize>> = vec![None; old.fracs.len()];
    for (vo, vn) in old.lhs.iter().zip(&new.lhs) {
        match (vo, vn) {
            (None, None) => {}
            (Some((io, co)), Some((inew, cn))) if io == inew => match (co, cn) {
                (None, None) => {}
                (Some(j), Some(c)) => {
                    if forced[*j].is_some_and(|p| p != 2 * c + 1) {
                        return false;
                    }
                    forced[*j] = Some(2 * c + 1);
                }
                _ => return false,
            },
            _ => return false,
        }
    }
    let periods = old.region.len();
    if periods == 0 {
        return true;
    }
    // the stretch of `old` below class `j` (above the last class for
    // `j = len`) must fit everything between positions `p` and `p2`;
    // virtual positions -1 and `width` stand for the integers
    let stretch_ok = |j: usize, p: isize, p2: isize| {
        let lo = if p % 2 == 0 { p } else { p + 1 };
        let hi = if p2 % 2 == 0 { p2 } else { p2 - 1 };
        lo > hi || (0..periods).all(|n| old.region[n][2 * j] & !meet[n][lo as usize][hi as usize] == 0)
    };
    let last = new.region[0].len() as isize;
    let mut reach: Vec<isize> = vec![-1];
    for j in 0..old.fracs.len() {
        let mut next = vec![];
        for p in 0..last {
            if forced[j].is_some_and(|f| f as isize != p) {
                continue;
            }
            if !(0..periods).all(|n| old.region[n][2 * j + 1] & !new.region[n][p as usize] == 0) {
                continue;
            }
            let fits = reach.iter().any(|&r| {
                let ordered = if r % 2 == 0 { r <= p } else { r < p };
                ordered && stretch_ok(j, r, p)
            });
            if fits {
                next.push(p);
            }
        }
        if next.is_empty() {
            return false;
        }
        reach = next;
    }
    reach.iter().any(|&r| stretch_ok(old.fracs.len(), r, last))
}

fn nonzero_fracs(points: &[Q]) -> Vec<Q> {
    let s: BTreeSet<Q> = points.iter().map(fract).filter(|f| *f != q(0)).collect();
    s.into_iter().collect()
}

fn frac_bounds(fnew: &[Q], g: usize) -> (Q, Q) {
    let lo = if g == 0 { q(0) } else { fnew[g - 1].clone() };
    let hi = if g == fnew.len() { q(1) } else { fnew[g].clone() };
    (lo, hi)
}

/// Left-hand starting configurations of an item: a point gives itself, an
/// interval gives one representative per position relative to the tracked
/// values of the right-hand side.
fn interval_representatives(a: &Q, b: &Q, anchors: &[Q], m: i64) -> Vec<Q> {
    let mut crit: BTreeSet<Q> = BTreeSet::new();
    for e in anchors.iter().chain([a, b]) {
        for z in -(m + 1)..=(m + 1) {
            let c = e + q(z);
            if a < &c && &c < b {
                crit.insert(c);
            }
        }
    }
    let mut bounds = vec![a.clone()];
    bounds.extend(crit.iter().cloned());
    bounds.push(b.clone());
    let mut out: Vec<Q> = crit.into_iter().collect();
    for w in bounds.windows(2) {
        out.push(midpoint(&w[0], &w[1]));
    }
    out.sort();
    out
}

fn run(engine: &Engine, starts: Vec<(Joint, TimedAutomorphism)>) -> Result<Verdict> {
    let m = engine.m;
    let mut nodes: Vec<Node> = Vec::new();
    let mut seen: HashSet<Joint> = HashSet::new();
    let mut buckets: HashMap<(usize, Vec<Option<(i64, bool)>>), Vec<usize>> = HashMap::new();
    let mut profiles: HashMap<usize, Profile> = HashMap::new();
    let mut queue: VecDeque<usize> = VecDeque::new();

    let mut admit = |node: Node, nodes: &mut Vec<Node>, queue: &mut VecDeque<usize>| -> Result<Option<usize>> {
        let j = &node.joint;
        if engine.covered(j) || seen.contains(j) {
            return Ok(None);
        }
        let key = shape(j);
        let bucket = buckets.entry(key).or_default();
        let prof = profile(j, m);
        let meet = meets(&prof);
        if bucket.iter().any(|o| subsumes(&profiles[o], &prof, &meet)) {
            return Ok(None);
        }
        if nodes.len() >= engine.budget {
            return Err(Error::Budget(engine.budget));
        }
        seen.insert(j.clone());
        let id = nodes.len();
        bucket.push(id);
        profiles.insert(id, prof);
        nodes.push(node);
        queue.push_back(id);
        Ok(Some(id))
    };

    for (joint, kappa) in starts {
        let violated = engine.violation(&joint);
        let node = Node {
            joint,
            parent: None,
            step: None,
            kappa,
        };
        if violated {
            nodes.push(node);
            return Ok(counterexample(engine, &nodes, nodes.len() - 1));
        }
        admit(node, &mut nodes, &mut queue)?;
    }
    while let Some(id) = queue.pop_front() {
        let j = nodes[id].joint.clone();
        let mut values: Vec<Q> = j.points.clone();
        values.extend(j.lhs_points().cloned());
        for t in critical_times(&values, &j.now, m) {
            for sym in 0..engine.left.alphabet.len() {
                for succ in engine.successors(&j, sym, &t) {
                    let (c, kappa) = canonicalise(&succ);
                    let violated = engine.violation(&c);
                    let node = Node {
                        joint: c,
                        parent: Some(id),
                        step: Some((sym, t.clone())),
                        kappa,
                    };
                    if violated {
                        nodes.push(node);
                        return Ok(counterexample(engine, &nodes, nodes.len() - 1));
                    }
                    admit(node, &mut nodes, &mut queue)?;
                }
            }
        }
    }
    Ok(Verdict {
        included: true,
        counterexample: None,
    })
}

fn counterexample(engine: &Engine, nodes: &[Node], last: usize) -> Verdict {
    let mut path = vec![last];
    while let Some(p) = nodes[*path.last().unwrap()].parent {
        path.push(p);
    }
    path.reverse();
    let mut phi = nodes[path[0]].kappa.clone();
    let mut word = TimedWord::default();
    for &id in &path[1..] {
        let (sym, t) = nodes[id].step.clone().expect("non-root step");
        word.push(engine.left.alphabet[sym].clone(), phi.inverse().apply(&t));
        phi = nodes[id].kappa.compose(&phi);
    }
    Verdict {
        included: false,
        counterexample: Some(word),
    }
}

fn check_same_now(lhs: &MacroSet, rhs: &MacroSet) -> Result<()> {
    if lhs.now != rhs.now {
        return Err(Error::Precondition("macro-configurations must share now".into()));
    }
    Ok(())
}

/// Decides `L(a, lhs) ⊆ L(a, rhs)` for macro-configurations of the
/// one-clock automaton `a`.
pub fn macro_included(a: &TimedAutomaton, lhs: &MacroSet, rhs: &MacroSet) -> Result<Verdict> {
    macro_included_with(a, lhs, rhs, &Options::default())
}

pub fn macro_included_with(a: &TimedAutomaton, lhs: &MacroSet, rhs: &MacroSet, opts: &Options) -> Result<Verdict> {
    check_same_now(lhs, rhs)?;
    let engine = Engine::new(a, a, true, opts.budget)?;
    let m = engine.m;
    let lo = &lhs.now - q(m);
    let anchors: Vec<Q> = rhs.values().into_iter().chain(lhs.values()).collect();
    let mut starts = Vec::new();
    let mut seen_starts: HashSet<Joint> = HashSet::new();
    for (l, d) in &lhs.items {
        let reps = match d {
            Desc::Point(u) => vec![u.clone()],
            Desc::Open(a, b) => interval_representatives(a, b, &anchors, m),
        };
        for u in reps {
            let v = if u < lo { Val::Over } else { Val::At(u.clone()) };
            let extra: Vec<Q> = match &v {
                Val::At(u) => vec![u.clone()],
                Val::Over => vec![],
            };
            let (points, psets, gaps, over) = rhs_from_items(&rhs.items, &rhs.now, m, &extra)?;
            let mut j = Joint {
                now: rhs.now.clone(),
                lhs: Lhs { loc: *l, resets: vec![v] },
                points,
                psets,
                gaps,
                over,
            };
            collect_garbage(&mut j, m);
            let (c, kappa) = canonicalise(&j);
            if seen_starts.insert(c.clone()) {
                starts.push((c, kappa));
            }
        }
    }
    run(&engine, starts)
}

/// Decides `L(left) ⊆ L(right)` where `right` has one clock and `left` is
/// any timed automaton whose constants do not exceed those of `right` and
/// whose diagonal guards only relate clocks below that constant.
pub fn automaton_included(left: &TimedAutomaton, right: &TimedAutomaton) -> Result<Verdict> {
    automaton_included_with(left, right, &Options::default())
}

pub fn automaton_included_with(left: &TimedAutomaton, right: &TimedAutomaton, opts: &Options) -> Result<Verdict> {
    if left.max_constant() > right.max_constant() {
        return Err(Error::Precondition(
            "left automaton uses larger constants than the right one".into(),
        ));
    }
    let engine = Engine::new(left, right, false, opts.budget)?;
    let zero = q(0);
    let items: BTreeSet<(usize, Desc)> = right.initial.iter().map(|&p| (p, Desc::Point(zero.clone()))).collect();
    let mut starts = Vec::new();
    for &l in &left.initial {
        let (points, psets, gaps, over) = rhs_from_items(&items, &zero, engine.m, &[])?;
        let j = Joint {
            now: zero.clone(),
            lhs: Lhs {
                loc: l,
                resets: vec![Val::At(zero.clone()); left.clock_count()],
            },
            points,
            psets,
            gaps,
            over,
        };
        starts.push((j, TimedAutomorphism::identity()));
    }
    run(&engine, starts)
}

/// Language equality of two macro-configurations; the counterexample comes
/// from the first failing direction.
pub fn macro_equivalent(a: &TimedAutomaton, x1: &MacroSet, x2: &MacroSet) -> Result<Verdict> {
    macro_equivalent_with(a, x1, x2, &Options::default())
}

pub fn macro_equivalent_with(a: &TimedAutomaton, x1: &MacroSet, x2: &MacroSet, opts: &Options) -> Result<Verdict> {
    let v = macro_included_with(a, x1, x2, opts)?;
    if !v.included {
        return Ok(v);
    }
    macro_included_with(a, x2, x1, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qf;
    use crate::ta::format::{parse_automaton, parse_word};
    use crate::ta::semantics::{accepts_from, Configuration};

    fn last_gap() -> TimedAutomaton {
        parse_automaton(include_str!("../../data/last_gap.nta")).unwrap()
    }

    fn single(now: Q, items: &[(usize, Q)]) -> MacroSet {
        MacroSet::from_points(now, items.iter().cloned())
    }

    #[test]
    fn reflexive() {
        let a = last_gap();
        let x = single(qf(1, 2), &[(0, q(0)), (1, q(0)), (1, qf(1, 2))]);
        assert!(macro_included(&a, &x, &x).unwrap().included);
    }

    #[test]
    fn different_reset_points_are_told_apart() {
        let a = last_gap();
        let lhs = single(qf(1, 2), &[(1, q(0))]);
        let rhs = single(qf(1, 2), &[(1, qf(1, 2))]);
        let v = macro_included(&a, &lhs, &rhs).unwrap();
        assert!(!v.included);
        let w = v.counterexample.unwrap();
        assert_eq!(w, parse_word("a@1").unwrap());
        let c = |u: Q| Configuration {
            location: 1,
            reset: vec![u],
            now: qf(1, 2),
        };
        assert!(accepts_from(&a, &c(q(0)), &w));
        assert!(!accepts_from(&a, &c(qf(1, 2)), &w));
    }

    #[test]
    fn union_monotone() {
        let a = last_gap();
        let lhs = single(qf(1, 2), &[(1, q(0))]);
        let rhs = single(qf(1, 2), &[(1, q(0)), (0, q(0))]);
        assert!(macro_included(&a, &lhs, &rhs).unwrap().included);
        let v = macro_included(&a, &rhs, &lhs).unwrap();
        assert!(!v.included);
    }

    #[test]
    fn interval_items() {
        let a = last_gap();
        let mut lhs = MacroSet::new(q(1));
        lhs.insert(1, Desc::Open(qf(1, 4), qf(3, 4)));
        let mut rhs = MacroSet::new(q(1));
        rhs.insert(1, Desc::Open(q(0), q(1)));
        assert!(macro_included(&a, &lhs, &rhs).unwrap().included);
        let v = macro_included(&a, &rhs, &lhs).unwrap();
        assert!(!v.included);
        let w = v.counterexample.unwrap();
        assert_eq!(w.len(), 1);
    }

    #[test]
    fn automaton_self_inclusion() {
        let a = last_gap();
        assert!(automaton_included(&a, &a).unwrap().included);
    }
}
