//! Canonical k,m-regions of clock valuations.
//!
//! A region is the set of valuations satisfying the same atoms `x ~ z` and
//! `xi - xj ~ z` with `|z| <= m`. It is stored as one interval code per
//! clock, the weak order of fractional parts among the clocks strictly
//! between two integers at most `m`, and, for every pair of clocks at least
//! one of which is above `m`, the position of their difference relative to
//! the integers in `[-m, m]`.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::{Mutex, OnceLock};

use crate::rational::{floor_i64, fract, is_integer, midpoint, q, qf, Q};
use crate::ta::constraint::{Cmp, Constraint};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Code {
    /// `x == z`, `0 <= z <= m`.
    Int(i64),
    /// `z < x < z + 1`, `0 <= z < m`.
    Open(i64),
    /// `x > m`.
    Above,
}

impl Code {
    pub fn is_open_bounded(self) -> bool {
        matches!(self, Code::Open(_))
    }
}

/// Position of a clock difference relative to the integers in `[-m, m]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DiffCode {
    Below,
    Int(i64),
    Open(i64),
    Above,
}

fn diff_code(d: &Q, m: i64) -> DiffCode {
    if *d < q(-m) {
        DiffCode::Below
    } else if *d > q(m) {
        DiffCode::Above
    } else if is_integer(d) {
        DiffCode::Int(floor_i64(d))
    } else {
        DiffCode::Open(floor_i64(d))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Region {
    pub m: i64,
    pub codes: Vec<Code>,
    /// Clocks with an `Open` code grouped by equal fractional part, groups in
    /// increasing fractional order, each group sorted.
    pub fract_order: Vec<Vec<usize>>,
    /// `(i, j, code of xj - xi)` for `i < j` with `xi` or `xj` above `m`.
    pub diffs: Vec<(usize, usize, DiffCode)>,
}

pub fn code_of(x: &Q, m: i64) -> Code {
    if *x > q(m) {
        Code::Above
    } else if is_integer(x) {
        Code::Int(floor_i64(x))
    } else {
        Code::Open(floor_i64(x))
    }
}

/// The unique k,m-region containing the valuation `v` (with `k = v.len()`).
pub fn region_of(v: &[Q], m: i64) -> Region {
    let codes: Vec<Code> = v.iter().map(|x| code_of(x, m)).collect();
    let mut open: Vec<(Q, usize)> = codes
        .iter()
        .enumerate()
        .filter(|(_, c)| c.is_open_bounded())
        .map(|(i, _)| (fract(&v[i]), i))
        .collect();
    open.sort();
    let mut fract_order: Vec<Vec<usize>> = Vec::new();
    let mut last: Option<Q> = None;
    for (f, i) in open {
        if last.as_ref() == Some(&f) {
            fract_order.last_mut().unwrap().push(i);
        } else {
            fract_order.push(vec![i]);
            last = Some(f);
        }
    }
    let mut diffs = Vec::new();
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            if codes[i] == Code::Above || codes[j] == Code::Above {
                diffs.push((i, j, diff_code(&(&v[j] - &v[i]), m)));
            }
        }
    }
    Region {
        m,
        codes,
        fract_order,
        diffs,
    }
}

/// Upper bound `(c, strict)` on a difference in a difference-bound matrix.
type Bound = Option<(i64, bool)>;

fn tighter(a: (i64, bool), b: (i64, bool)) -> bool {
    a.0 < b.0 || (a.0 == b.0 && a.1 && !b.1)
}

/// A rational solution of a conjunction of atoms over `k` clocks, or `None`
/// when it is unsatisfiable.
fn solve_atoms(k: usize, atoms: &[(usize, Option<usize>, Cmp, i64)]) -> Option<Vec<Q>> {
    // index 0 is the constant zero, clock i is i + 1; d[a][b] bounds xa - xb
    let n = k + 1;
    let mut d: Vec<Vec<Bound>> = vec![vec![None; n]; n];
    let put = |d: &mut Vec<Vec<Bound>>, a: usize, b: usize, c: (i64, bool)| {
        if d[a][b].map_or(true, |old| tighter(c, old)) {
            d[a][b] = Some(c);
        }
    };
    for i in 0..n {
        put(&mut d, i, i, (0, false));
        put(&mut d, 0, i, (0, false));
    }
    for &(x, y, op, z) in atoms {
        let (a, b) = (x + 1, y.map_or(0, |y| y + 1));
        match op {
            Cmp::Lt => put(&mut d, a, b, (z, true)),
            Cmp::Le => put(&mut d, a, b, (z, false)),
            Cmp::Eq => {
                put(&mut d, a, b, (z, false));
                put(&mut d, b, a, (-z, false));
            }
            Cmp::Ge => put(&mut d, b, a, (-z, false)),
            Cmp::Gt => put(&mut d, b, a, (-z, true)),
        }
    }
    for via in 0..n {
        for a in 0..n {
            for b in 0..n {
                if let (Some(x), Some(y)) = (d[a][via], d[via][b]) {
                    put(&mut d, a, b, (x.0 + y.0, x.1 || y.1));
                }
            }
        }
    }
    if (0..n).any(|i| d[i][i].is_some_and(|c| tighter(c, (0, false)))) {
        return None;
    }
    // assign clocks in turn inside the bounds left by the earlier ones
    let mut val = vec![q(0); n];
    for i in 1..n {
        let mut lo: Option<(Q, bool)> = None;
        let mut hi: Option<(Q, bool)> = None;
        for j in 0..i {
            if let Some((c, s)) = d[j][i] {
                let cand = (&val[j] - q(c), s);
                if lo.as_ref().map_or(true, |l| cand.0 > l.0 || (cand.0 == l.0 && s)) {
                    lo = Some(cand);
                }
            }
            if let Some((c, s)) = d[i][j] {
                let cand = (&val[j] + q(c), s);
                if hi.as_ref().map_or(true, |h| cand.0 < h.0 || (cand.0 == h.0 && s)) {
                    hi = Some(cand);
                }
            }
        }
        let (lo, lo_strict) = lo.expect("every clock is bounded below by zero");
        val[i] = match hi {
            None if lo_strict => lo + q(1),
            None => lo,
            Some((h, _)) if h == lo => lo,
            Some((h, _)) => midpoint(&lo, &h),
        };
    }
    Some(val.split_off(1))
}

impl Region {
    pub fn clock_count(&self) -> usize {
        self.codes.len()
    }

    /// A rational valuation inside the region.
    pub fn realiser(&self) -> Vec<Q> {
        if self.diffs.is_empty() {
            // small fractions in rank order, no solver needed
            let groups = self.fract_order.len() as i64;
            return self
                .codes
                .iter()
                .enumerate()
                .map(|(i, c)| match c {
                    Code::Int(z) => q(*z),
                    Code::Above => q(self.m + 1),
                    Code::Open(z) => q(*z) + qf(self.fract_rank(i).expect("open clock without fraction group") as i64 + 1, groups + 1),
                })
                .collect();
        }
        solve_atoms(self.clock_count(), &self.atoms()).expect("regions are nonempty")
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        v.len() == self.codes.len() && region_of(v, self.m) == *self
    }

    fn fract_rank(&self, clock: usize) -> Option<usize> {
        self.fract_order.iter().position(|g| g.contains(&clock))
    }

    /// `(clock, minus, op, bound)` atoms whose conjunction is this region.
    fn atoms(&self) -> Vec<(usize, Option<usize>, Cmp, i64)> {
        let mut out = Vec::new();
        for (i, c) in self.codes.iter().enumerate() {
            match c {
                Code::Int(z) => out.push((i, None, Cmp::Eq, *z)),
                Code::Open(z) => {
                    out.push((i, None, Cmp::Gt, *z));
                    out.push((i, None, Cmp::Lt, z + 1));
                }
                Code::Above => out.push((i, None, Cmp::Gt, self.m)),
            }
        }
        for i in 0..self.codes.len() {
            for j in (i + 1)..self.codes.len() {
                let (Code::Open(zi), Code::Open(zj)) = (self.codes[i], self.codes[j]) else {
                    continue;
                };
                let (ri, rj) = (self.fract_rank(i).unwrap(), self.fract_rank(j).unwrap());
                let d = zj - zi;
                // xj - xi = d + (fract xj - fract xi)
                match rj.cmp(&ri) {
                    Ordering::Equal => out.push((j, Some(i), Cmp::Eq, d)),
                    Ordering::Greater => {
                        out.push((j, Some(i), Cmp::Gt, d));
                        out.push((j, Some(i), Cmp::Lt, d + 1));
                    }
                    Ordering::Less => {
                        out.push((j, Some(i), Cmp::Gt, d - 1));
                        out.push((j, Some(i), Cmp::Lt, d));
                    }
                }
            }
        }
        for &(i, j, c) in &self.diffs {
            match c {
                DiffCode::Below => out.push((j, Some(i), Cmp::Lt, -self.m)),
                DiffCode::Int(d) => out.push((j, Some(i), Cmp::Eq, d)),
                DiffCode::Open(d) => {
                    out.push((j, Some(i), Cmp::Gt, d));
                    out.push((j, Some(i), Cmp::Lt, d + 1));
                }
                DiffCode::Above => out.push((j, Some(i), Cmp::Gt, self.m)),
            }
        }
        out
    }

    /// A constraint whose solutions are exactly this region.
    pub fn to_constraint(&self) -> Constraint {
        Constraint::conj(self.atoms().into_iter().map(|(c, minus, op, z)| match minus {
            None => Constraint::atom(c, op, z),
            Some(y) => Constraint::diag(c, y, op, z),
        }))
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.codes.len()).map(|i| format!("x{i}")).collect();
        write!(f, "{}", self.to_constraint().display(&names))
    }
}

fn enumerate_uncached(k: usize, m: i64) -> Vec<Region> {
    // Every region has a realiser whose fractional parts are multiples of
    // 1/(k+1) (keep their order) and whose gaps between consecutive values,
    // zero included, are at most m + 1 (shrink larger gaps by whole units).
    let top = k as i64 * (m + 1);
    let den = k as i64 + 1;
    let mut seen: BTreeSet<Region> = BTreeSet::new();
    let mut idx = vec![0i64; k];
    let steps = (top + 1) * den;
    loop {
        let v: Vec<Q> = idx.iter().map(|&s| qf(s, den)).collect();
        seen.insert(region_of(&v, m));
        let mut pos = 0;
        loop {
            if pos == k {
                return seen.into_iter().collect();
            }
            idx[pos] += 1;
            if idx[pos] < steps {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Every k,m-region exactly once, in a fixed order.
pub fn enumerate_regions(k: usize, m: i64) -> Vec<Region> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, i64), Vec<Region>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(r) = cache.lock().unwrap().get(&(k, m)) {
        return r.clone();
    }
    let r = enumerate_uncached(k, m);
    cache.lock().unwrap().insert((k, m), r.clone());
    r
}

pub fn region_count(k: usize, m: i64) -> usize {
    enumerate_regions(k, m).len()
}

/// Candidate timestamps `t >= now` covering every position of `t` relative
/// to the points `u + z` (`u` in `values`, `0 <= z <= m`): each such point,
/// the midpoint to the next one, and one unit past the last.
pub fn critical_times(values: &[Q], now: &Q, m: i64) -> Vec<Q> {
    let mut crit: BTreeSet<Q> = BTreeSet::new();
    crit.insert(now.clone());
    for u in values {
        for z in 0..=m {
            let c = u + q(z);
            if c >= *now {
                crit.insert(c);
            }
        }
    }
    let pts: Vec<Q> = crit.into_iter().collect();
    let mut cands: Vec<Q> = Vec::with_capacity(2 * pts.len());
    for (i, p) in pts.iter().enumerate() {
        cands.push(p.clone());
        match pts.get(i + 1) {
            Some(nx) => cands.push(midpoint(p, nx)),
            None => cands.push(p + q(1)),
        }
    }
    cands
}

/// Distinct regions of the valuation `t - mu` reachable by a timestamp
/// `t >= now`, each with a canonical representative timestamp, in
/// increasing time order. Differences of clocks do not move with `t`.
pub fn timestamp_region_choices(mu: &[Q], now: &Q, m: i64) -> Vec<(Region, Q)> {
    let cands = critical_times(mu, now, m);
    let mut seen: BTreeSet<Region> = BTreeSet::new();
    let mut out = Vec::new();
    for t in cands {
        let v: Vec<Q> = mu.iter().map(|u| &t - u).collect();
        let r = region_of(&v, m);
        if seen.insert(r.clone()) {
            out.push((r, t));
        }
    }
    out
}
