//! Seeded generators of small one-clock automata and macro-configurations.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::orbits::macroconf::{Desc, MacroSet};
use crate::rational::{qf, Q};
use crate::ta::automaton::TimedAutomaton;
use crate::ta::constraint::{Cmp, Constraint};

fn random_guard<R: Rng>(rng: &mut R, m: i64) -> Constraint {
    let c = rng.gen_range(0..=m);
    match rng.gen_range(0..8) {
        0 | 1 => Constraint::True,
        2 => Constraint::atom(0, Cmp::Lt, c.max(1)),
        3 => Constraint::atom(0, Cmp::Le, c),
        4 => Constraint::atom(0, Cmp::Eq, c),
        5 => Constraint::atom(0, Cmp::Gt, c),
        6 => Constraint::atom(0, Cmp::Ge, c),
        _ => {
            let lo = rng.gen_range(0..m.max(1));
            Constraint::atom(0, Cmp::Gt, lo).and(Constraint::atom(0, Cmp::Lt, lo + 1))
        }
    }
}

/// A one-clock automaton with `n` locations, constants at most `m`; some
/// rule guard uses `m` exactly when `m > 0`.
pub fn random_one_clock<R: Rng>(rng: &mut R, n: usize, m: i64, letters: usize) -> TimedAutomaton {
    let alphabet: Vec<String> = (0..letters).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
    let mut a = TimedAutomaton::new("random", alphabet, vec!["x".into()]);
    for i in 0..n {
        a.add_location(format!("l{i}"), i == 0, rng.gen_bool(0.4));
    }
    if a.finals.is_empty() {
        a.finals.insert(n - 1);
    }
    for src in 0..n {
        for sym in 0..letters {
            for _ in 0..rng.gen_range(0..=2) {
                let guard = random_guard(rng, m);
                let tgt = rng.gen_range(0..n);
                let reset = rng.gen_bool(0.5);
                a.add_rule(src, sym, guard, if reset { vec![0] } else { vec![] }, tgt);
            }
        }
    }
    if m > 0 && a.max_constant() < m {
        let src = rng.gen_range(0..n);
        a.add_rule(src, 0, Constraint::atom(0, Cmp::Eq, m), vec![0], rng.gen_range(0..n));
    }
    a
}

/// Rationals with denominator `den` in `[lo, hi]`.
fn grid_value<R: Rng>(rng: &mut R, lo: &Q, hi: &Q, den: i64) -> Q {
    let a = (lo * Q::from_integer(den.into())).ceil().to_integer();
    let b = (hi * Q::from_integer(den.into())).floor().to_integer();
    let a: i64 = a.try_into().unwrap();
    let b: i64 = b.try_into().unwrap();
    if a > b {
        return hi.clone();
    }
    qf(rng.gen_range(a..=b), den)
}

/// Up to `size` points and intervals with reset points in `[now - m, now]`.
pub fn random_macro<R: Rng>(rng: &mut R, locations: usize, now: &Q, m: i64, size: usize) -> MacroSet {
    let lo = now - Q::from_integer(m.into());
    let den = *[2, 3, 4].choose(rng).unwrap();
    let mut x = MacroSet::new(now.clone());
    for _ in 0..rng.gen_range(1..=size) {
        let l = rng.gen_range(0..locations);
        if m > 0 && rng.gen_bool(0.3) {
            let a = grid_value(rng, &lo, now, den);
            let b = grid_value(rng, &lo, now, den);
            if a < b {
                x.insert(l, Desc::Open(a, b));
                continue;
            }
        }
        x.insert(l, Desc::Point(grid_value(rng, &lo, now, den)));
    }
    x
}
