//! Shared oracles, generators and campaigns for the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tadet::equiv::{bounded_discrepancy, bounded_equivalent, macro_equivalent, validate_witness};
use tadet::error::Error;
use tadet::orbits::{close_under, Desc, MacroSet, TimedAutomorphism};
use tadet::pipeline::{decide_membership, Answer, ExploreOptions, MembershipVerdict, Mode};
use tadet::rational::{fract, q, qf, Q};
use tadet::regions::{enumerate_regions, region_count, region_of};
use tadet::ta::automaton::TimedWord;
use tadet::ta::semantics::{accepts_from, successors, Configuration};
use tadet::ta::{is_deterministic, parse_automaton, to_nta, TimedAutomaton};
use tadet::workbench::diff::differential_test;
use tadet::workbench::lcm::{encode_lcm, inject_fault, parse_lcm, parse_run, reversal_encoding, Fault};
use tadet::workbench::random::{random_macro, random_one_clock};
use tadet::workbench::sample::{sample_runs, sample_words, TimeProfile};

pub type Outcome<T = ()> = Result<T, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

pub const LAST_GAP: &str = include_str!("../../data/last_gap.nta");
pub const ENDS_AB: &str = include_str!("../../data/ends_ab.nta");
pub const TICK_ND: &str = include_str!("../../data/tick_nd.nta");
pub const EITHER_GAP: &str = include_str!("../../data/either_gap.nta");

pub const MACHINES: [(&str, &str); 5] = [
    ("ping", include_str!("../../data/lcm/ping.lcm")),
    ("transfer", include_str!("../../data/lcm/transfer.lcm")),
    ("guarded", include_str!("../../data/lcm/guarded.lcm")),
    ("cycle", include_str!("../../data/lcm/cycle.lcm")),
    ("leaky", include_str!("../../data/lcm/leaky.lcm")),
];

pub fn load(src: &str) -> TimedAutomaton {
    parse_automaton(src).expect("bundled automaton parses")
}

/// Rational strictly inside `(lo, hi)`.
fn inside<R: Rng>(rng: &mut R, lo: &Q, hi: &Q) -> Q {
    let den = 12;
    lo + (hi - lo) * qf(rng.gen_range(1..den), den)
}

/// A random timed automorphism with up to three anchors.
pub fn random_automorphism<R: Rng>(rng: &mut R) -> TimedAutomorphism {
    let n = rng.gen_range(1..=3);
    let mut grid: Vec<i64> = (0..12).collect();
    grid.shuffle(rng);
    let mut src: Vec<i64> = grid[..n].to_vec();
    src.sort();
    grid.shuffle(rng);
    let mut img: Vec<i64> = grid[..n].to_vec();
    img.sort();
    let base = qf(rng.gen_range(-10..=10), 5);
    let lifts = src.iter().zip(&img).map(|(s, g)| (qf(*s, 12), &base + qf(*g, 12))).collect();
    TimedAutomorphism::from_lifts(lifts).expect("anchors are monotone")
}

/// A random timed automorphism fixing every element of `fixed`.
pub fn fixing_automorphism<R: Rng>(rng: &mut R, fixed: &[Q]) -> TimedAutomorphism {
    let fr: BTreeSet<Q> = fixed.iter().map(fract).collect();
    if fr.is_empty() {
        return random_automorphism(rng);
    }
    let fr: Vec<Q> = fr.into_iter().collect();
    let mut lifts: Vec<(Q, Q)> = fr.iter().map(|f| (f.clone(), f.clone())).collect();
    let mut bounds = fr.clone();
    bounds.push(&fr[0] + q(1));
    for w in bounds.windows(2) {
        if rng.gen_bool(0.7) {
            let s = inside(rng, &w[0], &w[1]);
            let g = inside(rng, &w[0], &w[1]);
            if s >= q(1) {
                lifts.push((s - q(1), g - q(1)));
            } else {
                lifts.push((s, g));
            }
        }
    }
    let pi = TimedAutomorphism::from_lifts(lifts).expect("anchors are monotone");
    assert!(fixed.iter().all(|s| pi.apply(s) == *s));
    pi
}

pub fn random_config<R: Rng>(rng: &mut R, a: &TimedAutomaton) -> Configuration {
    let m = a.max_constant();
    let den = rng.gen_range(1..=4);
    let now = qf(rng.gen_range(0..=16), den);
    let back = qf(rng.gen_range(0..=(m + 1) * den), den);
    let u = if back > now { q(0) } else { &now - back };
    Configuration {
        location: rng.gen_range(0..a.location_count()),
        reset: vec![u],
        now,
    }
}

/// A word starting at or after `now` whose timestamps often share
/// fractional parts with `anchors`.
pub fn random_word_after<R: Rng>(rng: &mut R, a: &TimedAutomaton, now: &Q, anchors: &[Q], len: usize) -> TimedWord {
    let mut w = TimedWord::default();
    let mut t = now.clone();
    for _ in 0..len {
        let den = rng.gen_range(1..=4);
        let mut next = &t + qf(rng.gen_range(0..=2 * den), den);
        if !anchors.is_empty() && rng.gen_bool(0.4) {
            let u = anchors.choose(rng).unwrap();
            let shift = (&t - u).ceil() + q(rng.gen_range(0..=1));
            let cand = u + shift;
            if cand >= t {
                next = cand;
            }
        }
        t = next;
        let sym = rng.gen_range(0..a.alphabet.len());
        w.push(a.alphabet[sym].clone(), t.clone());
    }
    w
}

/// Membership of `w` in the language of a macro-configuration, by
/// evaluating every configuration that `w` can distinguish.
pub fn accepts_macro(a: &TimedAutomaton, x: &MacroSet, w: &TimedWord) -> bool {
    x.items.iter().any(|(l, d)| {
        let reps: Vec<Q> = match d {
            Desc::Point(u) => vec![u.clone()],
            Desc::Open(lo, hi) => {
                // members of an interval only differ at the points t - z
                let mut cuts: Vec<Q> = vec![lo.clone(), hi.clone()];
                for (_, t) in &w.0 {
                    for z in 0..=a.max_constant() + 1 {
                        let c = t - q(z);
                        if lo < &c && &c < hi {
                            cuts.push(c);
                        }
                    }
                }
                cuts.sort();
                cuts.dedup();
                let mut reps: Vec<Q> = cuts[1..cuts.len() - 1].to_vec();
                reps.extend(cuts.windows(2).map(|p| (&p[0] + &p[1]) / q(2)));
                reps
            }
        };
        reps.into_iter().any(|u| {
            let c = Configuration {
                location: *l,
                reset: vec![u],
                now: x.now.clone(),
            };
            accepts_from(a, &c, w)
        })
    })
}

/// Exact equivalence against the depth-bounded search on random small
/// instances. Returns `(equal, different)`.
pub fn oracle_campaign(seed: u64, cases: usize) -> Outcome<(usize, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut yes, mut no) = (0, 0);
    for case in 0..cases {
        let n = rng.gen_range(1..=3);
        let m = rng.gen_range(0..=2);
        let letters = rng.gen_range(1..=2);
        let a = random_one_clock(&mut rng, n, m, letters);
        let now = qf(rng.gen_range(0..=8), rng.gen_range(1..=4));
        let x1 = random_macro(&mut rng, n, &now, m, 3);
        let x2 = if rng.gen_bool(0.5) {
            let mut y = x1.clone();
            y.items.extend(random_macro(&mut rng, n, &now, m, 1).items);
            y
        } else {
            random_macro(&mut rng, n, &now, m, 3)
        };
        let exact = macro_equivalent(&a, &x1, &x2).map_err(|e| format!("case {case}: {e}"))?;
        let bounded = bounded_discrepancy(&a, &x1, &x2, 4);
        match (&exact.counterexample, &bounded) {
            (Some(w), _) => {
                no += 1;
                ensure!(
                    accepts_macro(&a, &x1, w) != accepts_macro(&a, &x2, w),
                    "case {case}: counterexample {w} does not separate\n{}",
                    to_nta(&a)
                );
                ensure!(w.len() > 4 || bounded.is_some(), "case {case}: bounded search missed {w}");
                if let Some(v) = &bounded {
                    ensure!(v.len() <= 4, "case {case}: bounded witness too long");
                    ensure!(accepts_macro(&a, &x1, v) != accepts_macro(&a, &x2, v), "case {case}: bounded witness {v} does not separate");
                }
            }
            (None, Some(w)) => return Err(format!("case {case}: exact says equal, bounded found {w}\n{}", to_nta(&a))),
            (None, None) => yes += 1,
        }
    }
    Ok((yes, no))
}

/// Successors of a transported configuration are the transported successors.
pub fn transport_trials(seed: u64, trials: usize) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for trial in 0..trials {
        let (n, m) = (rng.gen_range(1..=3), rng.gen_range(0..=2));
        let a = random_one_clock(&mut rng, n, m, 2);
        let c = random_config(&mut rng, &a);
        let pi = random_automorphism(&mut rng);
        let t = &c.now + qf(rng.gen_range(0..=8), rng.gen_range(1..=4));
        let sym = rng.gen_range(0..a.alphabet.len());
        let before: BTreeSet<Configuration> = successors(&a, &c, sym, &t).unwrap().iter().map(|d| pi.apply_config(d)).collect();
        let after = successors(&a, &pi.apply_config(&c), sym, &pi.apply(&t)).unwrap();
        ensure!(before == after, "trial {trial}: transitions not transported");
    }
    Ok(())
}

/// `w` is accepted from `c` iff `pi(w)` is accepted from `pi(c)`.
pub fn language_transport_trials(seed: u64, trials: usize) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for trial in 0..trials {
        let (n, m) = (rng.gen_range(1..=3), rng.gen_range(0..=2));
        let a = random_one_clock(&mut rng, n, m, 2);
        let c = random_config(&mut rng, &a);
        let pi = random_automorphism(&mut rng);
        let anchors = [c.reset[0].clone(), c.now.clone()];
        let len = rng.gen_range(0..=4);
        let w = random_word_after(&mut rng, &a, &c.now, &anchors, len);
        ensure!(
            accepts_from(&a, &c, &w) == accepts_from(&a, &pi.apply_config(&c), &pi.apply_word(&w)),
            "trial {trial}: acceptance of {w} not transported"
        );
    }
    Ok(())
}

/// Languages are invariant under automorphisms fixing the values they
/// depend on: single configurations (reset point and now), and closed
/// macro-configurations (their support).
pub fn fixing_trials(seed: u64, trials: usize) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for trial in 0..trials {
        let m = rng.gen_range(0..=2);
        let n = rng.gen_range(1..=3);
        let letters = rng.gen_range(1..=2);
        let a = random_one_clock(&mut rng, n, m, letters);
        let c = random_config(&mut rng, &a);
        let fixed = [c.reset[0].clone(), c.now.clone()];
        let pi = fixing_automorphism(&mut rng, &fixed);
        let len = rng.gen_range(0..=4);
        let w = random_word_after(&mut rng, &a, &c.now, &fixed, len);
        ensure!(
            accepts_from(&a, &c, &w) == accepts_from(&a, &c, &pi.apply_word(&w)),
            "trial {trial}: L(c) not invariant on {w}"
        );

        // closures of items and of their images agree when pi fixes the support
        let now = qf(rng.gen_range(0..=8), rng.gen_range(1..=4));
        let items = random_macro(&mut rng, n, &now, m, 3);
        let mut support: Vec<Q> = items.values().into_iter().filter(|_| rng.gen_bool(0.5)).collect();
        support.push(now.clone());
        let rho = fixing_automorphism(&mut rng, &support);
        let x = close_under(&support, &items, m).to_macro_set();
        let y = close_under(&support, &items.map(&rho), m).to_macro_set();
        ensure!(x == y, "trial {trial}: closure of the image differs");
        ensure!(bounded_equivalent(&a, &x, &y, 4), "trial {trial}: bounded oracle separates equal closures");
        let len = rng.gen_range(0..=4);
        let w = random_word_after(&mut rng, &a, &now, &support, len);
        ensure!(
            accepts_macro(&a, &x, &w) == accepts_macro(&a, &x, &rho.apply_word(&w)),
            "trial {trial}: closed language not invariant on {w}"
        );
    }
    Ok(())
}

/// Which atoms `x ~ z`, `xi - xj ~ z` (`|z| <= m`) a valuation satisfies.
fn atom_signature(v: &[Q], m: i64) -> Vec<(bool, bool)> {
    let mut s = Vec::new();
    for x in v {
        for z in 0..=m {
            s.push((*x < q(z), *x == q(z)));
        }
    }
    for i in 0..v.len() {
        for j in 0..v.len() {
            if i != j {
                let d = &v[j] - &v[i];
                for z in -m..=m {
                    s.push((d < q(z), d == q(z)));
                }
            }
        }
    }
    s
}

/// Region counts against the partition of a rational grid into atom
/// signature classes, and region_of as a bijection onto those classes.
pub fn region_grid_oracle(kmax: usize, mmax: i64) -> Outcome {
    for k in 0..=kmax {
        for m in 0..=mmax {
            let den = 12;
            let top = (k as i64 + 1) * (m + 1) + 1;
            let grid: Vec<Q> = (0..top * den).map(|i| qf(i, den)).collect();
            let mut classes: BTreeMap<Vec<(bool, bool)>, tadet::regions::Region> = BTreeMap::new();
            let mut idx = vec![0usize; k];
            'outer: loop {
                let v: Vec<Q> = idx.iter().map(|&i| grid[i].clone()).collect();
                let r = region_of(&v, m);
                let sig = atom_signature(&v, m);
                if let Some(old) = classes.get(&sig) {
                    ensure!(*old == r, "k={k} m={m}: one class, two regions");
                } else {
                    classes.insert(sig, r);
                }
                for p in 0..k {
                    idx[p] += 1;
                    if idx[p] < grid.len() {
                        continue 'outer;
                    }
                    idx[p] = 0;
                }
                break;
            }
            let distinct: BTreeSet<_> = classes.values().collect();
            ensure!(distinct.len() == classes.len(), "k={k} m={m}: two classes share a region");
            ensure!(
                classes.len() == region_count(k, m),
                "k={k} m={m}: grid has {} classes, region_count says {}",
                classes.len(),
                region_count(k, m)
            );
        }
    }
    Ok(())
}

/// region_of, to_constraint, contains and realiser agree on random valuations.
pub fn region_round_trips(seed: u64, trials: usize) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for trial in 0..trials {
        let k = rng.gen_range(1..=3);
        let m = rng.gen_range(0..=3);
        let den = rng.gen_range(1..=7);
        let v: Vec<Q> = (0..k).map(|_| qf(rng.gen_range(0..=(k as i64 * (m + 1) + 2) * den), den)).collect();
        let r = region_of(&v, m);
        ensure!(r.contains(&v), "trial {trial}: region misses its valuation");
        ensure!(r.to_constraint().eval(&v), "trial {trial}: constraint misses its valuation");
        let real = r.realiser();
        ensure!(region_of(&real, m) == r, "trial {trial}: realiser leaves the region");
        ensure!(r.to_constraint().eval(&real), "trial {trial}: realiser violates the constraint");
        if k <= 2 {
            ensure!(enumerate_regions(k, m).contains(&r), "trial {trial}: region not enumerated");
        }
    }
    Ok(())
}

/// Checks a verdict's witness and bound; returns the witness if any.
pub fn check_structure(v: &MembershipVerdict) -> Outcome {
    for b in v.witness.iter().chain(v.candidate.iter()) {
        ensure!(is_deterministic(b), "emitted automaton is not deterministic");
        ensure!(b.is_always_resetting(), "emitted automaton is not always resetting");
        ensure!(b.max_constant() <= v.m, "emitted constant {} exceeds {}", b.max_constant(), v.m);
    }
    if v.answer == Answer::Yes {
        ensure!(v.witness_check.as_ref().is_some_and(|c| c.passed()), "witness check failed");
    }
    ensure!(BigUint::from(v.orbit_count) <= v.f_bound, "orbit count {} exceeds {}", v.orbit_count, v.f_bound);
    Ok(())
}

/// Membership on random small automata; any consistency error fails.
/// Returns `(yes, no, unknown, orbit counts seen)`.
pub fn random_pipeline_campaign(seed: u64, cases: usize) -> Outcome<(usize, usize, usize, Vec<usize>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let opts = ExploreOptions {
        max_nodes: 2_000,
        equiv: tadet::equiv::Options { budget: 300 },
        ..Default::default()
    };
    let (mut yes, mut no, mut unknown) = (0, 0, 0);
    let mut orbits = Vec::new();
    for case in 0..cases {
        let n = rng.gen_range(1..=3);
        let m = rng.gen_range(0..=2);
        let letters = rng.gen_range(1..=2);
        let a = random_one_clock(&mut rng, n, m, letters);
        let k = rng.gen_range(1..=2);
        match decide_membership(&a, k, Mode::KDta, &opts) {
            Ok(v) => {
                check_structure(&v).map_err(|e| format!("case {case}: {e}\n{}", to_nta(&a)))?;
                orbits.push(v.orbit_count);
                match v.answer {
                    Answer::Yes => yes += 1,
                    Answer::No => no += 1,
                    Answer::Unknown => unknown += 1,
                }
            }
            Err(Error::Inconsistent(s)) => return Err(format!("case {case}: {s}\n{}", to_nta(&a))),
            Err(e) => return Err(format!("case {case}: {e}")),
        }
    }
    Ok((yes, no, unknown, orbits))
}

/// Seeded samples mixing runs of both automata with free words.
pub fn mixed_samples(a: &TimedAutomaton, b: &TimedAutomaton, count: usize, seed: u64) -> Vec<TimedWord> {
    let profile = TimeProfile::default();
    let part = count / 4;
    let mut out = sample_runs(a, part, 3, &profile, seed);
    out.extend(sample_runs(a, part, 6, &profile, seed + 1));
    out.extend(sample_runs(b, part, 5, &profile, seed + 2));
    out.extend(sample_words(&a.alphabet, count - 3 * part, 4, &profile, seed + 3));
    out
}

/// The crafted positive inputs: `(name, source, clocks)`.
pub const CRAFTED: [(&str, &str, usize); 3] = [("tick_nd", TICK_ND, 1), ("ends_ab", ENDS_AB, 1), ("either_gap", EITHER_GAP, 2)];

/// Each crafted input determinises; the witness is equivalent both ways
/// and agrees with the input on `samples` seeded words.
pub fn crafted_round_trips(samples: usize) -> Outcome<Vec<usize>> {
    let mut orbits = vec![];
    for (name, src, k) in CRAFTED {
        let a = load(src);
        let v = decide_membership(&a, k, Mode::KDta, &ExploreOptions::default()).map_err(|e| format!("{name}: {e}"))?;
        ensure!(v.answer == Answer::Yes, "{name}: {} ({:?})", v.answer, v.reason);
        check_structure(&v).map_err(|e| format!("{name}: {e}"))?;
        let b = v.witness.as_ref().unwrap();
        let check = validate_witness(&a, b).map_err(|e| format!("{name}: {e}"))?;
        ensure!(check.missing.is_none() && check.extra.is_none(), "{name}: witness differs from input");
        let words = mixed_samples(&a, b, samples, 41);
        let r = differential_test(&a, b, &words);
        ensure!(r.total == samples, "{name}: ran {} samples", r.total);
        ensure!(r.agree(), "{name}: {} mismatches, first {}", r.mismatches.len(), r.mismatches[0].word);
        orbits.push(v.orbit_count);
    }
    Ok(orbits)
}

pub fn machine_run(src: &str) -> String {
    src.lines().find_map(|l| l.strip_prefix("# run:")).expect("machine lists a run").trim().to_string()
}

/// Valid encodings are rejected; each single fault is accepted.
/// Returns the number of fault words checked.
pub fn lcm_fault_matrix() -> Outcome<usize> {
    let mut checked = 0;
    for (name, src) in MACHINES {
        let m = parse_lcm(src).map_err(|e| format!("{name}: {e}"))?;
        ensure!(m.counters.len() == 4, "{name}: not a 4-counter machine");
        let a = encode_lcm(&m);
        ensure!(a.clock_count() == 1 && a.max_constant() == 1, "{name}: encoder shape");
        let run = parse_run(&m, &machine_run(src)).map_err(|e| format!("{name}: {e}"))?;
        let enc = reversal_encoding(&m, &run).map_err(|e| format!("{name}: {e}"))?;
        ensure!(!tadet::ta::accepts(&a, &enc.word), "{name}: valid encoding accepted: {}", enc.word);
        for f in Fault::ALL {
            let w = inject_fault(&m, &enc, f).ok_or(format!("{name}: {f:?} does not apply"))?;
            ensure!(w != enc.word, "{name}: {f:?} left the word unchanged");
            ensure!(tadet::ta::accepts(&a, &w), "{name}: {f:?} not accepted: {w}");
            checked += 1;
        }
    }
    Ok(checked)
}
