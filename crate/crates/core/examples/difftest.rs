//! Checking an emitted deterministic automaton against its input on seeded
//! samples, then against its own complement.
//!
//!     cargo run --release --example difftest

use tadet::pipeline::{decide_membership, ExploreOptions, Mode};
use tadet::ta::{complement_dta, parse_automaton};
use tadet::workbench::diff::differential_test;
use tadet::workbench::sample::{has_fraction_collision, sample_runs, sample_words, TimeProfile};

fn main() -> tadet::Result<()> {
    let a = parse_automaton(include_str!("../data/either_gap.nta"))?;
    let v = decide_membership(&a, 2, Mode::KDta, &ExploreOptions::default())?;
    let b = v.witness.expect("two clocks suffice");

    let profile = TimeProfile::default();
    let mut samples = sample_runs(&a, 5000, 3, &profile, 1);
    samples.extend(sample_words(&a.alphabet, 5000, 3, &profile, 2));
    let collisions = samples.iter().filter(|w| has_fraction_collision(w)).count();
    println!("{} samples, {collisions} with repeated fractions", samples.len());

    let r = differential_test(&a, &b, &samples);
    println!("input vs witness: {} accepted, {} mismatches", r.accepted_left, r.mismatches.len());
    let r = differential_test(&b, &complement_dta(&b)?, &samples);
    println!("witness vs complement: {} mismatches", r.mismatches.len());
    Ok(())
}
