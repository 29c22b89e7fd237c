//! Deciding deterministic membership for the bundled one-clock automata.
//!
//!     cargo run --release --example membership

use tadet::pipeline::{decide_membership, ExploreOptions, Mode};
use tadet::ta::parse_automaton;

const INPUTS: [(&str, &str); 4] = [
    ("last_gap", include_str!("../data/last_gap.nta")),
    ("ends_ab", include_str!("../data/ends_ab.nta")),
    ("tick_nd", include_str!("../data/tick_nd.nta")),
    ("either_gap", include_str!("../data/either_gap.nta")),
];

fn main() -> tadet::Result<()> {
    let opts = ExploreOptions::default();
    for (name, src) in INPUTS {
        let a = parse_automaton(src)?;
        for k in 1..=2 {
            let v = decide_membership(&a, k, Mode::KDta, &opts)?;
            print!("{name:<11} k={k}: {:<7} orbits {:>3}", v.answer.to_string(), v.orbit_count);
            if let Some(r) = &v.refutation {
                print!("  overflow after \"{}\"", r.word);
            }
            if let Some(r) = &v.reason {
                print!("  ({r})");
            }
            println!();
            if let Some(w) = &v.witness {
                println!("{:>13}witness: {} locations, {} rules", "", w.location_count(), w.rules.len());
            }
        }
    }
    Ok(())
}
