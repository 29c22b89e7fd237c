//! Lossy counter machines as generators of hard instances: the encoder
//! automaton rejects valid reversal-encodings of runs and accepts every
//! single fault.
//!
//!     cargo run --example lcm

use tadet::ta::accepts;
use tadet::workbench::lcm::{encode_lcm, inject_fault, lcm_bounded_reach, parse_lcm, parse_run, reversal_encoding, Fault};

fn main() -> tadet::Result<()> {
    let m = parse_lcm(include_str!("../data/lcm/transfer.lcm"))?;
    print!("{m}");
    let a = encode_lcm(&m);
    println!("encoder: {} locations, {} rules, max constant {}", a.location_count(), a.rules.len(), a.max_constant());

    let run = parse_run(&m, "inc inc mv put mv put")?;
    for c in run.configs(&m) {
        print!("{} ", m.config_display(&c));
    }
    println!();
    let enc = reversal_encoding(&m, &run)?;
    println!("encoding \"{}\" accepted: {}", enc.word, accepts(&a, &enc.word));
    for f in Fault::ALL {
        if let Some(w) = inject_fault(&m, &enc, f) {
            println!("{f:?}: \"{w}\" accepted: {}", accepts(&a, &w));
        }
    }

    let reach = lcm_bounded_reach(&m, 4, 10_000);
    println!("{} configurations explored with cap 4, stays below it: {}", reach.configs.len(), reach.below_cap);
    Ok(())
}
