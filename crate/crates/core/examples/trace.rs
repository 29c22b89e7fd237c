//! Following the determinisation along single words: the support grows with
//! each letter whose fraction must be remembered.
//!
//!     cargo run --example trace

use tadet::pipeline::{trace_word, ExploreOptions};
use tadet::ta::{parse_automaton, parse_word};

fn main() -> tadet::Result<()> {
    let opts = ExploreOptions::default();
    let last_gap = parse_automaton(include_str!("../data/last_gap.nta"))?;
    let either = parse_automaton(include_str!("../data/either_gap.nta"))?;
    for (a, k, w) in [
        (&last_gap, 1, "a@0 a@0.5"),
        (&last_gap, 2, "a@0 a@0.5 a@0.75"),
        (&either, 2, "a@0.25 b@0.5 c@1.25"),
    ] {
        println!("{} with {k} clock(s) on \"{w}\"", a.name);
        let (n, steps) = trace_word(a, k, &parse_word(w)?, &opts)?;
        for s in steps {
            println!("  {}", s.render(&n));
        }
        println!();
    }
    Ok(())
}
