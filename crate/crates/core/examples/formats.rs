//! Reading the text format, normalising to greedy resets, and the basic
//! operations: product, emptiness and Graphviz export.
//!
//!     cargo run --example formats

use tadet::ta::{find_accepted_word, greedy_reset_normalise, is_deterministic, parse_automaton, product, to_dot, to_nta};

fn main() -> tadet::Result<()> {
    let a = parse_automaton(include_str!("../data/tick_nd.nta"))?;
    println!("{}: deterministic {}, greedily resetting {}", a.name, is_deterministic(&a), a.is_greedily_resetting());
    let n = greedy_reset_normalise(&a)?;
    println!("normalised:\n{}", to_nta(&n));

    let g = parse_automaton(include_str!("../data/last_gap.nta"))?;
    let e = parse_automaton(include_str!("../data/either_gap.nta"))?;
    for (x, y) in [(&g, &g), (&e, &g)] {
        match product(x, y) {
            Ok(p) => println!("{} x {}: {:?}", x.name, y.name, find_accepted_word(&p).map(|w| w.to_string())),
            Err(err) => println!("{} x {}: {err}", x.name, y.name),
        }
    }
    println!("\n{}", to_dot(&g));
    Ok(())
}
