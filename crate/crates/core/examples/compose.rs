//! Concatenating two automata through a separator letter, with the second
//! one's time origin at the separator.
//!
//!     cargo run --example compose

use tadet::ta::{accepts, parse_automaton, parse_word, universal};
use tadet::workbench::compose::compose;

fn main() -> tadet::Result<()> {
    let l = universal(&["b".to_string()]);
    let m = parse_automaton(include_str!("../data/last_gap.nta"))?;
    let c = compose(&l, &m)?;
    println!("alphabet {:?}, {} clocks", c.alphabet, c.clock_count());
    for w in ["b@0 $@1 a@1 a@2", "b@0 $@1 a@1.5 a@2", "$@0.5 a@0.5 a@1 a@1.5", "b@0 a@1 a@2"] {
        println!("{:<24} {}", w, accepts(&c, &parse_word(w)?));
    }
    Ok(())
}
