//! Timed automorphisms move words without changing acceptance, as long as
//! they keep the integer structure intact.
//!
//!     cargo run --example automorphisms

use tadet::orbits::{perturbation_automorphism, TimedAutomorphism};
use tadet::rational::{fmt_q, q, qf};
use tadet::ta::{accepts, parse_automaton, parse_word};

fn main() -> tadet::Result<()> {
    let a = parse_automaton(include_str!("../data/last_gap.nta"))?;
    // fraction 1/2 goes to 0.3, everything else follows piecewise linearly
    let pi = TimedAutomorphism::from_anchors(&[(q(0), q(0), 0), (qf(1, 2), qf(3, 10), 0)])?;
    for x in [qf(1, 4), qf(1, 2), qf(3, 2), qf(-1, 2)] {
        println!("pi({}) = {}", fmt_q(&x), fmt_q(&pi.apply(&x)));
    }
    for w in ["a@0 a@0.5 a@1.5", "a@0.25 a@0.5 a@1.25"] {
        let w = parse_word(w)?;
        let moved = pi.apply_word(&w);
        println!("\"{w}\" {} -> \"{moved}\" {}", accepts(&a, &w), accepts(&a, &moved));
    }
    // the perturbation used to test whether a support element can be dropped
    let s = [q(0), qf(1, 2)];
    let p = perturbation_automorphism(&s, &qf(1, 2));
    println!("perturbing 1/2 within {{0, 1/2}}: 1/2 -> {}, 0 -> {}", fmt_q(&p.apply(&qf(1, 2))), fmt_q(&p.apply(&q(0))));
    Ok(())
}
