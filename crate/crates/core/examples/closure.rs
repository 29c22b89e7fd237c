//! Closing a finite set of configurations under the timed automorphisms that
//! fix a support, and printing the resulting slot layout.
//!
//!     cargo run --example closure

use tadet::orbits::{close_under, orbit_of_real, MacroSet};
use tadet::rational::{fmt_q_dec, q, qf};

fn main() {
    let names: Vec<String> = ["p", "q", "r"].iter().map(|s| s.to_string()).collect();
    let support = [qf(37, 10), qf(42, 10), q(5)];
    let now = q(5);
    let m = 2;

    let items = MacroSet::from_points(now.clone(), [(0, qf(37, 10)), (1, qf(39, 10)), (2, qf(42, 10))]);
    let x = close_under(&support, &items, m);

    let grid: Vec<String> = x.endpoints().iter().map(fmt_q_dec).collect();
    println!("support   {{3.7, 4.2, 5}}, now 5, m 2");
    println!("endpoints {}", grid.join(" "));
    println!("closure   {}", x.display(&names));

    // every real in the window falls into exactly one orbit
    for u in [qf(31, 10), qf(39, 10), q(4), qf(45, 10)] {
        println!("orbit of {:<4} {}", fmt_q_dec(&u), orbit_of_real(&support, &u, &now, m));
    }
}
