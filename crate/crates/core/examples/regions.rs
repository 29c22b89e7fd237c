//! Region counts for small clock counts and constants, and the regions of
//! two clocks with constant 1.
//!
//!     cargo run --example regions

use tadet::rational::qf;
use tadet::regions::{enumerate_regions, region_count, region_of};

fn main() {
    println!("k\\m     0      1      2      3");
    for k in 0..=3 {
        let row: Vec<String> = (0..=3).map(|m| format!("{:>6}", region_count(k, m))).collect();
        println!("{k}   {}", row.join(" "));
    }
    println!();
    for r in enumerate_regions(2, 1) {
        println!("{r}");
    }
    let v = [qf(1, 3), qf(7, 4)];
    println!("\n(1/3, 7/4) lies in {}", region_of(&v, 1));
}
