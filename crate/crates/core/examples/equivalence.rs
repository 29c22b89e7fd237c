//! Comparing the languages of two macro-configurations exactly, and against
//! the bounded search over short words.
//!
//!     cargo run --example equivalence

use tadet::equiv::{bounded_discrepancy, macro_equivalent, parse_macro_spec};
use tadet::ta::parse_automaton;

fn main() -> tadet::Result<()> {
    let a = parse_automaton(include_str!("../data/last_gap.nta"))?;
    let q_at = |u: &str| format!(r#"{{"now": "1", "support": ["{u}"], "slots": [{{"point": "{u}", "locations": ["q"]}}]}}"#);
    let pq = r#"{"now": "1", "support": ["1"], "slots": [{"point": "1", "locations": ["p", "q"]}]}"#;
    let pairs = [
        ("q@1 vs q@1/2", q_at("1"), q_at("1/2")),
        ("q@1 vs {p,q}@1", q_at("1"), pq.to_string()),
        ("q@1/2 vs q@1/2", q_at("1/2"), q_at("1/2")),
    ];
    for (label, l, r) in pairs {
        let x1 = parse_macro_spec(&a, &l)?;
        let x2 = parse_macro_spec(&a, &r)?;
        let v = macro_equivalent(&a, &x1, &x2)?;
        let shallow = bounded_discrepancy(&a, &x1, &x2, 3);
        println!(
            "{label:<16} exact: {:<5} counterexample {:<22} bounded(3): {}",
            v.included,
            v.counterexample.map(|w| format!("\"{w}\"")).unwrap_or("-".into()),
            shallow.map(|w| format!("\"{w}\"")).unwrap_or("none".into()),
        );
    }
    Ok(())
}
