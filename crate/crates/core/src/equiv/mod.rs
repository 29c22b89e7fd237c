//! Inclusion and equivalence of configuration languages.

pub mod bounded;
pub mod engine;
pub mod spec;
pub mod witness;

pub use bounded::{bounded_discrepancy, bounded_equivalent};
pub use engine::{automaton_included, macro_equivalent, macro_included, Options, Verdict};
pub use spec::parse_macro_spec;
pub use witness::{validate_witness, WitnessReport};
