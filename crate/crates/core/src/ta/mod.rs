//! Timed automata: syntax, reset-point semantics and classic constructions.

pub mod automaton;
pub mod constraint;
pub mod emptiness;
pub mod format;
pub mod greedy;
pub mod ops;
pub mod semantics;

pub use automaton::{Rule, TimedAutomaton, TimedWord};
pub use constraint::{Cmp, Constraint};
pub use emptiness::{find_accepted_word, is_empty};
pub use format::{parse_automaton, parse_constraint, parse_word, to_dot, to_nta};
pub use greedy::greedy_reset_normalise;
pub use ops::{complement_dta, is_deterministic, make_total, product, universal};
pub use semantics::{accepts, accepts_from, successors, Configuration, Run};
