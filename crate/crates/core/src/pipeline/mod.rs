//! Determinisation of one-clock automata into always-resetting
//! deterministic automata, and the membership decision built on it.

pub mod explore;
pub mod membership;
pub mod step;

pub use step::{clock_realloc, initial_state, least_support, macro_successor, transition, PipelineState, SupportOutcome, Transition};
pub use explore::{emit_dta, explore, orbit_bound, Exploration, ExploreOptions, OrbitGraph, Refutation};
pub use membership::{decide_membership, trace_word, Answer, MembershipVerdict, Mode, TraceStep};
