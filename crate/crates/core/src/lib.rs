//! Deterministic membership for one-clock timed automata.

pub mod equiv;
pub mod error;
pub mod pipeline;
pub mod rational;
pub mod orbits;
pub mod regions;
pub mod ta;
pub mod workbench;

pub use error::{Error, Result};
