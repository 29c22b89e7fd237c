//! Timed automorphisms, orbits of reals and symbolic macro-configurations.

pub mod automorphism;
pub mod key;
pub mod macroconf;

pub use automorphism::{perturbation_automorphism, TimedAutomorphism};
pub use key::{orbit_key, OrbitKey};
pub use macroconf::{close_under, orbit_of_real, support_grid, Desc, MacroSet, SymbolicMacroConfig};
