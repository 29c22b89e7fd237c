//! Orbit keys of pipeline states: two states share a key iff some timed
//! automorphism maps one onto the other.

use std::collections::BTreeSet;

use crate::orbits::macroconf::SymbolicMacroConfig;
use crate::rational::Q;
use crate::regions::{region_of, Region};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrbitKey {
    pub region: Region,
    pub slots: Vec<BTreeSet<usize>>,
}

/// Key of `(x, mu)`. Assumes the support of `x` is exactly the set of
/// values in `mu` within the span window, which holds for all states built
/// by clock reallocation.
pub fn orbit_key(x: &SymbolicMacroConfig, mu: &[Q]) -> OrbitKey {
    let vals: Vec<Q> = mu.iter().map(|u| &x.now - u).collect();
    OrbitKey {
        region: region_of(&vals, x.m),
        slots: x.slots.clone(),
    }
}
