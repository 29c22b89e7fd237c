//! Exploration of pipeline states up to timed automorphism, and emission
//! of the resulting deterministic automaton.

use std::collections::{BTreeMap, HashMap, VecDeque};

use num_bigint::BigUint;

use crate::equiv::engine::Options;
use crate::error::{Error, Result};
use crate::orbits::key::OrbitKey;
use crate::pipeline::step::{initial_state, transition, PipelineState, Transition};
use crate::rational::Q;
use crate::regions::{region_count, timestamp_region_choices, Region};
use crate::ta::automaton::{TimedAutomaton, TimedWord};

#[derive(Debug, Clone)]
pub struct ExploreOptions {
    pub equiv: Options,
    /// Maximal number of orbits before giving up.
    pub max_nodes: usize,
    /// How many states landing on an already known orbit are expanded again
    /// to check that their transitions agree with the representative's.
    pub recheck: usize,
}

impl Default for ExploreOptions {
    fn default() -> Self {
        ExploreOptions {
            equiv: Options::default(),
            max_nodes: 100_000,
            recheck: 32,
        }
    }
}

#[derive(Debug, Clone)]
pub struct OrbitNode {
    pub state: PipelineState,
    pub accepting: bool,
}

#[derive(Debug, Clone)]
pub struct OrbitGraph {
    pub k: usize,
    pub m: i64,
    /// Nodes in discovery order; index 0 is initial.
    pub nodes: Vec<OrbitNode>,
    pub index: HashMap<OrbitKey, usize>,
    /// `(node, symbol, region) -> (resets, node)`.
    pub edges: BTreeMap<(usize, usize, Region), (Vec<usize>, usize)>,
}

/// The least support outgrew the clock budget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Refutation {
    pub word: TimedWord,
    pub support: Vec<Q>,
}

#[derive(Debug, Clone)]
pub enum Exploration {
    Complete(OrbitGraph),
    Refuted(Refutation),
}

/// `region_count(k, m) * 2^(n (2km + 1))`.
pub fn orbit_bound(k: usize, m: i64, n: usize) -> BigUint {
    let exp = n * (2 * k * m.max(0) as usize + 1);
    BigUint::from(region_count(k, m)) << exp
}

fn accepting(a: &TimedAutomaton, z: &PipelineState) -> bool {
    z.macro_conf.slots.iter().any(|s| s.iter().any(|p| a.finals.contains(p)))
}

/// Every guard is equivalent to `true`.
pub fn is_timeless(a: &TimedAutomaton) -> bool {
    a.rules.iter().all(|r| !crate::ta::ops::satisfiable(&r.guard.clone().negate(), a.clock_count()))
}

/// Explores the deterministic transition system of pipeline states with
/// `k` clocks over the greedily resetting automaton `a`. With `k = 0` the
/// caller must ensure that `a` is the normal form of a timeless automaton.
pub fn explore(a: &TimedAutomaton, k: usize, opts: &ExploreOptions) -> Result<Exploration> {
    if !a.is_greedily_resetting() {
        return Err(Error::Precondition("exploration needs a greedily resetting one-clock automaton".into()));
    }
    if k == 0 && a.max_constant() > 0 {
        return Err(Error::Precondition("zero clocks only suit automata without timing constraints".into()));
    }
    let m = a.max_constant();
    let bound = orbit_bound(k, m, a.location_count());
    let z0 = initial_state(a, k)?;
    let mut g = OrbitGraph {
        k,
        m,
        nodes: vec![],
        index: HashMap::new(),
        edges: BTreeMap::new(),
    };
    g.index.insert(z0.key.clone(), 0);
    g.nodes.push(OrbitNode {
        accepting: accepting(a, &z0),
        state: z0.clone(),
    });
    let mut queue: VecDeque<(usize, PipelineState)> = VecDeque::from([(0, z0)]);
    let mut rechecks = 0;
    while let Some((id, z)) = queue.pop_front() {
        for (region, t) in timestamp_region_choices(&z.mu, z.now(), m) {
            for sym in 0..a.alphabet.len() {
                let (next, resets) = match transition(a, &z, sym, &t, k, &opts.equiv)? {
                    Transition::Overflow { support, word } => {
                        return Ok(Exploration::Refuted(Refutation { word, support }));
                    }
                    Transition::Next { state, resets } => (state, resets),
                };
                let target = match g.index.get(&next.key) {
                    Some(&j) => {
                        if rechecks < opts.recheck && next.mu != g.nodes[j].state.mu {
                            rechecks += 1;
                            queue.push_back((j, next.clone()));
                        }
                        j
                    }
                    None => {
                        let j = g.nodes.len();
                        if BigUint::from(j + 1) > bound {
                            return Err(Error::Inconsistent(format!("orbit count exceeds the bound {bound}")));
                        }
                        if j >= opts.max_nodes {
                            return Err(Error::Budget(opts.max_nodes));
                        }
                        g.index.insert(next.key.clone(), j);
                        g.nodes.push(OrbitNode {
                            accepting: accepting(a, &next),
                            state: next.clone(),
                        });
                        queue.push_back((j, next));
                        j
                    }
                };
                let edge = (resets, target);
                match g.edges.get(&(id, sym, region.clone())) {
                    Some(e) if *e != edge => {
                        return Err(Error::Inconsistent(format!(
                            "orbit {id} on {} in region {region} leads to orbits {} and {}",
                            a.alphabet[sym], e.1, edge.1
                        )));
                    }
                    Some(_) => {}
                    None => {
                        g.edges.insert((id, sym, region.clone()), edge);
                    }
                }
            }
        }
    }
    Ok(Exploration::Complete(g))
}

/// The deterministic always-resetting automaton read off a complete graph.
pub fn emit_dta(a: &TimedAutomaton, g: &OrbitGraph) -> TimedAutomaton {
    let clocks: Vec<String> = (1..=g.k).map(|i| format!("x{i}")).collect();
    let mut b = TimedAutomaton::new(format!("{}_det", a.name), a.alphabet.clone(), clocks);
    for (i, n) in g.nodes.iter().enumerate() {
        b.add_location(format!("o{i}"), i == 0, n.accepting);
    }
    for ((src, sym, region), (resets, dst)) in &g.edges {
        b.add_rule(*src, *sym, region.to_constraint(), resets.iter().copied(), *dst);
    }
    b
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ta::format::parse_automaton;
    use crate::ta::greedy::greedy_reset_normalise;
    use crate::ta::ops::is_deterministic;

    #[test]
    fn bound_formula() {
        assert_eq!(orbit_bound(1, 1, 2), BigUint::from(4u32) << 6);
    }

    #[test]
    fn last_gap_is_refuted() {
        let a = greedy_reset_normalise(&parse_automaton(include_str!("../../data/last_gap.nta")).unwrap()).unwrap();
        for k in 1..=3 {
            match explore(&a, k, &ExploreOptions::default()).unwrap() {
                Exploration::Refuted(r) => assert_eq!(r.support.len(), k + 1),
                Exploration::Complete(_) => panic!("k = {k} should overflow"),
            }
        }
    }

    #[test]
    fn deterministic_input_round_trip() {
        let a = parse_automaton(
            "alphabet a\nclocks x\nlocation p init final\ntrans p -> p on a when x == 1 reset {x}\n",
        )
        .unwrap();
        let n = greedy_reset_normalise(&a).unwrap();
        let Exploration::Complete(g) = explore(&n, 1, &ExploreOptions::default()).unwrap() else {
            panic!("one clock suffices");
        };
        let b = emit_dta(&n, &g);
        assert!(is_deterministic(&b));
        assert!(b.is_always_resetting());
        assert!(b.max_constant() <= 1);
    }
}
