//! Seeded timed-word samplers that mix grid-aligned timestamps, arbitrary
//! rationals and deliberate fraction collisions.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::rational::{floor, fract, q, qf, Q};
use crate::ta::automaton::{TimedAutomaton, TimedWord};
use crate::ta::semantics::{fire, initial_configurations};

#[derive(Debug, Clone)]
pub struct TimeProfile {
    /// Largest denominator of non-grid delays.
    pub den: i64,
    /// Delays stay below this many time units.
    pub max_delay: i64,
    /// Probability that a timestamp copies the fraction of an earlier one.
    pub collision: f64,
    /// Probability of an integer delay.
    pub grid: f64,
}

impl Default for TimeProfile {
    fn default() -> Self {
        TimeProfile {
            den: 6,
            max_delay: 2,
            collision: 0.5,
            grid: 0.2,
        }
    }
}

impl TimeProfile {
    fn next<R: Rng>(&self, rng: &mut R, prev: &Q, seen: &[Q]) -> Q {
        let r: f64 = rng.gen();
        let spread = self.max_delay.max(1);
        if !seen.is_empty() && r < self.collision {
            let f = fract(seen.choose(rng).unwrap());
            let mut t = Q::from_integer(floor(prev)) + f;
            if t < *prev {
                t += q(1);
            }
            return t + q(rng.gen_range(0..spread));
        }
        if r < self.collision + self.grid {
            return prev + q(rng.gen_range(0..=spread));
        }
        let d = rng.gen_range(1..=self.den.max(1));
        prev + qf(rng.gen_range(0..=spread * d), d)
    }
}

/// `count` words of length `length` over `alphabet`.
pub fn sample_words(alphabet: &[String], count: usize, length: usize, profile: &TimeProfile, seed: u64) -> Vec<TimedWord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut w = TimedWord::default();
            let mut seen: Vec<Q> = vec![];
            let mut t = q(0);
            for _ in 0..length {
                t = profile.next(&mut rng, &t, &seen);
                seen.push(t.clone());
                w.push(alphabet.choose(&mut rng).expect("nonempty alphabet").clone(), t.clone());
            }
            w
        })
        .collect()
}

/// Words read along random runs of `a`, so that accepted words are common.
/// A run that gets stuck ends its word early.
pub fn sample_runs(a: &TimedAutomaton, count: usize, length: usize, profile: &TimeProfile, seed: u64) -> Vec<TimedWord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let starts = initial_configurations(a);
    (0..count)
        .map(|_| {
            let mut w = TimedWord::default();
            let Some(mut c) = starts.choose(&mut rng).cloned() else { return w };
            let mut seen: Vec<Q> = vec![];
            let mut t = q(0);
            for _ in 0..length {
                t = profile.next(&mut rng, &t, &seen);
                let moves: Vec<_> = a.rules.iter().filter_map(|r| (r.source == c.location).then(|| fire(r, &c, &t)).flatten().map(|n| (r.symbol, n))).collect();
                let Some((sym, next)) = moves.choose(&mut rng).cloned() else { break };
                seen.push(t.clone());
                w.push(a.alphabet[sym].clone(), t.clone());
                c = next;
            }
            w
        })
        .collect()
}

/// Whether two timestamps of `w` share their fractional part.
pub fn has_fraction_collision(w: &TimedWord) -> bool {
    let fr: Vec<Q> = w.0.iter().map(|(_, t)| fract(t)).collect();
    (0..fr.len()).any(|i| fr[i + 1..].contains(&fr[i]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Vec<String> {
        vec!["a".into(), "b".into()]
    }

    #[test]
    fn reproducible_and_monotone() {
        let p = TimeProfile::default();
        let x = sample_words(&ab(), 50, 6, &p, 9);
        assert_eq!(x, sample_words(&ab(), 50, 6, &p, 9));
        assert_ne!(x, sample_words(&ab(), 50, 6, &p, 10));
        for w in &x {
            w.check().unwrap();
            assert_eq!(w.len(), 6);
        }
    }

    #[test]
    fn collisions_are_frequent() {
        let ws = sample_words(&ab(), 1000, 4, &TimeProfile::default(), 1);
        let hits = ws.iter().filter(|w| has_fraction_collision(w)).count();
        assert!(hits > 900, "{hits}");
    }
}
