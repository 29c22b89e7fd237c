//! Differential testing of two automata on sampled words.

use std::io;
use std::path::{Path, PathBuf};
use std::thread;

use crate::ta::automaton::{TimedAutomaton, TimedWord};
use crate::ta::semantics::accepts;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub index: usize,
    pub word: TimedWord,
    pub left: bool,
    pub right: bool,
}

#[derive(Debug, Clone, Default)]
pub struct DiffReport {
    pub total: usize,
    pub accepted_left: usize,
    pub mismatches: Vec<Mismatch>,
}

impl DiffReport {
    pub fn agree(&self) -> bool {
        self.mismatches.is_empty()
    }

    /// Writes one `mismatch_<index>.tw` file per disagreement.
    pub fn write_replays(&self, dir: &Path) -> io::Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)?;
        self.mismatches
            .iter()
            .map(|m| {
                let p = dir.join(format!("mismatch_{}.tw", m.index));
                std::fs::write(&p, format!("{}\n", m.word))?;
                Ok(p)
            })
            .collect()
    }
}

/// Runs both automata on every sample, in parallel chunks; results are
/// ordered by sample index.
pub fn differential_test(a: &TimedAutomaton, b: &TimedAutomaton, samples: &[TimedWord]) -> DiffReport {
    let workers = thread::available_parallelism().map_or(1, |n| n.get()).min(16);
    let chunk = samples.len().div_ceil(workers).max(1);
    let verdicts: Vec<(bool, bool)> = thread::scope(|s| {
        let handles: Vec<_> = samples
            .chunks(chunk)
            .map(|part| s.spawn(move || part.iter().map(|w| (accepts(a, w), accepts(b, w))).collect::<Vec<_>>()))
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
    });
    let mut report = DiffReport {
        total: samples.len(),
        ..Default::default()
    };
    for (index, (w, (left, right))) in samples.iter().zip(verdicts).enumerate() {
        report.accepted_left += usize::from(left);
        if left != right {
            report.mismatches.push(Mismatch {
                index,
                word: w.clone(),
                left,
                right,
            });
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ta::format::parse_automaton;
    use crate::ta::ops::complement_dta;
    use crate::workbench::sample::{sample_words, TimeProfile};

    #[test]
    fn self_and_complement() {
        let a = parse_automaton("alphabet a\nclocks x\nlocation p init final\ntrans p -> p on a when x == 1 reset {x}\n").unwrap();
        let ws = sample_words(&a.alphabet, 300, 3, &TimeProfile::default(), 4);
        assert!(differential_test(&a, &a, &ws).agree());
        let c = complement_dta(&a).unwrap();
        assert_eq!(differential_test(&a, &c, &ws).mismatches.len(), ws.len());
    }
}
