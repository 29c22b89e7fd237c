//! Timed automorphisms: monotone bijections of the rationals that commute
//! with `+1`, stored as finitely many anchors on fraction classes with
//! piecewise-linear interpolation between them.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::rational::{floor, fract, midpoint, q, qf, Q};
use crate::ta::automaton::TimedWord;
use crate::ta::semantics::Configuration;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TimedAutomorphism {
    /// `(source fraction in [0,1), image value)`; sorted by source, images
    /// strictly increasing and spanning less than one unit.
    anchors: Vec<(Q, Q)>,
}

impl TimedAutomorphism {
    pub fn identity() -> Self {
        TimedAutomorphism { anchors: vec![] }
    }

    /// `x -> x + c`.
    pub fn translation(c: &Q) -> Self {
        TimedAutomorphism {
            anchors: vec![(q(0), c.clone())],
        }
    }

    /// Builds from `(source fraction, image fraction, integer shift)` triples:
    /// `pi(n + f) = n + shift + f'`.
    pub fn from_anchors(triples: &[(Q, Q, i64)]) -> Result<Self> {
        let mut anchors = Vec::with_capacity(triples.len());
        for (f, g, z) in triples {
            let unit = q(0)..q(1);
            if !unit.contains(f) || !unit.contains(g) {
                return Err(Error::Precondition("anchor fractions must lie in [0,1)".into()));
            }
            anchors.push((f.clone(), g + q(*z)));
        }
        Self::from_lifts(anchors)
    }

    /// Builds from `(source fraction, image value)` pairs.
    pub fn from_lifts(mut anchors: Vec<(Q, Q)>) -> Result<Self> {
        anchors.sort_by(|a, b| a.0.cmp(&b.0));
        for w in anchors.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::Precondition("duplicate anchor source fraction".into()));
            }
            if w[0].1 >= w[1].1 {
                return Err(Error::Precondition("anchor images are not monotone".into()));
            }
        }
        if let (Some(first), Some(last)) = (anchors.first(), anchors.last()) {
            if anchors.len() > 1 && last.1 >= &first.1 + q(1) {
                return Err(Error::Precondition("anchor images wrap past one unit".into()));
            }
            if fract(&first.0) != first.0 {
                return Err(Error::Precondition("anchor fractions must lie in [0,1)".into()));
            }
        }
        Ok(TimedAutomorphism { anchors })
    }

    pub fn anchors(&self) -> &[(Q, Q)] {
        &self.anchors
    }

    pub fn apply(&self, x: &Q) -> Q {
        if self.anchors.is_empty() {
            return x.clone();
        }
        let n = Q::from_integer(floor(x));
        let f = x - &n;
        let len = self.anchors.len();
        let idx = self.anchors.iter().rposition(|(s, _)| *s <= f);
        let ((s0, l0), (s1, l1)) = match idx {
            Some(i) if i + 1 < len => (self.anchors[i].clone(), self.anchors[i + 1].clone()),
            Some(i) => {
                let (s, l) = &self.anchors[0];
                (self.anchors[i].clone(), (s + q(1), l + q(1)))
            }
            None => {
                let (s, l) = &self.anchors[len - 1];
                ((s - q(1), l - q(1)), self.anchors[0].clone())
            }
        };
        if f == s0 {
            return n + l0;
        }
        n + &l0 + (&f - &s0) * (&l1 - &l0) / (&s1 - &s0)
    }

    pub fn inverse(&self) -> Self {
        let anchors = self
            .anchors
            .iter()
            .map(|(s, l)| (fract(l), s - Q::from_integer(floor(l))))
            .collect();
        TimedAutomorphism::from_lifts(anchors).expect("inverse of a valid automorphism")
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn compose(&self, other: &TimedAutomorphism) -> Self {
        let inv = other.inverse();
        let mut breaks: BTreeSet<Q> = other.anchors.iter().map(|(s, _)| s.clone()).collect();
        for (s, _) in &self.anchors {
            breaks.insert(fract(&inv.apply(s)));
        }
        if breaks.is_empty() {
            return TimedAutomorphism::identity();
        }
        let anchors = breaks.into_iter().map(|b| {
            let img = self.apply(&other.apply(&b));
            (b, img)
        });
        TimedAutomorphism::from_lifts(anchors.collect()).expect("composition of valid automorphisms")
    }

    /// Whether `x` is a fixed point.
    pub fn fixes(&self, x: &Q) -> bool {
        self.apply(x) == *x
    }

    pub fn apply_word(&self, w: &TimedWord) -> TimedWord {
        TimedWord(w.0.iter().map(|(a, t)| (a.clone(), self.apply(t))).collect())
    }

    pub fn apply_config(&self, c: &Configuration) -> Configuration {
        Configuration {
            location: c.location,
            reset: c.reset.iter().map(|u| self.apply(u)).collect(),
            now: self.apply(&c.now),
        }
    }
}

/// Fixes every fraction class of `support` except that of `s`, and moves
/// the class of `s` to the midpoint of the gap up to the next fixed class.
pub fn perturbation_automorphism(support: &[Q], s: &Q) -> TimedAutomorphism {
    let f = fract(s);
    let fixed: BTreeSet<Q> = support.iter().map(fract).filter(|g| *g != f).collect();
    let next = fixed
        .iter()
        .find(|g| **g > f)
        .cloned()
        .or_else(|| fixed.iter().next().map(|g| g + q(1)))
        .unwrap_or_else(|| &f + q(1));
    let target = midpoint(&f, &next);
    let mut anchors: Vec<(Q, Q)> = fixed.into_iter().map(|g| (g.clone(), g)).collect();
    anchors.push((f, target));
    TimedAutomorphism::from_lifts(anchors).expect("perturbation preserves cyclic order")
}

/// Fixes the integers and sends the `i`-th smallest nonzero fraction of
/// `fracs` (counting from 1) to `i / (count + 1)`.
pub fn normalising_automorphism(fracs: &BTreeSet<Q>) -> TimedAutomorphism {
    let nonzero: Vec<&Q> = fracs.iter().filter(|f| **f != q(0)).collect();
    let r = nonzero.len() as i64 + 1;
    let mut anchors = vec![(q(0), q(0))];
    for (i, f) in nonzero.into_iter().enumerate() {
        anchors.push((f.clone(), qf(i as i64 + 1, r)));
    }
    TimedAutomorphism::from_lifts(anchors).expect("normalisation is monotone")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shift_example() {
        let pi = TimedAutomorphism::from_anchors(&[(qf(2, 5), qf(1, 2), 1)]).unwrap();
        assert_eq!(pi.apply(&qf(34, 10)), qf(45, 10));
        assert_eq!(pi.apply(&qf(54, 10)), qf(65, 10));
        assert_eq!(pi.apply(&qf(-36, 10)), qf(-25, 10));
    }

    #[test]
    fn rejects_non_monotone() {
        let bad = TimedAutomorphism::from_anchors(&[(qf(1, 5), qf(3, 5), 0), (qf(2, 5), qf(1, 5), 0)]);
        assert!(bad.is_err());
    }

    #[test]
    fn perturbation_of_half() {
        let pi = perturbation_automorphism(&[q(0), qf(1, 2)], &qf(1, 2));
        assert_eq!(pi.apply(&qf(1, 2)), qf(3, 4));
        assert_eq!(pi.apply(&q(3)), q(3));
        let single = perturbation_automorphism(&[qf(7, 10)], &qf(7, 10));
        assert_eq!(single.apply(&qf(7, 10)), qf(12, 10));
    }

    #[test]
    fn inverse_and_compose() {
        let a = TimedAutomorphism::from_anchors(&[(qf(1, 10), qf(3, 10), 0), (qf(1, 2), qf(9, 10), 0)]).unwrap();
        let b = TimedAutomorphism::from_anchors(&[(qf(1, 4), qf(1, 3), 2)]).unwrap();
        for x in [qf(-7, 3), q(0), qf(13, 10), qf(49, 10)] {
            assert_eq!(a.inverse().apply(&a.apply(&x)), x);
            assert_eq!(a.compose(&b).apply(&x), a.apply(&b.apply(&x)));
        }
    }
}
