use std::collections::BTreeSet;
use std::fmt;

use crate::rational::{q, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cmp {
    Lt,
    Le,
    Eq,
    Ge,
    Gt,
}

impl Cmp {
    pub fn holds(self, lhs: &Q, rhs: &Q) -> bool {
        match self {
            Cmp::Lt => lhs < rhs,
            Cmp::Le => lhs <= rhs,
            Cmp::Eq => lhs == rhs,
            Cmp::Ge => lhs >= rhs,
            Cmp::Gt => lhs > rhs,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Cmp::Lt => "<",
            Cmp::Le => "<=",
            Cmp::Eq => "==",
            Cmp::Ge => ">=",
            Cmp::Gt => ">",
        }
    }
}

/// Guard expression over clock indices of the owning automaton.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Constraint {
    True,
    False,
    /// `clock - minus ~ bound`, or `clock ~ bound` when `minus` is `None`.
    Atom {
        clock: usize,
        minus: Option<usize>,
        op: Cmp,
        bound: i64,
    },
    Not(Box<Constraint>),
    And(Box<Constraint>, Box<Constraint>),
    Or(Box<Constraint>, Box<Constraint>),
}

impl Constraint {
    pub fn atom(clock: usize, op: Cmp, bound: i64) -> Self {
        Constraint::Atom {
            clock,
            minus: None,
            op,
            bound,
        }
    }

    pub fn diag(clock: usize, minus: usize, op: Cmp, bound: i64) -> Self {
        Constraint::Atom {
            clock,
            minus: Some(minus),
            op,
            bound,
        }
    }

    pub fn negate(self) -> Self {
        match self {
            Constraint::True => Constraint::False,
            Constraint::False => Constraint::True,
            Constraint::Not(c) => *c,
            c => Constraint::Not(Box::new(c)),
        }
    }

    pub fn and(self, other: Constraint) -> Self {
        match (self, other) {
            (Constraint::True, c) | (c, Constraint::True) => c,
            (Constraint::False, _) | (_, Constraint::False) => Constraint::False,
            (a, b) => Constraint::And(Box::new(a), Box::new(b)),
        }
    }

    pub fn or(self, other: Constraint) -> Self {
        match (self, other) {
            (Constraint::False, c) | (c, Constraint::False) => c,
            (Constraint::True, _) | (_, Constraint::True) => Constraint::True,
            (a, b) => Constraint::Or(Box::new(a), Box::new(b)),
        }
    }

    pub fn conj(parts: impl IntoIterator<Item = Constraint>) -> Self {
        parts.into_iter().fold(Constraint::True, Constraint::and)
    }

    pub fn disj(parts: impl IntoIterator<Item = Constraint>) -> Self {
        parts.into_iter().fold(Constraint::False, Constraint::or)
    }

    /// Truth under a clock valuation indexed by clock.
    pub fn eval(&self, val: &[Q]) -> bool {
        match self {
            Constraint::True => true,
            Constraint::False => false,
            Constraint::Atom {
                clock,
                minus,
                op,
                bound,
            } => {
                let lhs = match minus {
                    Some(y) => &val[*clock] - &val[*y],
                    None => val[*clock].clone(),
                };
                op.holds(&lhs, &q(*bound))
            }
            Constraint::Not(c) => !c.eval(val),
            Constraint::And(a, b) => a.eval(val) && b.eval(val),
            Constraint::Or(a, b) => a.eval(val) || b.eval(val),
        }
    }

    pub fn max_constant(&self) -> i64 {
        match self {
            Constraint::True | Constraint::False => 0,
            Constraint::Atom { bound, .. } => bound.abs(),
            Constraint::Not(c) => c.max_constant(),
            Constraint::And(a, b) | Constraint::Or(a, b) => a.max_constant().max(b.max_constant()),
        }
    }

    pub fn clocks(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        self.collect_clocks(&mut out);
        out
    }

    fn collect_clocks(&self, out: &mut BTreeSet<usize>) {
        match self {
            Constraint::True | Constraint::False => {}
            Constraint::Atom { clock, minus, .. } => {
                out.insert(*clock);
                if let Some(y) = minus {
                    out.insert(*y);
                }
            }
            Constraint::Not(c) => c.collect_clocks(out),
            Constraint::And(a, b) | Constraint::Or(a, b) => {
                a.collect_clocks(out);
                b.collect_clocks(out);
            }
        }
    }

    /// Renumbers every clock through `f`.
    pub fn map_clocks(&self, f: &impl Fn(usize) -> usize) -> Constraint {
        match self {
            Constraint::True => Constraint::True,
            Constraint::False => Constraint::False,
            Constraint::Atom {
                clock,
                minus,
                op,
                bound,
            } => Constraint::Atom {
                clock: f(*clock),
                minus: minus.map(f),
                op: *op,
                bound: *bound,
            },
            Constraint::Not(c) => Constraint::Not(Box::new(c.map_clocks(f))),
            Constraint::And(a, b) => Constraint::And(Box::new(a.map_clocks(f)), Box::new(b.map_clocks(f))),
            Constraint::Or(a, b) => Constraint::Or(Box::new(a.map_clocks(f)), Box::new(b.map_clocks(f))),
        }
    }

    /// Rewrites the guard for a clock whose true value is `clock + offset`:
    /// non-diagonal atoms `clock ~ c` become `clock ~ c - offset`.
    pub fn offset_clock(&self, target: usize, offset: i64) -> Constraint {
        match self {
            Constraint::Atom {
                clock,
                minus: None,
                op,
                bound,
            } if *clock == target => Constraint::atom(*clock, *op, bound - offset),
            Constraint::Not(c) => Constraint::Not(Box::new(c.offset_clock(target, offset))),
            Constraint::And(a, b) => {
                Constraint::And(Box::new(a.offset_clock(target, offset)), Box::new(b.offset_clock(target, offset)))
            }
            Constraint::Or(a, b) => {
                Constraint::Or(Box::new(a.offset_clock(target, offset)), Box::new(b.offset_clock(target, offset)))
            }
            c => c.clone(),
        }
    }

    pub fn display<'a>(&'a self, names: &'a [String]) -> ConstraintDisplay<'a> {
        ConstraintDisplay { c: self, names }
    }
}

pub struct ConstraintDisplay<'a> {
    c: &'a Constraint,
    names: &'a [String],
}

impl ConstraintDisplay<'_> {
    fn write(&self, c: &Constraint, f: &mut fmt::Formatter<'_>, top: bool) -> fmt::Result {
        match c {
            Constraint::True => write!(f, "true"),
            Constraint::False => write!(f, "false"),
            Constraint::Atom {
                clock,
                minus,
                op,
                bound,
            } => match minus {
                Some(y) => write!(f, "{} - {} {} {}", self.names[*clock], self.names[*y], op.symbol(), bound),
                None => write!(f, "{} {} {}", self.names[*clock], op.symbol(), bound),
            },
            Constraint::Not(inner) => {
                write!(f, "!(")?;
                self.write(inner, f, true)?;
                write!(f, ")")
            }
            Constraint::And(a, b) | Constraint::Or(a, b) => {
                let sym = if matches!(c, Constraint::And(..)) { "&&" } else { "||" };
                if !top {
                    write!(f, "(")?;
                }
                self.write_chain(a, sym, f)?;
                write!(f, " {sym} ")?;
                self.write_chain(b, sym, f)?;
                if !top {
                    write!(f, ")")?;
                }
                Ok(())
            }
        }
    }

    fn write_chain(&self, c: &Constraint, sym: &str, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let same = matches!((c, sym), (Constraint::And(..), "&&") | (Constraint::Or(..), "||"));
        self.write(c, f, same)
    }
}

impl fmt::Display for ConstraintDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(self.c, f, true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qf;

    #[test]
    fn eval_and_constant() {
        let g = Constraint::atom(0, Cmp::Lt, 1).and(Constraint::diag(1, 0, Cmp::Ge, -3));
        assert!(g.eval(&[qf(1, 2), q(0)]));
        assert!(!g.eval(&[q(1), q(0)]));
        assert_eq!(g.max_constant(), 3);
        let names = vec!["x".to_string(), "y".to_string()];
        assert_eq!(g.display(&names).to_string(), "x < 1 && y - x >= -3");
    }

    #[test]
    fn offset_rewrites_plain_atoms() {
        let g = Constraint::atom(0, Cmp::Eq, 2);
        let h = g.offset_clock(0, 1);
        assert!(h.eval(&[q(1)]));
        assert!(!h.eval(&[q(2)]));
    }
}
