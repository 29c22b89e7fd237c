//! JSON description of a macro-configuration:
//!
//! ```json
//! {"now": "5", "support": ["3.7", 4.2, "5"],
//!  "slots": [{"point": "37/10", "locations": ["p"]},
//!            {"interval": ["3.7", "4"], "locations": ["q"]}]}
//! ```
//!
//! Values are JSON numbers or strings such as `"37/10"`. With a nonempty
//! support the items are closed under it.

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::orbits::macroconf::{close_under, Desc, MacroSet};
use crate::rational::{parse_q, Q};
use crate::ta::automaton::TimedAutomaton;

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum Num {
    Text(String),
    Json(serde_json::Number),
}

impl Num {
    fn value(&self) -> Result<Q> {
        match self {
            Num::Text(s) => parse_q(s),
            Num::Json(n) => parse_q(&n.to_string()),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SlotSpec {
    point: Option<Num>,
    interval: Option<[Num; 2]>,
    locations: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MacroSpec {
    now: Num,
    #[serde(default)]
    support: Vec<Num>,
    slots: Vec<SlotSpec>,
}

fn bad(msg: impl Into<String>) -> Error {
    Error::Parse {
        line: 0,
        col: 0,
        msg: msg.into(),
    }
}

pub fn parse_macro_spec(a: &TimedAutomaton, json: &str) -> Result<MacroSet> {
    let spec: MacroSpec = serde_json::from_str(json).map_err(|e| Error::Parse {
        line: e.line(),
        col: e.column(),
        msg: e.to_string(),
    })?;
    let now = spec.now.value()?;
    let mut items = MacroSet::new(now.clone());
    for (i, s) in spec.slots.iter().enumerate() {
        let d = match (&s.point, &s.interval) {
            (Some(p), None) => Desc::Point(p.value()?),
            (None, Some([lo, hi])) => {
                let (lo, hi) = (lo.value()?, hi.value()?);
                if lo >= hi {
                    return Err(bad(format!("slot {i}: empty interval")));
                }
                Desc::Open(lo, hi)
            }
            _ => return Err(bad(format!("slot {i}: give exactly one of `point` and `interval`"))),
        };
        if d.endpoints().into_iter().any(|e| *e > now) {
            return Err(Error::Precondition(format!("slot {i} lies after now")));
        }
        for l in &s.locations {
            let id = a.location(l).ok_or_else(|| bad(format!("slot {i}: unknown location `{l}`")))?;
            items.insert(id, d.clone());
        }
    }
    if spec.support.is_empty() {
        return Ok(items);
    }
    let support = spec.support.iter().map(Num::value).collect::<Result<Vec<_>>>()?;
    Ok(close_under(&support, &items, a.max_constant()).to_macro_set())
}
