//! ioco and uioco between explicit models.
//!
//! Both relations are decided exactly by a breadth-first walk over pairs
//! (specification det state, implementation after-set). The specification
//! side follows its existential view for ioco and its universal view for
//! uioco; the implementation side is plain `after`. Out-set containment is
//! checked at every reached pair, starting with ε. Successors are expanded
//! in action order, so the first violation found is the shortest one and,
//! among those, the lexicographically least.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lts::{Action, Iolts, StateSet};
use crate::suspension::{determinize, observe, out_of, DetMode, STrace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    Ioco,
    Uioco,
}

impl Relation {
    fn spec_view(self) -> DetMode {
        match self {
            Relation::Ioco => DetMode::ExistentialInput,
            Relation::Uioco => DetMode::UniversalInput,
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Ioco => "ioco",
            Relation::Uioco => "uioco",
        })
    }
}

impl std::str::FromStr for Relation {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "ioco" => Ok(Relation::Ioco),
            "uioco" => Ok(Relation::Uioco),
            other => Err(format!("unknown relation `{other}`")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub trace: STrace,
    pub offending: Action,
    pub impl_out: BTreeSet<Action>,
    pub spec_out: BTreeSet<Action>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub relation: Relation,
    pub pass: bool,
    pub witness: Option<Witness>,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |s: &BTreeSet<Action>| {
            s.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(" ")
        };
        writeln!(f, "{}: {}", self.relation, if self.pass { "PASS" } else { "FAIL" })?;
        if let Some(w) = &self.witness {
            writeln!(f, "witness: {}", w.trace)?;
            writeln!(f, "offending: {}", w.offending)?;
            writeln!(f, "impl_out: {}", join(&w.impl_out))?;
            writeln!(f, "spec_out: {}", join(&w.spec_out))?;
        }
        Ok(())
    }
}

fn check_preconditions(i: &Iolts, s: &Iolts) -> Result<()> {
    if i.alphabet() != s.alphabet() {
        return Err(Error::Alphabet(format!(
            "implementation `{}` and specification `{}` have different alphabets",
            i.name(),
            s.name()
        )));
    }
    if !i.validate().receptive {
        return Err(Error::Precondition(format!(
            "implementation `{}` is not receptive",
            i.name()
        )));
    }
    Ok(())
}

pub fn ioco_check(i: &Iolts, s: &Iolts) -> Result<Verdict> {
    check(i, s, Relation::Ioco)
}

pub fn uioco_check(i: &Iolts, s: &Iolts) -> Result<Verdict> {
    check(i, s, Relation::Uioco)
}

pub fn check(i: &Iolts, s: &Iolts, relation: Relation) -> Result<Verdict> {
    check_preconditions(i, s)?;
    let spec = determinize(s, relation.spec_view());

    let mut impl_sets: Vec<StateSet> = Vec::new();
    let mut impl_index: HashMap<StateSet, usize> = HashMap::new();
    let mut intern = |set: StateSet, sets: &mut Vec<StateSet>| -> usize {
        *impl_index.entry(set.clone()).or_insert_with(|| {
            sets.push(set);
            sets.len() - 1
        })
    };

    let i0 = intern(i.closure_of([i.init()]), &mut impl_sets);
    let mut seen = HashSet::from([(spec.init(), i0)]);
    let mut queue = VecDeque::from([(spec.init(), i0, STrace::empty())]);

    while let Some((sd, id, trace)) = queue.pop_front() {
        let impl_out = out_of(i, &impl_sets[id]);
        let spec_out = out_of(s, spec.state(sd));
        if let Some(bad) = impl_out.difference(&spec_out).next() {
            return Ok(Verdict {
                relation,
                pass: false,
                witness: Some(Witness {
                    trace,
                    offending: bad.clone(),
                    impl_out: impl_out.clone(),
                    spec_out,
                }),
            });
        }
        for (act, &sd2) in spec.transitions(sd) {
            let next = observe(i, &impl_sets[id], act);
            if next.is_empty() {
                // out(∅) = ∅, and every extension stays empty
                continue;
            }
            let id2 = intern(next, &mut impl_sets);
            if seen.insert((sd2, id2)) {
                queue.push_back((sd2, id2, trace.extended(act.clone())));
            }
        }
    }
    Ok(Verdict {
        relation,
        pass: true,
        witness: None,
    })
}
