//! Named models: the vending machine, the two uioco counter-examples and
//! the alternating-bit components.
//!
//! Every fixture is stored as a text document (see [`crate::formats`]) or
//! derived from one. Each carries a short note on where its shape comes
//! from and which facts about it are pinned.

use crate::algebra::selfloop_complete;
use crate::error::{Error, Result};
use crate::formats::parse_iolts;
use crate::lts::Iolts;

pub struct Fixture {
    pub name: &'static str,
    pub note: &'static str,
    source: Source,
}

enum Source {
    Text(&'static str),
    SelfLoops(&'static str),
}

const VENDING_S1: &str = "\
iolts S1
inputs coin utee ucoffee umilk done
outputs mtee mcoffee mcoffeemilk msg
init 1
1 coin? 2
2 utee? 3
2 ucoffee? 4
4 umilk? 5
3 mtee! 6
4 mcoffee! 6
5 mcoffeemilk! 6
6 done? 7
7 msg! 1
";

const VENDING_S2: &str = "\
iolts S2
inputs mtee mcoffee mcoffeemilk
outputs coffee coffeemilk done
init A
A mcoffee? B
A mcoffeemilk? C
B coffee! D
C coffeemilk! D
D done! A
";

const VENDING_I2: &str = "\
iolts I2
inputs mtee mcoffee mcoffeemilk
outputs coffee coffeemilk done
init A
A mtee? B
A mcoffee? B
A mcoffeemilk? C
B coffee! D
C coffeemilk! D
D done! A
# unexpected requests are swallowed everywhere but A
B mtee? B
B mcoffee? B
B mcoffeemilk? B
C mtee? C
C mcoffee? C
C mcoffeemilk? C
D mtee? D
D mcoffee? D
D mcoffeemilk? D
";

const UIOCO_S1: &str = "\
iolts S1
inputs x
outputs
init 1
1 x? 2
";

const UIOCO_S2: &str = "\
iolts S2
inputs
outputs x
init A
A x! B
B x! C
";

const UIOCO_I2: &str = "\
iolts I2
inputs
outputs x
init A
A x! B
B x! C
";

const HIDE_S: &str = "\
iolts S
inputs i
outputs a b
init 1
1 a! 2
2 i? 3
";

const HIDE_I: &str = "\
iolts I
inputs i
outputs a b
init A
A a! B
A i? D
B i? C
C i? C
D b! E
D i? D
E i? E
";

const ALTBIT_A: &str = "\
iolts A
inputs Put Ack0 Ack1
outputs Data0 Data1
init 0
0 Put? 1
1 Data0! 2
2 Ack0? 3
2 tau 1
2 Ack1? 2
3 Put? 4
3 Ack0? 3
4 Data1! 5
5 Ack1? 0
5 Ack0? 5
";

const ALTBIT_B: &str = "\
iolts B
inputs Data0 Data1
outputs Received Ack0 Ack1
init 0
0 Data0? 1
0 tau 5
1 Received! 2
1 Ack1! 1
2 Ack0! 3
3 Data1? 4
3 Data0? 2
3 tau 2
4 Received! 5
5 Ack1! 0
";

const ALTBIT_DRAWN: &str = "\
iolts composite-drawn
inputs Put
outputs Ack0 Ack1 Data0 Data1 Received
init 0
0 Ack1! 0
0 Put? 1
1 Ack1! 1
1 Data0! 2
2 Received! 3
2 tau 4
4 Received! 5
4 Data0! 2
3 tau 5
3 Ack0! 6
5 Data0! 3
5 Ack0! 6
6 Ack0! 6
6 Put? 7
7 Data1! 8
7 Ack0! 7
8 Received! 9
8 tau 10
9 Ack1! 0
9 tau 11
10 Received! 11
10 Data1! 8
11 Ack1! 0
11 Data1! 9
";

const CATALOG: &[Fixture] = &[
    Fixture {
        name: "vending/S1",
        note: "user interface specification; 7 states and 9 transitions, all drink \
               requests lead to the same waiting state",
        source: Source::Text(VENDING_S1),
    },
    Fixture {
        name: "vending/S2",
        note: "drink maker specification; under-specified in A, which omits mtee?",
        source: Source::Text(VENDING_S2),
    },
    Fixture {
        name: "vending/I1",
        note: "user interface implementation: S1 with every unexpected input \
               silently consumed",
        source: Source::SelfLoops(VENDING_S1),
    },
    Fixture {
        name: "vending/I2",
        note: "drink maker implementation: a tee request in A leads to B and a \
               coffee; unexpected inputs are swallowed in B, C and D",
        source: Source::Text(VENDING_I2),
    },
    Fixture {
        name: "uioco-ce/S1",
        note: "uioco composition counter-example, first specification",
        source: Source::Text(UIOCO_S1),
    },
    Fixture {
        name: "uioco-ce/S2",
        note: "uioco composition counter-example, second specification",
        source: Source::Text(UIOCO_S2),
    },
    Fixture {
        name: "uioco-ce/I1",
        note: "uioco composition counter-example, receptive first implementation",
        source: Source::SelfLoops(UIOCO_S1),
    },
    Fixture {
        name: "uioco-ce/I2",
        note: "uioco composition counter-example, second implementation (equal to S2)",
        source: Source::Text(UIOCO_I2),
    },
    Fixture {
        name: "hide-ce/S",
        note: "uioco hiding counter-example, specification",
        source: Source::Text(HIDE_S),
    },
    Fixture {
        name: "hide-ce/I",
        note: "uioco hiding counter-example, implementation",
        source: Source::Text(HIDE_I),
    },
    Fixture {
        name: "altbit/A",
        note: "alternating-bit sender; shape reconstructed, sizes pinned: 6 states, \
               10 transitions, demonic completion 9 states and 31 transitions \
               (forces 7 input transitions and a single timeout)",
        source: Source::Text(ALTBIT_A),
    },
    Fixture {
        name: "altbit/B",
        note: "alternating-bit receiver; shape reconstructed, sizes pinned: 6 states, \
               10 transitions, demonic completion 9 states and 28 transitions \
               (forces 3 input transitions)",
        source: Source::Text(ALTBIT_B),
    },
    Fixture {
        name: "altbit/composite-drawn",
        note: "the drawn 12-state, 24-transition alternating-bit composite, verbatim",
        source: Source::Text(ALTBIT_DRAWN),
    },
];

pub fn catalog() -> &'static [Fixture] {
    CATALOG
}

pub fn fixture_names() -> impl Iterator<Item = &'static str> {
    CATALOG.iter().map(|f| f.name)
}

pub fn note(name: &str) -> Option<&'static str> {
    CATALOG.iter().find(|f| f.name == name).map(|f| f.note)
}

/// A fresh copy of the named fixture. The model's own name is the part of
/// the fixture name after the last `/`.
pub fn load_fixture(name: &str) -> Result<Iolts> {
    let fixture = CATALOG
        .iter()
        .find(|f| f.name == name)
        .ok_or_else(|| Error::UnknownFixture {
            name: name.to_string(),
            available: fixture_names().collect::<Vec<_>>().join(", "),
        })?;
    let short = name.rsplit('/').next().unwrap_or(name);
    let model = match fixture.source {
        Source::Text(text) => parse_iolts(text)?,
        Source::SelfLoops(text) => selfloop_complete(&parse_iolts(text)?)?,
    };
    Ok(model.with_name(short))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::demonic_complete;

    fn size(m: &Iolts) -> (usize, usize) {
        (m.num_states(), m.num_transitions())
    }

    #[test]
    fn every_fixture_loads_and_is_reachable() {
        for name in fixture_names() {
            let m = load_fixture(name).unwrap();
            let r = m.validate();
            assert!(r.unreachable_states.is_empty(), "{name}");
            assert!(r.strongly_convergent, "{name}");
            assert!(!note(name).unwrap().is_empty());
        }
    }

    #[test]
    fn pinned_sizes() {
        assert_eq!(size(&load_fixture("vending/S1").unwrap()), (7, 9));
        let a = load_fixture("altbit/A").unwrap();
        let b = load_fixture("altbit/B").unwrap();
        assert_eq!(size(&a), (6, 10));
        assert_eq!(size(&b), (6, 10));
        assert_eq!(size(&demonic_complete(&a)), (9, 31));
        assert_eq!(size(&demonic_complete(&b)), (9, 28));
        assert_eq!(size(&load_fixture("altbit/composite-drawn").unwrap()), (12, 24));
    }

    #[test]
    fn implementations_are_receptive() {
        for name in ["vending/I1", "vending/I2", "uioco-ce/I1", "hide-ce/I"] {
            assert!(load_fixture(name).unwrap().validate().receptive, "{name}");
        }
    }

    #[test]
    fn unknown_fixture_lists_catalog() {
        match load_fixture("nope") {
            Err(Error::UnknownFixture { available, .. }) => {
                assert!(available.contains("vending/S1"))
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn counter_example_shapes() {
        let s2 = load_fixture("uioco-ce/S2").unwrap();
        let edges: Vec<_> = s2
            .transitions()
            .map(|(q, a, p)| format!("{} {} {}", s2.state_name(q), a, s2.state_name(p)))
            .collect();
        assert_eq!(edges, ["A x B", "B x C"]);
    }
}
