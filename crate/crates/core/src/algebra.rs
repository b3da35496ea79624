//! Parallel composition, hiding, demonic completion and self-loop input
//! completion.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::lts::{is_composable, Action, Alphabet, Iolts, IoltsBuilder, Label, StateId};

/// Canonical rendering of a product state.
pub fn composite_name(left: &str, right: &str) -> String {
    format!("({left},{right})")
}

/// Reachable part of `a ∥ b`, together with the component pair behind each
/// product state (indexed like the product's states).
pub(crate) fn compose_pairs(a: &Iolts, b: &Iolts) -> Result<(Iolts, Vec<(StateId, StateId)>)> {
    if !is_composable(a, b) {
        let shared_in: Vec<_> = a
            .alphabet()
            .inputs()
            .intersection(b.alphabet().inputs())
            .map(Label::to_string)
            .collect();
        let shared_out: Vec<_> = a
            .alphabet()
            .outputs()
            .intersection(b.alphabet().outputs())
            .map(Label::to_string)
            .collect();
        return Err(Error::NotComposable(format!(
            "`{}` and `{}` share inputs [{}] and outputs [{}]",
            a.name(),
            b.name(),
            shared_in.join(","),
            shared_out.join(",")
        )));
    }
    let (la, lb) = (a.alphabet(), b.alphabet());
    let inputs = la
        .inputs()
        .iter()
        .filter(|l| !lb.is_output(l))
        .chain(lb.inputs().iter().filter(|l| !la.is_output(l)))
        .cloned();
    let outputs = la.outputs().iter().chain(lb.outputs()).cloned();
    let alphabet = Alphabet::new(inputs, outputs)?;

    let mut builder = IoltsBuilder::new(format!("{}||{}", a.name(), b.name()), alphabet);
    let mut index: HashMap<(StateId, StateId), StateId> = HashMap::new();
    let mut pairs = Vec::new();
    let mut queue = VecDeque::new();

    let mut visit = |pair: (StateId, StateId),
                     builder: &mut IoltsBuilder,
                     queue: &mut VecDeque<(StateId, StateId)>|
     -> String {
        let name = composite_name(a.state_name(pair.0), b.state_name(pair.1));
        if let std::collections::hash_map::Entry::Vacant(e) = index.entry(pair) {
            let id = builder.state(&name);
            debug_assert_eq!(id, pairs.len());
            e.insert(id);
            pairs.push(pair);
            queue.push_back(pair);
        }
        name
    };

    let init = (a.init(), b.init());
    let init_name = visit(init, &mut builder, &mut queue);
    builder.init(&init_name);

    while let Some((qa, qb)) = queue.pop_front() {
        let src = composite_name(a.state_name(qa), b.state_name(qb));
        for (act, pa) in a.successors(qa) {
            let local = match act {
                Action::Visible(l) => !lb.contains(l),
                _ => true,
            };
            if local {
                let dst = visit((*pa, qb), &mut builder, &mut queue);
                builder.add(&src, act.clone(), &dst)?;
                continue;
            }
            let Action::Visible(l) = act else { unreachable!() };
            for (bact, pb) in b.successors(qb) {
                if bact.label() == Some(l) {
                    let dst = visit((*pa, *pb), &mut builder, &mut queue);
                    builder.add(&src, act.clone(), &dst)?;
                }
            }
        }
        for (act, pb) in b.successors(qb) {
            let local = match act {
                Action::Visible(l) => !la.contains(l),
                _ => true,
            };
            if local {
                let dst = visit((qa, *pb), &mut builder, &mut queue);
                builder.add(&src, act.clone(), &dst)?;
            }
        }
    }
    Ok((builder.build()?, pairs))
}

/// Parallel composition restricted to the part reachable from the pair of
/// initial states. Shared labels synchronize; everything else, τ included,
/// interleaves.
pub fn parallel_compose(a: &Iolts, b: &Iolts) -> Result<Iolts> {
    compose_pairs(a, b).map(|(m, _)| m)
}

/// Relabel every transition on a label in `sigma` as τ; `sigma` must consist
/// of outputs.
pub fn hide(a: &Iolts, sigma: &BTreeSet<Label>) -> Result<Iolts> {
    for l in sigma {
        if !a.alphabet().is_output(l) {
            return Err(Error::Alphabet(format!(
                "cannot hide `{l}`: not an output of `{}`",
                a.name()
            )));
        }
    }
    let alphabet = Alphabet::new(
        a.alphabet().inputs().iter().cloned(),
        a.alphabet().outputs().difference(sigma).cloned(),
    )?;
    let mut b = IoltsBuilder::new(a.name().to_string(), alphabet);
    for q in a.states() {
        b.state(a.state_name(q));
    }
    b.init(a.state_name(a.init()));
    for (q, act, p) in a.transitions() {
        let act = match act {
            Action::Visible(l) if sigma.contains(l) => Action::Tau,
            other => other.clone(),
        };
        b.add(a.state_name(q), act, a.state_name(p))?;
    }
    b.build()
}

fn fresh_name(a: &Iolts, base: &str) -> String {
    let mut name = base.to_string();
    while a.state_id(&name).is_some() {
        name.push('\'');
    }
    name
}

/// Demonic completion. Every unspecified (state, input) pair is routed to a
/// chaos gadget: `chi -τ-> chi_omega`, which takes every label back to
/// `chi`, and `chi -τ-> chi_delta`, which is quiescent and takes every input
/// back to `chi`. Models that already enable every input everywhere come
/// back unchanged.
pub fn demonic_complete(a: &Iolts) -> Iolts {
    let inputs = a.alphabet().inputs();
    let missing: Vec<(StateId, &Label)> = a
        .states()
        .flat_map(|q| inputs.iter().filter(move |i| !a.enables(q, i)).map(move |i| (q, i)))
        .collect();
    if missing.is_empty() {
        return a.clone();
    }
    let chi = fresh_name(a, "chi");
    let omega = fresh_name(a, "chi_omega");
    let quiet = fresh_name(a, "chi_delta");

    let mut b = IoltsBuilder::new(a.name().to_string(), a.alphabet().clone());
    for q in a.states() {
        b.state(a.state_name(q));
    }
    b.init(a.state_name(a.init()));
    let add = |b: &mut IoltsBuilder, s: &str, act: Action, d: &str| {
        b.add(s, act, d).expect("labels are taken from the alphabet");
    };
    for (q, act, p) in a.transitions() {
        add(&mut b, a.state_name(q), act.clone(), a.state_name(p));
    }
    for (q, i) in missing {
        add(&mut b, a.state_name(q), Action::Visible(i.clone()), &chi);
    }
    add(&mut b, &chi, Action::Tau, &omega);
    add(&mut b, &chi, Action::Tau, &quiet);
    for l in a.alphabet().labels() {
        add(&mut b, &omega, Action::Visible(l.clone()), &chi);
    }
    for i in inputs {
        add(&mut b, &quiet, Action::Visible(i.clone()), &chi);
    }
    b.build().expect("init is set")
}

/// Add an input self-loop wherever an input is not enabled in one step.
/// The result is receptive; it conforms to `a` only when `a` is
/// deterministic (see [`selfloop_complete`]).
pub fn add_input_selfloops(a: &Iolts) -> Iolts {
    let mut b = IoltsBuilder::new(a.name().to_string(), a.alphabet().clone());
    for q in a.states() {
        b.state(a.state_name(q));
    }
    b.init(a.state_name(a.init()));
    for (q, act, p) in a.transitions() {
        b.add(a.state_name(q), act.clone(), a.state_name(p))
            .expect("same alphabet");
    }
    for q in a.states() {
        for i in a.alphabet().inputs() {
            if !a.enables(q, i) {
                b.add(a.state_name(q), Action::Visible(i.clone()), a.state_name(q))
                    .expect("same alphabet");
            }
        }
    }
    b.build().expect("init is set")
}

/// Make a deterministic, τ-free specification receptive by letting it
/// silently ignore unexpected inputs. The result conforms to `s`.
pub fn selfloop_complete(s: &Iolts) -> Result<Iolts> {
    if !s.is_deterministic() {
        return Err(Error::Precondition(format!(
            "self-loop completion needs a deterministic, tau-free model; `{}` is not",
            s.name()
        )));
    }
    Ok(add_input_selfloops(s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conformance::ioco_check;
    use crate::fixtures::load_fixture;
    use crate::randgen::{random_composable_pair, random_iolts, GenParams};
    use crate::suspension::{determinize, DetMode};
    use proptest::prelude::*;

    fn labels(names: &[&str]) -> BTreeSet<Label> {
        names.iter().map(|n| Label::new(n).unwrap()).collect()
    }

    fn edges(m: &Iolts) -> BTreeSet<(String, String, String)> {
        m.transitions()
            .map(|(q, a, p)| {
                (
                    m.state_name(q).to_string(),
                    a.to_string(),
                    m.state_name(p).to_string(),
                )
            })
            .collect()
    }

    fn e(s: &str, a: &str, d: &str) -> (String, String, String) {
        (s.into(), a.into(), d.into())
    }

    #[test]
    fn compose_uioco_counterexample() {
        let s = parallel_compose(
            &load_fixture("uioco-ce/S1").unwrap(),
            &load_fixture("uioco-ce/S2").unwrap(),
        )
        .unwrap();
        assert_eq!(s.num_states(), 2);
        assert_eq!(edges(&s), BTreeSet::from([e("(1,A)", "x", "(2,B)")]));
        assert!(s.alphabet().inputs().is_empty());
        assert_eq!(s.alphabet().outputs(), &labels(&["x"]));

        let i = parallel_compose(
            &load_fixture("uioco-ce/I1").unwrap(),
            &load_fixture("uioco-ce/I2").unwrap(),
        )
        .unwrap();
        assert_eq!(i.num_states(), 3);
        assert_eq!(
            edges(&i),
            BTreeSet::from([e("(1,A)", "x", "(2,B)"), e("(2,B)", "x", "(2,C)")])
        );
    }

    #[test]
    fn compose_with_neutral_element() {
        let a = load_fixture("vending/S1").unwrap();
        let mut b = IoltsBuilder::new("unit", Alphabet::default());
        b.init("u");
        let c = parallel_compose(&a, &b.build().unwrap()).unwrap();
        assert_eq!(c.num_states(), a.num_states());
        assert_eq!(c.num_transitions(), a.num_transitions());
        assert_eq!(c.alphabet(), a.alphabet());
    }

    #[test]
    fn compose_rejects_non_composable() {
        let a = load_fixture("vending/S1").unwrap();
        assert!(matches!(
            parallel_compose(&a, &a),
            Err(Error::NotComposable(_))
        ));
    }

    #[test]
    fn compose_vending_alphabet() {
        let c = parallel_compose(
            &load_fixture("vending/S1").unwrap(),
            &load_fixture("vending/S2").unwrap(),
        )
        .unwrap();
        assert_eq!(
            c.alphabet().inputs(),
            &labels(&["coin", "ucoffee", "umilk", "utee"])
        );
        assert_eq!(
            c.alphabet().outputs(),
            &labels(&["coffee", "coffeemilk", "done", "mcoffee", "mcoffeemilk", "msg", "mtee"])
        );
        assert!(c.state_id("(3,A)").is_some());
        // (3,A) is a deadlock: mtee! finds no partner.
        assert!(c.successors(c.state_id("(3,A)").unwrap()).is_empty());
    }

    #[test]
    fn hide_examples() {
        let s = load_fixture("hide-ce/S").unwrap();
        let h = hide(&s, &labels(&["a"])).unwrap();
        assert_eq!(
            edges(&h),
            BTreeSet::from([e("1", "tau", "2"), e("2", "i", "3")])
        );
        assert_eq!(h.alphabet().outputs(), &labels(&["b"]));
        assert_eq!(h.num_states(), s.num_states());

        let same = hide(&s, &BTreeSet::new()).unwrap();
        assert_eq!(edges(&same), edges(&s));
        assert_eq!(same.alphabet(), s.alphabet());

        let i = load_fixture("hide-ce/I").unwrap();
        let hi = hide(&i, &labels(&["a"])).unwrap();
        assert!(edges(&hi).contains(&e("A", "tau", "B")));
        assert!(edges(&hi).contains(&e("D", "b", "E")));
        assert_eq!(hi.num_transitions(), i.num_transitions());
    }

    #[test]
    fn hide_rejects_inputs_and_foreign_labels() {
        let s = load_fixture("hide-ce/S").unwrap();
        assert!(matches!(hide(&s, &labels(&["i"])), Err(Error::Alphabet(_))));
        assert!(matches!(hide(&s, &labels(&["zz"])), Err(Error::Alphabet(_))));
    }

    #[test]
    fn demonic_completion_sizes() {
        let d = demonic_complete(&load_fixture("vending/S1").unwrap());
        assert_eq!((d.num_states(), d.num_transitions()), (10, 55));

        let d = demonic_complete(&load_fixture("uioco-ce/S1").unwrap());
        assert_eq!((d.num_states(), d.num_transitions()), (5, 6));

        let i1 = load_fixture("vending/I1").unwrap();
        let same = demonic_complete(&i1);
        assert_eq!(edges(&same), edges(&i1));
    }

    #[test]
    fn demonic_completion_chaos_gadget() {
        let d = demonic_complete(&load_fixture("vending/S1").unwrap());
        let r = d.validate();
        // chi only reaches the input edges of its successors through τ
        assert!(r.weakly_receptive);
        assert!(!r.receptive);
        let quiet = d.state_id("chi_delta").unwrap();
        let omega = d.state_id("chi_omega").unwrap();
        assert!(r.quiescent_states.contains(&quiet));
        assert!(!r.quiescent_states.contains(&omega));
    }

    #[test]
    fn selfloop_completion_examples() {
        let i1 = selfloop_complete(&load_fixture("uioco-ce/S1").unwrap()).unwrap();
        assert_eq!(edges(&i1), edges(&load_fixture("uioco-ce/I1").unwrap()));

        let i1 = load_fixture("vending/I1").unwrap();
        assert_eq!(edges(&selfloop_complete(&i1).unwrap()), edges(&i1));

        let s2 = load_fixture("vending/S2").unwrap();
        let c = selfloop_complete(&s2).unwrap();
        assert!(c.validate().receptive);
        assert!(edges(&c).contains(&e("A", "mtee", "A")));
        assert!(ioco_check(&c, &s2).unwrap().pass);

        let h = hide(&load_fixture("hide-ce/S").unwrap(), &labels(&["a"])).unwrap();
        assert!(matches!(selfloop_complete(&h), Err(Error::Precondition(_))));
    }

    fn gen(seed: u64, deterministic: bool) -> GenParams {
        GenParams {
            seed,
            max_states: 5,
            n_inputs: 2,
            n_outputs: 2,
            transition_density: 0.4,
            tau_probability: if deterministic { 0.0 } else { 0.3 },
            deterministic,
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn composition_is_commutative_up_to_renaming(seed in any::<u64>()) {
            let (a, b) = random_composable_pair(&gen(seed, false)).unwrap();
            let ab = parallel_compose(&a, &b).unwrap();
            let ba = parallel_compose(&b, &a).unwrap();
            prop_assert_eq!(ab.num_states(), ba.num_states());
            prop_assert_eq!(ab.num_transitions(), ba.num_transitions());
            prop_assert_eq!(ab.alphabet(), ba.alphabet());
            // (x,y) in a∥b corresponds to (y,x) in b∥a
            let (_, pab) = compose_pairs(&a, &b).unwrap();
            let (_, pba) = compose_pairs(&b, &a).unwrap();
            let sab: BTreeSet<_> = pab.iter().copied().collect();
            let sba: BTreeSet<_> = pba.iter().map(|&(y, x)| (x, y)).collect();
            prop_assert_eq!(sab, sba);
            prop_assert!(ab.num_states() <= a.num_states() * b.num_states());
            let ea = determinize(&ab, DetMode::ExistentialInput);
            let eb = determinize(&ba, DetMode::ExistentialInput);
            prop_assert!(ea.bounded_equivalent(&eb, 5));
        }

        #[test]
        fn hiding_composes(seed in any::<u64>(), split in any::<u8>()) {
            let m = random_iolts(&GenParams { n_outputs: 3, ..gen(seed, false) }).unwrap();
            let outs: Vec<Label> = m.alphabet().outputs().iter().cloned().collect();
            let s1: BTreeSet<Label> = outs.iter().enumerate()
                .filter(|(k, _)| split & (1 << k) != 0).map(|(_, l)| l.clone()).collect();
            let s2: BTreeSet<Label> = outs.iter().enumerate()
                .filter(|(k, _)| split & (1 << (k + 4)) != 0 && split & (1 << k) == 0)
                .map(|(_, l)| l.clone()).collect();
            let twice = hide(&hide(&m, &s1).unwrap(), &s2).unwrap();
            let once = hide(&m, &s1.union(&s2).cloned().collect()).unwrap();
            prop_assert_eq!(edges(&twice), edges(&once));
            prop_assert_eq!(twice.alphabet(), once.alphabet());
        }

        #[test]
        fn demonic_completion_is_weakly_receptive(seed in any::<u64>()) {
            let m = random_iolts(&gen(seed, false)).unwrap();
            let d = demonic_complete(&m);
            prop_assert!(d.validate().weakly_receptive);
            prop_assert!(d.num_states() <= m.num_states() + 3);
        }
    }

    #[test]
    fn selfloop_completion_conforms() {
        for seed in 0..500 {
            let s = random_iolts(&gen(seed, true)).unwrap();
            let i = selfloop_complete(&s).unwrap();
            assert!(i.validate().receptive, "seed {seed}");
            assert!(ioco_check(&i, &s).unwrap().pass, "seed {seed}");
        }
    }
}
