//! Friendly composition and friendly hiding.
//!
//! A composite state is ambiguous when one component emits a shared output
//! the other cannot take. The maximal deterministic friendly environment
//! ([`envdet`]) is a subset construction over the system's after-sets with
//! the alphabet mirrored: it accepts any output some member state can
//! produce and offers an input only when every member state accepts it.
//! Friendly composition drops every environment state from which an
//! ambiguous one can be reached by system outputs alone, then keeps only
//! the part of `A ∥ B` the remaining environment can drive. Friendly hiding
//! keeps the part of `hide(A, Σ)` its environment can drive.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::algebra::{compose_pairs, hide};
use crate::error::{Error, Result};
use crate::lts::{
    Action, Alphabet, Enabledness, Iolts, IoltsBuilder, Label, StateId, StateSet,
};
use crate::suspension::{determinize_with, InputQuantifier, STrace, SubsetRules};

/// Which enabledness reading each construction uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FriendlyConfig {
    /// Input condition of the environment construction. The weak reading
    /// also offers inputs a member only reaches through τ, which lets
    /// friendly hiding lose ioco preservation.
    pub envdet: Enabledness,
    /// Emitter and receiver checks of the ambiguity test.
    pub ambiguity: Enabledness,
}

impl Default for FriendlyConfig {
    fn default() -> Self {
        FriendlyConfig {
            envdet: Enabledness::Strong,
            ambiguity: Enabledness::Strong,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Emitter {
    #[serde(rename = "left-emits")]
    Left,
    #[serde(rename = "right-emits")]
    Right,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct AmbiguousPair {
    pub left: String,
    pub right: String,
    pub culprit: Label,
    pub direction: Emitter,
}

impl fmt::Display for AmbiguousPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = match self.direction {
            Emitter::Left => "left",
            Emitter::Right => "right",
        };
        write!(f, "({},{}) on {}! emitted by the {side} side", self.left, self.right, self.culprit)
    }
}

/// Composite states of `a ∥ b` (by id) that are ambiguous, with every
/// culprit found there.
fn ambiguity_in(
    a: &Iolts,
    b: &Iolts,
    pairs: &[(StateId, StateId)],
    mode: Enabledness,
) -> BTreeMap<StateId, Vec<AmbiguousPair>> {
    let mut out: BTreeMap<StateId, Vec<AmbiguousPair>> = BTreeMap::new();
    for (c, &(qa, qb)) in pairs.iter().enumerate() {
        let sides = [
            (a, qa, b, qb, Emitter::Left),
            (b, qb, a, qa, Emitter::Right),
        ];
        for (em, qe, rc, qr, direction) in sides {
            for l in em.alphabet().outputs() {
                if rc.alphabet().is_input(l)
                    && em.enables_with(qe, l, mode)
                    && !rc.enables_with(qr, l, mode)
                {
                    out.entry(c).or_default().push(AmbiguousPair {
                        left: a.state_name(qa).to_string(),
                        right: b.state_name(qb).to_string(),
                        culprit: l.clone(),
                        direction,
                    });
                }
            }
        }
    }
    out
}

/// Every ambiguous pair reachable in `a ∥ b`.
pub fn ambiguous_pairs(a: &Iolts, b: &Iolts) -> Result<BTreeSet<AmbiguousPair>> {
    ambiguous_pairs_with(a, b, FriendlyConfig::default())
}

pub fn ambiguous_pairs_with(
    a: &Iolts,
    b: &Iolts,
    cfg: FriendlyConfig,
) -> Result<BTreeSet<AmbiguousPair>> {
    let (_, pairs) = compose_pairs(a, b)?;
    Ok(ambiguity_in(a, b, &pairs, cfg.ambiguity)
        .into_values()
        .flatten()
        .collect())
}

/// A deterministic, τ-free environment over the mirrored alphabet of the
/// system it was built for. State 0 is initial; each state remembers the
/// set of system states it stands for.
#[derive(Clone, Debug)]
pub struct EnvAutomaton {
    alphabet: Alphabet,
    members: Vec<StateSet>,
    names: Vec<String>,
    transitions: Vec<BTreeMap<Label, usize>>,
}

fn set_name(a: &Iolts, set: &StateSet) -> String {
    format!("{{{}}}", a.state_names(set).join(","))
}

impl EnvAutomaton {
    /// The environment's own alphabet: its inputs are the system's outputs.
    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn init(&self) -> usize {
        0
    }

    pub fn num_states(&self) -> usize {
        self.members.len()
    }

    pub fn num_transitions(&self) -> usize {
        self.transitions.iter().map(BTreeMap::len).sum()
    }

    pub fn members(&self, d: usize) -> &StateSet {
        &self.members[d]
    }

    pub fn name(&self, d: usize) -> &str {
        &self.names[d]
    }

    pub fn find(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn transitions(&self, d: usize) -> &BTreeMap<Label, usize> {
        &self.transitions[d]
    }

    pub fn step(&self, d: usize, l: &Label) -> Option<usize> {
        self.transitions[d].get(l).copied()
    }

    /// The state reached by a sequence of visible actions, if any.
    pub fn run_labels(&self, actions: &[Action]) -> Option<usize> {
        actions
            .iter()
            .try_fold(self.init(), |d, act| self.step(d, act.label()?))
    }

    /// Label sequences of length at most `k` the environment can perform.
    pub fn traces_upto(&self, k: usize) -> BTreeSet<Vec<Label>> {
        let mut out = BTreeSet::new();
        let mut frontier = vec![(self.init(), Vec::new())];
        for depth in 0..=k {
            let mut next = Vec::new();
            for (d, trace) in frontier {
                if depth < k {
                    for (l, &t) in &self.transitions[d] {
                        let mut longer: Vec<Label> = trace.clone();
                        longer.push(l.clone());
                        next.push((t, longer));
                    }
                }
                out.insert(trace);
            }
            frontier = next;
        }
        out
    }

    /// Shortest label sequence reaching each state, least in label order
    /// among the shortest.
    pub fn access_traces(&self) -> Vec<Vec<Label>> {
        let mut traces: Vec<Option<Vec<Label>>> = vec![None; self.num_states()];
        traces[0] = Some(Vec::new());
        let mut queue = VecDeque::from([0]);
        while let Some(d) = queue.pop_front() {
            for (l, &t) in &self.transitions[d] {
                if traces[t].is_none() {
                    let mut tr = traces[d].clone().expect("visited");
                    tr.push(l.clone());
                    traces[t] = Some(tr);
                    queue.push_back(t);
                }
            }
        }
        traces.into_iter().map(|t| t.unwrap_or_default()).collect()
    }

    /// Keep only the states in `keep` that stay reachable from the initial
    /// state. `keep` must contain the initial state.
    fn restricted(&self, keep: &[bool]) -> EnvAutomaton {
        let mut renumber = vec![None; self.num_states()];
        let mut order = vec![0usize];
        renumber[0] = Some(0);
        let mut k = 0;
        while k < order.len() {
            let d = order[k];
            for &t in self.transitions[d].values() {
                if keep[t] && renumber[t].is_none() {
                    renumber[t] = Some(order.len());
                    order.push(t);
                }
            }
            k += 1;
        }
        EnvAutomaton {
            alphabet: self.alphabet.clone(),
            members: order.iter().map(|&d| self.members[d].clone()).collect(),
            names: order.iter().map(|&d| self.names[d].clone()).collect(),
            transitions: order
                .iter()
                .map(|&d| {
                    self.transitions[d]
                        .iter()
                        .filter_map(|(l, &t)| renumber[t].map(|n| (l.clone(), n)))
                        .collect()
                })
                .collect(),
        }
    }

    /// The environment as an ordinary model (with the mirrored alphabet).
    pub fn to_iolts(&self) -> Iolts {
        let mut b = IoltsBuilder::new("env", self.alphabet.clone());
        b.init(&self.names[0]);
        for d in 0..self.num_states() {
            b.state(&self.names[d]);
            for (l, &t) in &self.transitions[d] {
                b.add(&self.names[d], Action::Visible(l.clone()), &self.names[t])
                    .expect("labels come from the alphabet");
            }
        }
        b.build().expect("init is set")
    }
}

/// The maximal deterministic friendly environment of `a`.
pub fn envdet(a: &Iolts) -> EnvAutomaton {
    envdet_with(a, FriendlyConfig::default())
}

pub fn envdet_with(a: &Iolts, cfg: FriendlyConfig) -> EnvAutomaton {
    let view = determinize_with(
        a,
        SubsetRules {
            inputs: InputQuantifier::Forall(cfg.envdet),
            delta: false,
        },
    );
    let n = view.num_states();
    EnvAutomaton {
        alphabet: a.alphabet().mirrored(),
        members: (0..n).map(|d| view.state(d).clone()).collect(),
        names: (0..n).map(|d| set_name(a, view.state(d))).collect(),
        transitions: (0..n)
            .map(|d| {
                view.transitions(d)
                    .iter()
                    .map(|(act, &t)| (act.label().expect("no δ or τ").clone(), t))
                    .collect()
            })
            .collect(),
    }
}

/// A pair of (system state, environment state) in a fragment.
type FragmentPair = (StateId, usize);

fn fragment_pairs(a: &Iolts, e: &EnvAutomaton) -> (Vec<FragmentPair>, Vec<(usize, Action, usize)>) {
    let mut index: HashMap<FragmentPair, usize> = HashMap::new();
    let mut pairs = vec![(a.init(), e.init())];
    index.insert(pairs[0], 0);
    let mut edges = Vec::new();
    let mut k = 0;
    while k < pairs.len() {
        let (q, d) = pairs[k];
        for (act, p) in a.successors(q) {
            let target = match act {
                Action::Tau => (*p, d),
                Action::Visible(l) => match e.step(d, l) {
                    Some(d2) => (*p, d2),
                    None => continue,
                },
                Action::Delta => unreachable!("models carry no δ"),
            };
            let t = *index.entry(target).or_insert_with(|| {
                pairs.push(target);
                pairs.len() - 1
            });
            edges.push((k, act.clone(), t));
        }
        k += 1;
    }
    (pairs, edges)
}

/// The part of `a` that `e` drives: the reachable part of `a ∥ e`, with
/// `a`'s alphabet and polarity. States are named after the state of `a`
/// when each appears with a single environment state, and
/// `(q,{members})` otherwise.
pub fn e_reachable_fragment(a: &Iolts, e: &EnvAutomaton) -> Result<Iolts> {
    if e.alphabet() != &a.alphabet().mirrored() {
        return Err(Error::Alphabet(format!(
            "environment alphabet does not mirror the alphabet of `{}`",
            a.name()
        )));
    }
    Ok(build_fragment(a, e))
}

fn build_fragment(a: &Iolts, e: &EnvAutomaton) -> Iolts {
    let (pairs, edges) = fragment_pairs(a, e);
    let mut seen = BTreeSet::new();
    let unique = pairs.iter().all(|&(q, _)| seen.insert(q));
    let names: Vec<String> = pairs
        .iter()
        .map(|&(q, d)| {
            if unique {
                a.state_name(q).to_string()
            } else {
                format!("({},{})", a.state_name(q), e.name(d))
            }
        })
        .collect();
    let mut b = IoltsBuilder::new(a.name().to_string(), a.alphabet().clone());
    b.init(&names[0]);
    for name in &names {
        b.state(name);
    }
    for (s, act, t) in edges {
        b.add(&names[s], act, &names[t]).expect("labels come from the alphabet");
    }
    b.build().expect("init is set")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutcomeKind {
    Composition,
    Hiding,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub states: usize,
    pub transitions: usize,
}

/// An input of the plain model withheld by the environment: after `trace`
/// the plain model can take `label`, the fragment cannot.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct PrunedInput {
    pub trace: STrace,
    pub label: Label,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct NamedTransition {
    pub src: String,
    pub label: String,
    pub dst: String,
}

/// What the friendly operation removed relative to the plain one.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PruneReport {
    pub ambiguous_pairs: BTreeSet<AmbiguousPair>,
    /// A shortest trace of the plain composition into each ambiguous pair,
    /// in the order of `ambiguous_pairs`.
    pub ambiguous_witnesses: Vec<STrace>,
    /// Environment states removed by the backward output closure, as the
    /// names of the system states they stand for.
    pub removed_env_states: Vec<Vec<String>>,
    pub pruned_inputs: Vec<PrunedInput>,
    /// States of the plain model not covered by the fragment.
    pub pruned_states: BTreeSet<String>,
    /// Transitions of the plain model not covered by the fragment.
    pub pruned_transitions: BTreeSet<NamedTransition>,
    pub kept: Counts,
    pub pruned: Counts,
}

impl PruneReport {
    pub fn is_empty(&self) -> bool {
        self.ambiguous_pairs.is_empty()
            && self.removed_env_states.is_empty()
            && self.pruned_inputs.is_empty()
            && self.pruned_states.is_empty()
            && self.pruned_transitions.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct FriendlyOutcome {
    pub kind: OutcomeKind,
    pub compatible: bool,
    /// The plain composition or hiding the fragment is cut from.
    pub plain: Iolts,
    pub fragment: Option<Iolts>,
    pub environment: Option<EnvAutomaton>,
    pub report: PruneReport,
}

fn label_text(a: &Iolts, act: &Action) -> String {
    match act {
        Action::Visible(l) => {
            let p = a.alphabet().polarity(l).expect("labels come from the alphabet");
            format!("{l}{}", p.suffix())
        }
        other => other.to_string(),
    }
}

/// Shortest visible traces into every state of `a` (τ steps are free),
/// least in label order among the shortest. Unreachable states get `None`.
fn shortest_traces(a: &Iolts) -> Vec<Option<STrace>> {
    let mut best: Vec<Option<STrace>> = vec![None; a.num_states()];
    let mut layer: StateSet = a.closure_of([a.init()]);
    for &q in &layer {
        best[q] = Some(STrace::empty());
    }
    let mut trace = BTreeMap::from_iter(layer.iter().map(|&q| (q, STrace::empty())));
    while !layer.is_empty() {
        let mut next: BTreeMap<StateId, STrace> = BTreeMap::new();
        for &q in &layer {
            for (act, p) in a.successors(q) {
                let Action::Visible(_) = act else { continue };
                let t = trace[&q].extended(act.clone());
                for r in a.closure_of([*p]) {
                    if best[r].is_none() {
                        let slot = next.entry(r).or_insert_with(|| t.clone());
                        if t < *slot {
                            *slot = t.clone();
                        }
                    }
                }
            }
        }
        for (&r, t) in &next {
            best[r] = Some(t.clone());
        }
        layer = next.keys().copied().collect();
        trace = next;
    }
    best
}

/// Fill the diff between `plain` and the fragment driven by `env`.
fn diff_report(
    plain: &Iolts,
    env: Option<&EnvAutomaton>,
    fragment: Option<&Iolts>,
    report: &mut PruneReport,
) {
    let reach = plain.reachable();
    let (mut covered_states, mut covered_edges) = (BTreeSet::new(), BTreeSet::new());
    if let Some(env) = env {
        let (pairs, edges) = fragment_pairs(plain, env);
        covered_states.extend(pairs.iter().map(|&(q, _)| q));
        for (s, act, t) in edges {
            covered_edges.insert((pairs[s].0, act, pairs[t].0));
        }
        for (d, access) in env.access_traces().into_iter().enumerate() {
            let trace = STrace::new(access.into_iter().map(Action::Visible).collect())
                .expect("labels only");
            let withheld: BTreeSet<&Label> = env
                .members(d)
                .iter()
                .flat_map(|&q| plain.successors(q))
                .filter_map(|(act, _)| act.label())
                .filter(|l| plain.alphabet().is_input(l) && env.step(d, l).is_none())
                .collect();
            for l in withheld {
                report.pruned_inputs.push(PrunedInput {
                    trace: trace.clone(),
                    label: l.clone(),
                });
            }
        }
        report
            .pruned_inputs
            .sort_by(|x, y| (x.trace.len(), x).cmp(&(y.trace.len(), y)));
    }
    for &q in &reach {
        if !covered_states.contains(&q) {
            report.pruned_states.insert(plain.state_name(q).to_string());
        }
    }
    let mut reachable_edges = 0;
    for (q, act, p) in plain.transitions() {
        if !reach.contains(&q) {
            continue;
        }
        reachable_edges += 1;
        if !covered_edges.contains(&(q, act.clone(), p)) {
            report.pruned_transitions.insert(NamedTransition {
                src: plain.state_name(q).to_string(),
                label: label_text(plain, act),
                dst: plain.state_name(p).to_string(),
            });
        }
    }
    report.kept = fragment.map_or(Counts::default(), |f| Counts {
        states: f.num_states(),
        transitions: f.num_transitions(),
    });
    report.pruned = Counts {
        states: report.pruned_states.len(),
        transitions: report.pruned_transitions.len(),
    };
    debug_assert!(reachable_edges >= report.pruned.transitions);
}

pub fn friendly_compose(a: &Iolts, b: &Iolts) -> Result<FriendlyOutcome> {
    friendly_compose_with(a, b, FriendlyConfig::default())
}

/// Friendly composition `a ⊗ b`. Incompatible exactly when the initial
/// environment state is pruned.
pub fn friendly_compose_with(a: &Iolts, b: &Iolts, cfg: FriendlyConfig) -> Result<FriendlyOutcome> {
    let (plain, pairs) = compose_pairs(a, b)?;
    let ambiguous = ambiguity_in(a, b, &pairs, cfg.ambiguity);
    let env = envdet_with(&plain, cfg);

    let marked: Vec<bool> = (0..env.num_states())
        .map(|d| env.members(d).iter().any(|q| ambiguous.contains_key(q)))
        .collect();

    // Backward closure over transitions labelled with system outputs.
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); env.num_states()];
    for d in 0..env.num_states() {
        for (l, &t) in env.transitions(d) {
            if plain.alphabet().is_output(l) {
                preds[t].push(d);
            }
        }
    }
    let mut removed = marked.clone();
    let mut stack: Vec<usize> = (0..env.num_states()).filter(|&d| marked[d]).collect();
    while let Some(d) = stack.pop() {
        for &p in &preds[d] {
            if !removed[p] {
                removed[p] = true;
                stack.push(p);
            }
        }
    }

    let mut report = PruneReport::default();
    let witnesses = shortest_traces(&plain);
    report.ambiguous_pairs = ambiguous.values().flatten().cloned().collect();
    report.ambiguous_witnesses = report
        .ambiguous_pairs
        .iter()
        .map(|pair| {
            let q = pairs
                .iter()
                .position(|&(x, y)| a.state_name(x) == pair.left && b.state_name(y) == pair.right)
                .expect("ambiguous pairs come from the composition");
            witnesses[q].clone().expect("composition states are reachable")
        })
        .collect();
    let mut removed_sets: Vec<Vec<String>> = (0..env.num_states())
        .filter(|&d| removed[d])
        .map(|d| plain.state_names(env.members(d)))
        .collect();
    removed_sets.sort();
    report.removed_env_states = removed_sets;

    if removed[env.init()] {
        diff_report(&plain, None, None, &mut report);
        return Ok(FriendlyOutcome {
            kind: OutcomeKind::Composition,
            compatible: false,
            plain,
            fragment: None,
            environment: None,
            report,
        });
    }
    let keep: Vec<bool> = removed.iter().map(|r| !r).collect();
    let env = env.restricted(&keep);
    let fragment = build_fragment(&plain, &env).with_name(format!("{}(x){}", a.name(), b.name()));
    diff_report(&plain, Some(&env), Some(&fragment), &mut report);
    Ok(FriendlyOutcome {
        kind: OutcomeKind::Composition,
        compatible: true,
        plain,
        fragment: Some(fragment),
        environment: Some(env),
        report,
    })
}

pub fn friendly_hide(a: &Iolts, sigma: &BTreeSet<Label>) -> Result<FriendlyOutcome> {
    friendly_hide_with(a, sigma, FriendlyConfig::default())
}

/// Friendly hiding: the part of `hide(a, sigma)` driven by its maximal
/// deterministic friendly environment. Always compatible.
pub fn friendly_hide_with(
    a: &Iolts,
    sigma: &BTreeSet<Label>,
    cfg: FriendlyConfig,
) -> Result<FriendlyOutcome> {
    let plain = hide(a, sigma)?;
    let env = envdet_with(&plain, cfg);
    let fragment = build_fragment(&plain, &env);
    let mut report = PruneReport::default();
    diff_report(&plain, Some(&env), Some(&fragment), &mut report);
    Ok(FriendlyOutcome {
        kind: OutcomeKind::Hiding,
        compatible: true,
        plain,
        fragment: Some(fragment),
        environment: Some(env),
        report,
    })
}
