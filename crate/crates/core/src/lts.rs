//! The IOLTS data model: labels, alphabets, actions, transition systems and
//! the weak-transition machinery the rest of the crate is built on.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};

/// Index of a state inside one [`Iolts`]. Only meaningful together with the
/// model it came from; [`Iolts::state_name`] recovers the user-facing id.
pub type StateId = usize;

/// A set of states, ordered so that iteration (and therefore every derived
/// construction) is deterministic.
pub type StateSet = BTreeSet<StateId>;

pub const TAU: &str = "tau";
pub const DELTA: &str = "delta";

/// A visible action name.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label(Arc<str>);

impl Label {
    pub fn new(name: impl AsRef<str>) -> Result<Self> {
        let name = name.as_ref();
        let invalid = |reason| Error::InvalidLabel {
            label: name.to_string(),
            reason,
        };
        if name.is_empty() {
            return Err(invalid("empty"));
        }
        if name == TAU || name == DELTA {
            return Err(invalid("reserved token"));
        }
        if name.chars().any(|c| c.is_whitespace() || c.is_control()) {
            return Err(invalid("contains whitespace or control characters"));
        }
        if name.chars().any(|c| matches!(c, '?' | '!' | '#' | '"' | ',')) {
            return Err(invalid("contains one of ? ! # \" ,"));
        }
        Ok(Label(Arc::from(name)))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

impl Serialize for Label {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    Input,
    Output,
}

impl Polarity {
    pub fn suffix(self) -> char {
        match self {
            Polarity::Input => '?',
            Polarity::Output => '!',
        }
    }
}

/// Partitioned label set: `inputs` and `outputs` are disjoint.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Alphabet {
    inputs: BTreeSet<Label>,
    outputs: BTreeSet<Label>,
}

impl Alphabet {
    pub fn new(
        inputs: impl IntoIterator<Item = Label>,
        outputs: impl IntoIterator<Item = Label>,
    ) -> Result<Self> {
        let inputs: BTreeSet<Label> = inputs.into_iter().collect();
        let outputs: BTreeSet<Label> = outputs.into_iter().collect();
        if let Some(l) = inputs.intersection(&outputs).next() {
            return Err(Error::Alphabet(format!(
                "label `{l}` declared as both input and output"
            )));
        }
        Ok(Alphabet { inputs, outputs })
    }

    /// Convenience constructor from label names.
    pub fn from_names(inputs: &[&str], outputs: &[&str]) -> Result<Self> {
        let inputs = inputs.iter().map(Label::new).collect::<Result<Vec<_>>>()?;
        let outputs = outputs.iter().map(Label::new).collect::<Result<Vec<_>>>()?;
        Alphabet::new(inputs, outputs)
    }

    pub fn inputs(&self) -> &BTreeSet<Label> {
        &self.inputs
    }

    pub fn outputs(&self) -> &BTreeSet<Label> {
        &self.outputs
    }

    /// All labels, inputs first, each group in name order.
    pub fn labels(&self) -> impl Iterator<Item = &Label> {
        self.inputs.iter().chain(self.outputs.iter())
    }

    pub fn len(&self) -> usize {
        self.inputs.len() + self.outputs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn polarity(&self, label: &Label) -> Option<Polarity> {
        if self.inputs.contains(label) {
            Some(Polarity::Input)
        } else if self.outputs.contains(label) {
            Some(Polarity::Output)
        } else {
            None
        }
    }

    pub fn contains(&self, label: &Label) -> bool {
        self.polarity(label).is_some()
    }

    pub fn is_input(&self, label: &Label) -> bool {
        self.inputs.contains(label)
    }

    pub fn is_output(&self, label: &Label) -> bool {
        self.outputs.contains(label)
    }

    /// Inputs become outputs and vice versa.
    pub fn mirrored(&self) -> Alphabet {
        Alphabet {
            inputs: self.outputs.clone(),
            outputs: self.inputs.clone(),
        }
    }

    pub(crate) fn check_label(&self, label: &Label) -> Result<Polarity> {
        self.polarity(label)
            .ok_or_else(|| Error::Alphabet(format!("label `{label}` is not in the alphabet")))
    }
}

/// A transition label: a visible action, the internal action, or quiescence.
/// `Delta` only shows up in suspension-level artifacts (traces, out-sets).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Action {
    Visible(Label),
    Tau,
    Delta,
}

impl Action {
    pub fn label(&self) -> Option<&Label> {
        match self {
            Action::Visible(l) => Some(l),
            _ => None,
        }
    }

    pub fn is_tau(&self) -> bool {
        matches!(self, Action::Tau)
    }
}

impl From<Label> for Action {
    fn from(l: Label) -> Self {
        Action::Visible(l)
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Action::Visible(l) => write!(f, "{l}"),
            Action::Tau => f.write_str(TAU),
            Action::Delta => f.write_str(DELTA),
        }
    }
}

impl fmt::Debug for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Action {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Which arrow a condition is evaluated with: a single transition (`q -a->`)
/// or a weak one that may first take internal steps (`q =a=>`).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Enabledness {
    Strong,
    #[default]
    Weak,
}

impl std::str::FromStr for Enabledness {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "strong" => Ok(Enabledness::Strong),
            "weak" => Ok(Enabledness::Weak),
            other => Err(format!("expected `weak` or `strong`, got `{other}`")),
        }
    }
}

/// A finite input/output labelled transition system.
///
/// States carry opaque names that survive every operation; internally they
/// are dense indices. The transition relation is a set: duplicates are
/// collapsed on construction.
#[derive(Clone)]
pub struct Iolts {
    name: String,
    states: Vec<String>,
    index: HashMap<String, StateId>,
    alphabet: Alphabet,
    init: StateId,
    succ: Vec<Vec<(Action, StateId)>>,
    num_transitions: usize,
}

impl Iolts {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn init(&self) -> StateId {
        self.init
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_transitions(&self) -> usize {
        self.num_transitions
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> {
        0..self.states.len()
    }

    pub fn state_name(&self, q: StateId) -> &str {
        &self.states[q]
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.index.get(name).copied()
    }

    /// Resolve a list of state names, failing on the first unknown one.
    pub fn state_set(&self, names: &[&str]) -> Result<StateSet> {
        names
            .iter()
            .map(|n| {
                self.state_id(n)
                    .ok_or_else(|| Error::UnknownState(n.to_string()))
            })
            .collect()
    }

    pub fn state_names(&self, set: &StateSet) -> Vec<String> {
        set.iter().map(|&q| self.states[q].clone()).collect()
    }

    /// Outgoing transitions of `q`, sorted by action then target.
    pub fn successors(&self, q: StateId) -> &[(Action, StateId)] {
        &self.succ[q]
    }

    pub fn transitions(&self) -> impl Iterator<Item = (StateId, &Action, StateId)> + '_ {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(q, out)| out.iter().map(move |(a, p)| (q, a, *p)))
    }

    /// Single-step enabledness: `q -l->`.
    pub fn enables(&self, q: StateId, label: &Label) -> bool {
        self.succ[q]
            .iter()
            .any(|(a, _)| a.label() == Some(label))
    }

    /// Weak enabledness: `q =l=>`.
    pub fn weakly_enables(&self, q: StateId, label: &Label) -> bool {
        self.closure_of(std::iter::once(q))
            .iter()
            .any(|&p| self.enables(p, label))
    }

    pub fn enables_with(&self, q: StateId, label: &Label, mode: Enabledness) -> bool {
        match mode {
            Enabledness::Strong => self.enables(q, label),
            Enabledness::Weak => self.weakly_enables(q, label),
        }
    }

    /// No outgoing output or internal transition.
    pub fn is_quiescent(&self, q: StateId) -> bool {
        !self.succ[q].iter().any(|(a, _)| match a {
            Action::Tau => true,
            Action::Visible(l) => self.alphabet.is_output(l),
            Action::Delta => false,
        })
    }

    pub fn has_tau(&self) -> bool {
        self.transitions().any(|(_, a, _)| a.is_tau())
    }

    /// τ-free and at most one transition per (state, label).
    pub fn is_deterministic(&self) -> bool {
        self.succ.iter().all(|out| {
            out.iter().all(|(a, _)| !a.is_tau())
                && out.windows(2).all(|w| w[0].0 != w[1].0)
        })
    }

    fn check_states(&self, set: &StateSet) -> Result<()> {
        match set.iter().find(|&&q| q >= self.states.len()) {
            Some(q) => Err(Error::UnknownState(format!("#{q}"))),
            None => Ok(()),
        }
    }

    /// Smallest superset of `src` closed under τ transitions.
    pub fn tau_closure(&self, src: &StateSet) -> Result<StateSet> {
        self.check_states(src)?;
        Ok(self.closure_of(src.iter().copied()))
    }

    pub(crate) fn closure_of(&self, src: impl IntoIterator<Item = StateId>) -> StateSet {
        let mut seen = StateSet::new();
        let mut stack: Vec<StateId> = Vec::new();
        for q in src {
            if seen.insert(q) {
                stack.push(q);
            }
        }
        while let Some(q) = stack.pop() {
            for (a, p) in &self.succ[q] {
                if a.is_tau() && seen.insert(*p) {
                    stack.push(*p);
                }
            }
        }
        seen
    }

    /// τ-closure of the `label`-successors of the τ-closure of `src`.
    pub fn weak_step(&self, src: &StateSet, label: &Label) -> Result<StateSet> {
        self.check_states(src)?;
        self.alphabet.check_label(label)?;
        let closed = self.closure_of(src.iter().copied());
        Ok(self.image(&closed, label))
    }

    /// Label successors of an already τ-closed set, τ-closed again.
    pub(crate) fn image(&self, closed: &StateSet, label: &Label) -> StateSet {
        let targets = closed.iter().flat_map(|&q| {
            self.succ[q]
                .iter()
                .filter(move |(a, _)| a.label() == Some(label))
                .map(|(_, p)| *p)
        });
        self.closure_of(targets)
    }

    /// States reachable from the initial state over any transitions.
    pub fn reachable(&self) -> StateSet {
        let mut seen = StateSet::from([self.init]);
        let mut queue = VecDeque::from([self.init]);
        while let Some(q) = queue.pop_front() {
            for (_, p) in &self.succ[q] {
                if seen.insert(*p) {
                    queue.push_back(*p);
                }
            }
        }
        seen
    }

    /// Copy restricted to the states reachable from the initial state.
    pub fn restrict_reachable(&self) -> Iolts {
        let keep = self.reachable();
        if keep.len() == self.num_states() {
            return self.clone();
        }
        let mut b = IoltsBuilder::new(self.name.clone(), self.alphabet.clone());
        b.init(self.state_name(self.init));
        for (q, a, p) in self.transitions() {
            if keep.contains(&q) {
                b.add(self.state_name(q), a.clone(), self.state_name(p))
                    .expect("labels come from the same alphabet");
            }
        }
        b.build().expect("init is set")
    }

    fn strongly_convergent(&self) -> bool {
        // Kahn's algorithm on the τ-subgraph; leftovers lie on a τ-cycle.
        let n = self.num_states();
        let mut indeg = vec![0usize; n];
        for (_, a, p) in self.transitions() {
            if a.is_tau() {
                indeg[p] += 1;
            }
        }
        let mut queue: Vec<StateId> = (0..n).filter(|&q| indeg[q] == 0).collect();
        let mut removed = 0;
        while let Some(q) = queue.pop() {
            removed += 1;
            for (a, p) in &self.succ[q] {
                if a.is_tau() {
                    indeg[*p] -= 1;
                    if indeg[*p] == 0 {
                        queue.push(*p);
                    }
                }
            }
        }
        removed == n
    }

    pub fn validate(&self) -> ValidationReport {
        let inputs = self.alphabet.inputs();
        let receptive = self
            .states()
            .all(|q| inputs.iter().all(|i| self.enables(q, i)));
        let weakly_receptive = self
            .states()
            .all(|q| inputs.iter().all(|i| self.weakly_enables(q, i)));
        let reachable = self.reachable();
        ValidationReport {
            receptive,
            weakly_receptive,
            strongly_convergent: self.strongly_convergent(),
            deterministic: self.is_deterministic(),
            quiescent_states: self.states().filter(|&q| self.is_quiescent(q)).collect(),
            unreachable_states: self.states().filter(|q| !reachable.contains(q)).collect(),
        }
    }
}

impl fmt::Debug for Iolts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Iolts")
            .field("name", &self.name)
            .field("states", &self.states)
            .field("init", &self.states[self.init])
            .field("inputs", &self.alphabet.inputs)
            .field("outputs", &self.alphabet.outputs)
            .field(
                "transitions",
                &self
                    .transitions()
                    .map(|(q, a, p)| format!("{} -{}-> {}", self.states[q], a, self.states[p]))
                    .collect::<Vec<_>>(),
            )
            .finish()
    }
}

/// Structural facts about a model. Validation never fails; it reports.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    /// Every state has a single-step transition on every input.
    pub receptive: bool,
    /// Every state weakly enables every input.
    pub weakly_receptive: bool,
    pub strongly_convergent: bool,
    pub deterministic: bool,
    pub quiescent_states: StateSet,
    pub unreachable_states: StateSet,
}

/// Composable iff the input sets are disjoint and the output sets are disjoint.
pub fn is_composable(a: &Iolts, b: &Iolts) -> bool {
    a.alphabet.inputs.is_disjoint(&b.alphabet.inputs)
        && a.alphabet.outputs.is_disjoint(&b.alphabet.outputs)
}

/// Incremental constructor for [`Iolts`]. States are created on first
/// mention, in order; duplicate transitions are dropped and recorded as
/// warnings.
#[derive(Clone, Debug)]
pub struct IoltsBuilder {
    name: String,
    alphabet: Alphabet,
    states: Vec<String>,
    index: HashMap<String, StateId>,
    init: Option<StateId>,
    transitions: BTreeSet<(StateId, Action, StateId)>,
    warnings: Vec<String>,
}

impl IoltsBuilder {
    pub fn new(name: impl Into<String>, alphabet: Alphabet) -> Self {
        IoltsBuilder {
            name: name.into(),
            alphabet,
            states: Vec::new(),
            index: HashMap::new(),
            init: None,
            transitions: BTreeSet::new(),
            warnings: Vec::new(),
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn has_init(&self) -> bool {
        self.init.is_some()
    }

    pub fn has_state(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    /// Get or create the state called `name`.
    pub fn state(&mut self, name: &str) -> StateId {
        if let Some(&q) = self.index.get(name) {
            return q;
        }
        let q = self.states.len();
        self.states.push(name.to_string());
        self.index.insert(name.to_string(), q);
        q
    }

    pub fn init(&mut self, name: &str) -> &mut Self {
        let q = self.state(name);
        self.init = Some(q);
        self
    }

    pub fn add(&mut self, src: &str, action: Action, dst: &str) -> Result<&mut Self> {
        match &action {
            Action::Visible(l) => {
                self.alphabet.check_label(l)?;
            }
            Action::Tau => {}
            Action::Delta => {
                return Err(Error::Alphabet(
                    "delta cannot appear on an authored transition".into(),
                ))
            }
        }
        let s = self.state(src);
        let d = self.state(dst);
        if !self.transitions.insert((s, action.clone(), d)) {
            self.warnings
                .push(format!("duplicate transition {src} {action} {dst} ignored"));
        }
        Ok(self)
    }

    /// Add a transition by label name; `"tau"` is the internal action.
    pub fn edge(&mut self, src: &str, label: &str, dst: &str) -> Result<&mut Self> {
        let action = if label == TAU {
            Action::Tau
        } else {
            Action::Visible(Label::new(label)?)
        };
        self.add(src, action, dst)
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn build(self) -> Result<Iolts> {
        self.build_with_warnings().map(|(m, _)| m)
    }

    pub fn build_with_warnings(self) -> Result<(Iolts, Vec<String>)> {
        let init = self.init.ok_or_else(|| Error::MissingInit(self.name.clone()))?;
        let mut succ = vec![Vec::new(); self.states.len()];
        let num_transitions = self.transitions.len();
        // BTreeSet order is (src, action, dst): each bucket ends up sorted.
        for (q, a, p) in self.transitions {
            succ[q].push((a, p));
        }
        Ok((
            Iolts {
                name: self.name,
                states: self.states,
                index: self.index,
                alphabet: self.alphabet,
                init,
                succ,
                num_transitions,
            },
            self.warnings,
        ))
    }
}
