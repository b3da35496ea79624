//! Size tables and human/machine-readable explanations of friendly
//! outcomes.
//!
//! The scenario hints are advisory. They key on whether pruning came from
//! an ambiguous composite state or from states that hiding made
//! indistinguishable:
//!
//! * A: the context can be constrained so the pruned inputs never occur;
//! * B: keeping some hidden action observable removes the confusion;
//! * C: the component specifications need strengthening.

use std::fmt::{self, Write as _};

use serde::Serialize;

use crate::friendly::{AmbiguousPair, Emitter, FriendlyOutcome, OutcomeKind, PrunedInput};
use crate::lts::Iolts;
use crate::suspension::STrace;

pub const SCHEMA_VERSION: u32 = 1;

pub const NO_PRUNING: &str = "no pruning; unit testing suffices on covered traces";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SizeRow {
    pub model: String,
    pub transitions: usize,
    pub states: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct SizeTable {
    pub rows: Vec<SizeRow>,
}

/// One row per model, in the given order, counted on reachable parts.
pub fn size_table<'a>(models: impl IntoIterator<Item = (&'a str, &'a Iolts)>) -> SizeTable {
    SizeTable {
        rows: models
            .into_iter()
            .map(|(name, m)| {
                let r = m.restrict_reachable();
                SizeRow {
                    model: name.to_string(),
                    transitions: r.num_transitions(),
                    states: r.num_states(),
                }
            })
            .collect(),
    }
}

impl fmt::Display for SizeTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.rows.iter().map(|r| r.model.len()).max().unwrap_or(0).max(5);
        writeln!(f, "{:<width$}  {:>6}  {:>7}", "model", "#tran", "#states")?;
        for r in &self.rows {
            writeln!(f, "{:<width$}  {:>6}  {:>7}", r.model, r.transitions, r.states)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AmbiguousEntry {
    #[serde(flatten)]
    pub pair: AmbiguousPair,
    /// Shortest trace of the plain composition into the pair.
    pub trace: STrace,
}

/// Stable machine-readable report. Field order is fixed, so serializing
/// the same outcome always yields the same bytes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub kind: OutcomeKind,
    pub compatible: bool,
    pub ambiguous: Vec<AmbiguousEntry>,
    pub removed_env_states: Vec<Vec<String>>,
    pub pruned: Vec<PrunedInput>,
    pub pruned_states: Vec<String>,
    pub sizes: SizeTable,
    pub hints: Vec<String>,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

#[derive(Clone, Debug)]
pub struct Explanation {
    pub text: String,
    pub report: Report,
}

fn trace_text(t: &STrace) -> String {
    if t.is_empty() {
        "ε".to_string()
    } else {
        t.names().join("·")
    }
}

fn hints(outcome: &FriendlyOutcome) -> Vec<String> {
    let r = &outcome.report;
    if r.is_empty() {
        return vec![NO_PRUNING.to_string()];
    }
    let mut out = Vec::new();
    if !outcome.compatible {
        out.push(
            "Scenario C: no friendly environment exists; the components disagree \
             before any input is given, so the specifications need revision"
                .to_string(),
        );
        return out;
    }
    if !r.pruned_inputs.is_empty() {
        let list: Vec<String> = r
            .pruned_inputs
            .iter()
            .map(|p| format!("{}?", trace_text(&p.trace.extended(p.label.clone().into()))))
            .collect();
        out.push(format!(
            "Scenario A: if the context never issues {}, the friendly specification \
             covers the system and no integration testing is needed",
            list.join(", ")
        ));
    }
    match outcome.kind {
        OutcomeKind::Composition => {
            for pair in &r.ambiguous_pairs {
                let (emitter, receiver, side) = match pair.direction {
                    Emitter::Left => (&pair.left, &pair.right, "right"),
                    Emitter::Right => (&pair.right, &pair.left, "left"),
                };
                out.push(format!(
                    "Scenario C: the {side} component does not accept {}? in state {receiver} \
                     while its partner emits it in state {emitter}; strengthen one of the \
                     specifications or integration-test this interaction",
                    pair.culprit
                ));
            }
        }
        OutcomeKind::Hiding => {
            if let Some(env) = &outcome.environment {
                for p in &r.pruned_inputs {
                    let Some(d) = env.run_labels(p.trace.actions()) else { continue };
                    let members = outcome.plain.state_names(env.members(d));
                    out.push(format!(
                        "Scenario B: after {} the states {{{}}} cannot be told apart, and only \
                         some accept {}?; keeping a hidden action observable there avoids the pruning",
                        trace_text(&p.trace),
                        members.join(","),
                        p.label
                    ));
                }
            }
            out.push(
                "Scenario C: alternatively, revise the specification so that the pruned \
                 inputs are handled the same way in every state they may reach"
                    .to_string(),
            );
        }
    }
    out
}

pub fn explain(outcome: &FriendlyOutcome) -> Explanation {
    let r = &outcome.report;
    let ambiguous: Vec<AmbiguousEntry> = r
        .ambiguous_pairs
        .iter()
        .zip(&r.ambiguous_witnesses)
        .map(|(pair, trace)| AmbiguousEntry {
            pair: pair.clone(),
            trace: trace.clone(),
        })
        .collect();
    let (plain_name, fragment_name) = match outcome.kind {
        OutcomeKind::Composition => (
            outcome.plain.name().to_string(),
            outcome.fragment.as_ref().map(|f| f.name().to_string()),
        ),
        OutcomeKind::Hiding => (
            format!("hide({})", outcome.plain.name()),
            outcome.fragment.as_ref().map(|f| format!("fhide({})", f.name())),
        ),
    };
    let mut models: Vec<(String, &Iolts)> = vec![(plain_name, &outcome.plain)];
    if let (Some(f), Some(name)) = (&outcome.fragment, fragment_name) {
        models.push((name, f));
    }
    let sizes = size_table(models.iter().map(|(n, m)| (n.as_str(), *m)));
    let report = Report {
        schema_version: SCHEMA_VERSION,
        kind: outcome.kind,
        compatible: outcome.compatible,
        ambiguous,
        removed_env_states: r.removed_env_states.clone(),
        pruned: r.pruned_inputs.clone(),
        pruned_states: r.pruned_states.iter().cloned().collect(),
        sizes,
        hints: hints(outcome),
    };

    let mut text = String::new();
    let what = match outcome.kind {
        OutcomeKind::Composition => "friendly composition",
        OutcomeKind::Hiding => "friendly hiding",
    };
    let verdict = if outcome.compatible { "compatible" } else { "not compatible" };
    let _ = writeln!(text, "{what}: {verdict}");
    if !report.ambiguous.is_empty() {
        let _ = writeln!(text, "ambiguous states:");
        for e in &report.ambiguous {
            let _ = writeln!(text, "  {} after {}", e.pair, trace_text(&e.trace));
        }
    }
    if !report.pruned.is_empty() {
        let _ = writeln!(text, "pruned inputs:");
        for p in &report.pruned {
            let _ = writeln!(text, "  {}? after {}", p.label, trace_text(&p.trace));
        }
    }
    if !report.pruned_states.is_empty() {
        let _ = writeln!(text, "pruned states: {}", report.pruned_states.join(" "));
    }
    let _ = write!(text, "{}", report.sizes);
    let _ = writeln!(text, "hints:");
    for h in &report.hints {
        let _ = writeln!(text, "  - {h}");
    }
    Explanation { text, report }
}
