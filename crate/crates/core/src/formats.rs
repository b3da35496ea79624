//! Reading and writing models.
//!
//! The native text format:
//!
//! ```text
//! iolts S1
//! inputs x
//! outputs
//! init 1
//! 1 x? 2        # `<src> <label>?|! <dst>` or `<src> tau <dst>`
//! ```
//!
//! Header lines come first and in this order. `#` starts a comment, blank
//! lines are ignored. Written documents list transitions sorted by source,
//! label and target name, so equal models always print the same bytes.
//!
//! An Aldebaran (`.aut`) adapter and a Graphviz exporter are also provided.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::error::{Error, ParseError, Result};
use crate::friendly::PruneReport;
use crate::lts::{Action, Alphabet, Iolts, IoltsBuilder, Label, Polarity, TAU};

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(k) => &line[..k],
        None => line,
    }
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse(ParseError::new(line, msg))
}

fn label_at(line: usize, name: &str) -> Result<Label> {
    Label::new(name).map_err(|e| perr(line, e.to_string()))
}

pub fn parse_iolts(text: &str) -> Result<Iolts> {
    parse_iolts_with_warnings(text).map(|(m, _)| m)
}

/// Parse a document, also returning warnings such as duplicate transitions.
pub fn parse_iolts_with_warnings(text: &str) -> Result<(Iolts, Vec<String>)> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, strip_comment(l).trim()))
        .filter(|(_, l)| !l.is_empty());

    let mut header = |keyword: &str| -> Result<(usize, Vec<&str>)> {
        let (no, line) = lines
            .next()
            .ok_or_else(|| perr(text.lines().count().max(1), format!("missing `{keyword}` line")))?;
        let mut words = line.split_whitespace();
        match words.next() {
            Some(w) if w == keyword => Ok((no, words.collect())),
            Some(w) => Err(perr(no, format!("expected `{keyword}`, found `{w}`"))),
            None => unreachable!("blank lines are filtered"),
        }
    };

    let (no, name) = header("iolts")?;
    let [name] = name[..] else {
        return Err(perr(no, "`iolts` takes exactly one name"));
    };
    let name = name.to_string();
    let (in_no, inputs) = header("inputs")?;
    let (out_no, outputs) = header("outputs")?;
    let inputs: Vec<Label> = inputs.iter().map(|l| label_at(in_no, l)).collect::<Result<_>>()?;
    let outputs: Vec<Label> = outputs.iter().map(|l| label_at(out_no, l)).collect::<Result<_>>()?;
    let alphabet = Alphabet::new(inputs, outputs).map_err(|e| perr(out_no, e.to_string()))?;
    let (no, init) = header("init")?;
    let [init] = init[..] else {
        return Err(perr(no, "`init` takes exactly one state"));
    };

    let mut b = IoltsBuilder::new(name, alphabet);
    b.init(init);
    for (no, line) in lines {
        let words: Vec<&str> = line.split_whitespace().collect();
        let [src, label, dst] = words[..] else {
            if words[0] == "init" {
                return Err(perr(no, "duplicate `init` line"));
            }
            return Err(perr(no, format!("expected `<src> <label> <dst>`, found `{line}`")));
        };
        let action = if label == TAU {
            Action::Tau
        } else {
            let (name, polarity) = if let Some(l) = label.strip_suffix('?') {
                (l, Polarity::Input)
            } else if let Some(l) = label.strip_suffix('!') {
                (l, Polarity::Output)
            } else {
                return Err(perr(no, format!("label `{label}` needs a `?` or `!` suffix")));
            };
            let l = label_at(no, name)?;
            match b.alphabet().polarity(&l) {
                Some(p) if p == polarity => Action::Visible(l),
                Some(p) => {
                    let declared = if p == Polarity::Input { "an input" } else { "an output" };
                    return Err(perr(
                        no,
                        format!("`{name}` is declared as {declared} but used as `{label}`"),
                    ));
                }
                None => return Err(perr(no, format!("label `{name}` is not declared"))),
            }
        };
        b.add(src, action, dst).map_err(|e| perr(no, e.to_string()))?;
    }
    b.build_with_warnings()
}

fn action_text(a: &Iolts, act: &Action) -> String {
    match act {
        Action::Visible(l) => {
            let p = a.alphabet().polarity(l).expect("labels belong to the alphabet");
            format!("{l}{}", p.suffix())
        }
        Action::Tau => TAU.to_string(),
        Action::Delta => "δ".to_string(),
    }
}

fn sorted_edges(a: &Iolts) -> Vec<(&str, String, &str)> {
    let mut edges: Vec<_> = a
        .transitions()
        .map(|(q, act, p)| (a.state_name(q), action_text(a, act), a.state_name(p)))
        .collect();
    edges.sort();
    edges
}

/// Canonical text form. States without any transition other than the
/// initial one cannot be written.
pub fn write_iolts(a: &Iolts) -> String {
    let join = |s: &BTreeSet<Label>| {
        s.iter().map(|l| format!(" {l}")).collect::<String>()
    };
    let mut out = String::new();
    let _ = writeln!(out, "iolts {}", a.name());
    let _ = writeln!(out, "inputs{}", join(a.alphabet().inputs()));
    let _ = writeln!(out, "outputs{}", join(a.alphabet().outputs()));
    let _ = writeln!(out, "init {}", a.state_name(a.init()));
    for (src, label, dst) in sorted_edges(a) {
        let _ = writeln!(out, "{src} {label} {dst}");
    }
    out
}

fn parse_sidecar(text: &str) -> Result<(Vec<Label>, Vec<Label>)> {
    let (mut inputs, mut outputs) = (Vec::new(), Vec::new());
    for (k, line) in text.lines().enumerate() {
        let line = strip_comment(line).trim();
        if line.is_empty() {
            continue;
        }
        let (target, rest) = if let Some(rest) = line.strip_prefix("inputs:") {
            (&mut inputs, rest)
        } else if let Some(rest) = line.strip_prefix("outputs:") {
            (&mut outputs, rest)
        } else {
            return Err(perr(k + 1, "expected `inputs:` or `outputs:`"));
        };
        for l in rest.split(|c: char| c.is_whitespace() || c == ',').filter(|s| !s.is_empty()) {
            target.push(label_at(k + 1, l)?);
        }
    }
    Ok((inputs, outputs))
}

/// Split an Aldebaran `(src, "label", dst)` line.
fn aut_fields(line: &str) -> Option<(&str, &str, &str)> {
    let inner = line.strip_prefix('(')?.strip_suffix(')')?;
    let (src, rest) = inner.split_once(',')?;
    let (label, dst) = rest.rsplit_once(',')?;
    let label = label.trim();
    let label = label
        .strip_prefix('"')
        .and_then(|l| l.strip_suffix('"'))
        .unwrap_or(label);
    Some((src.trim(), label, dst.trim()))
}

/// Read an Aldebaran file. Labels carry a `?`/`!` suffix or are resolved
/// through the sidecar manifest (`inputs: a b` / `outputs: c`). `i` and
/// `tau` denote the internal action. States keep their numbers as names.
pub fn parse_aut(text: &str, sidecar: Option<&str>) -> Result<Iolts> {
    let (mut inputs, mut outputs) = match sidecar {
        Some(s) => parse_sidecar(s)?,
        None => (Vec::new(), Vec::new()),
    };
    let declared: BTreeMap<Label, Polarity> = inputs
        .iter()
        .map(|l| (l.clone(), Polarity::Input))
        .chain(outputs.iter().map(|l| (l.clone(), Polarity::Output)))
        .collect();

    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (no, head) = lines.next().ok_or_else(|| perr(1, "missing `des` header"))?;
    let fields = head
        .strip_prefix("des")
        .map(str::trim)
        .and_then(|h| h.strip_prefix('('))
        .and_then(|h| h.strip_suffix(')'))
        .map(|h| h.split(',').map(str::trim).collect::<Vec<_>>())
        .ok_or_else(|| perr(no, "expected `des (<init>, <ntrans>, <nstates>)`"))?;
    let [init, ntrans, nstates] = fields[..] else {
        return Err(perr(no, "expected `des (<init>, <ntrans>, <nstates>)`"));
    };
    let count = |s: &str| s.parse::<usize>().map_err(|_| perr(no, format!("`{s}` is not a number")));
    let (ntrans, nstates) = (count(ntrans)?, count(nstates)?);

    let mut edges = Vec::new();
    for (no, line) in lines {
        let (src, label, dst) =
            aut_fields(line).ok_or_else(|| perr(no, format!("malformed transition `{line}`")))?;
        let action = if label == "i" || label == TAU {
            None
        } else {
            let (name, suffix) = match label.chars().last() {
                Some('?') => (&label[..label.len() - 1], Some(Polarity::Input)),
                Some('!') => (&label[..label.len() - 1], Some(Polarity::Output)),
                _ => (label, None),
            };
            let l = label_at(no, name)?;
            let polarity = match (suffix, declared.get(&l)) {
                (Some(s), Some(&d)) if s != d => {
                    return Err(perr(no, format!("`{label}` contradicts the manifest")))
                }
                (Some(s), _) => s,
                (None, Some(&d)) => d,
                (None, None) => {
                    return Err(perr(no, format!("cannot tell whether `{name}` is an input or an output")))
                }
            };
            Some((l, polarity))
        };
        edges.push((no, src.to_string(), action, dst.to_string()));
    }
    if edges.len() != ntrans {
        return Err(perr(no, format!("header announces {ntrans} transitions, found {}", edges.len())));
    }
    for (_, _, action, _) in &edges {
        if let Some((l, p)) = action {
            let target = if *p == Polarity::Input { &mut inputs } else { &mut outputs };
            if !target.contains(l) {
                target.push(l.clone());
            }
        }
    }
    let alphabet = Alphabet::new(inputs, outputs).map_err(|e| perr(no, e.to_string()))?;
    let mut b = IoltsBuilder::new("aut", alphabet);
    b.init(init);
    let mut states: BTreeSet<String> = BTreeSet::from([init.to_string()]);
    for (_, src, _, dst) in &edges {
        states.insert(src.clone());
        states.insert(dst.clone());
    }
    // Number states by their integer value so that ids follow the file.
    let mut order: Vec<&String> = states.iter().filter(|q| q.as_str() != init).collect();
    order.sort_by_key(|q| (q.parse::<u64>().unwrap_or(u64::MAX), q.as_str()));
    for q in order {
        b.state(q);
    }
    for (no, src, action, dst) in edges {
        let action = action.map_or(Action::Tau, |(l, _)| Action::Visible(l));
        b.add(&src, action, &dst).map_err(|e| perr(no, e.to_string()))?;
    }
    if states.len() > nstates {
        return Err(perr(no, format!("header announces {nstates} states, found {}", states.len())));
    }
    b.build()
}

/// Aldebaran text. States are renumbered in id order with the initial
/// state first; labels keep their `?`/`!` suffix, τ is written `i`.
pub fn write_aut(a: &Iolts) -> String {
    let mut order: Vec<usize> = vec![a.init()];
    order.extend(a.states().filter(|&q| q != a.init()));
    let mut number = vec![0; a.num_states()];
    for (k, &q) in order.iter().enumerate() {
        number[q] = k;
    }
    let mut edges: Vec<(usize, String, usize)> = a
        .transitions()
        .map(|(q, act, p)| {
            let label = match act {
                Action::Tau => "i".to_string(),
                _ => action_text(a, act),
            };
            (number[q], label, number[p])
        })
        .collect();
    edges.sort();
    let mut out = format!("des (0, {}, {})\n", edges.len(), a.num_states());
    for (q, l, p) in edges {
        let _ = writeln!(out, "({q}, \"{l}\", {p})");
    }
    out
}

fn dot_id(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

const PRUNED_STYLE: &str = "style=dashed, color=red, fontcolor=red";

/// Graphviz rendering. Inputs are labelled `l?`, outputs `l!`. With a
/// report, the states and transitions it lists as pruned are drawn dashed
/// and red. With `suspension`, quiescent states get a `δ` self-loop.
pub fn export_dot(a: &Iolts, highlight: Option<&PruneReport>, suspension: bool) -> String {
    let pruned_states = highlight.map(|r| &r.pruned_states);
    let pruned_edges = highlight.map(|r| &r.pruned_transitions);
    let mut out = String::new();
    let _ = writeln!(out, "digraph {} {{", dot_id(a.name()));
    out.push_str("  rankdir=LR;\n  node [shape=circle];\n");
    out.push_str("  __start [shape=point, label=\"\"];\n");
    let _ = writeln!(out, "  __start -> {};", dot_id(a.state_name(a.init())));

    let mut names: Vec<&str> = a.states().map(|q| a.state_name(q)).collect();
    names.sort();
    for name in names {
        let style = match pruned_states {
            Some(set) if set.contains(name) => format!(" [{PRUNED_STYLE}]"),
            _ => String::new(),
        };
        let _ = writeln!(out, "  {}{style};", dot_id(name));
    }

    let mut edges = sorted_edges(a);
    if suspension {
        for q in a.states().filter(|&q| a.is_quiescent(q)) {
            edges.push((a.state_name(q), "δ".to_string(), a.state_name(q)));
        }
        edges.sort();
    }
    for (src, label, dst) in edges {
        let pruned = pruned_edges.is_some_and(|set| {
            set.iter().any(|t| t.src == src && t.label == label && t.dst == dst)
        });
        let style = if pruned { format!(", {PRUNED_STYLE}") } else { String::new() };
        let _ = writeln!(
            out,
            "  {} -> {} [label={}{style}];",
            dot_id(src),
            dot_id(dst),
            dot_id(&label)
        );
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{fixture_names, load_fixture};
    use crate::randgen::{random_iolts, GenParams};
    use proptest::prelude::*;

    const S1CE: &str = "iolts S1\ninputs x\noutputs\ninit 1\n1 x? 2\n";

    fn edge_set(m: &Iolts) -> BTreeSet<(String, String, String)> {
        m.transitions()
            .map(|(q, a, p)| (m.state_name(q).into(), a.to_string(), m.state_name(p).into()))
            .collect()
    }

    fn isomorphic_by_name(a: &Iolts, b: &Iolts) -> bool {
        a.name() == b.name()
            && a.alphabet() == b.alphabet()
            && a.state_name(a.init()) == b.state_name(b.init())
            && edge_set(a) == edge_set(b)
    }

    #[test]
    fn parses_minimal_documents() {
        let m = parse_iolts(S1CE).unwrap();
        assert_eq!((m.num_states(), m.num_transitions()), (2, 1));
        let m = parse_iolts("iolts M\ninputs\noutputs\ninit q0\n").unwrap();
        assert_eq!((m.num_states(), m.num_transitions()), (1, 0));
    }

    #[test]
    fn comments_and_blank_lines() {
        let doc = "# leading\n\niolts S1 # name\ninputs x\noutputs\ninit 1\n\n1 x? 2 # edge\n";
        assert!(isomorphic_by_name(&parse_iolts(doc).unwrap(), &parse_iolts(S1CE).unwrap()));
    }

    fn error_line(doc: &str) -> usize {
        match parse_iolts(doc) {
            Err(Error::Parse(e)) => e.line,
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn errors_name_the_line() {
        assert_eq!(error_line("iolts S\ninputs x\noutputs\ninit 1\n1 x! 2\n"), 5);
        assert_eq!(error_line("iolts S\ninputs x\noutputs\ninit 1\n1 y? 2\n"), 5);
        assert_eq!(error_line("iolts S\ninputs x\noutputs\ninit 1\ninit 2\n"), 5);
        assert_eq!(error_line("iolts S\ninputs x\noutputs\ninit 1\n1 delta 1\n"), 5);
        assert_eq!(error_line("iolts S\ninputs x\noutputs x\ninit 1\n"), 3);
        assert_eq!(error_line("iolts S\noutputs\n"), 2);
        assert_eq!(error_line("iolts S\ninputs x\noutputs\ninit 1\n1 x?\n"), 5);
    }

    #[test]
    fn fixtures_round_trip() {
        for name in fixture_names() {
            let m = load_fixture(name).unwrap();
            let text = write_iolts(&m);
            let back = parse_iolts(&text).unwrap();
            assert!(isomorphic_by_name(&m, &back), "{name}");
            assert_eq!(write_iolts(&back), text, "{name}");
        }
    }

    #[test]
    fn composite_names_survive() {
        let c = crate::algebra::parallel_compose(
            &load_fixture("vending/S1").unwrap(),
            &load_fixture("vending/S2").unwrap(),
        )
        .unwrap();
        let text = write_iolts(&c);
        assert!(text.contains("(2,A) utee? (3,A)"));
        assert!(isomorphic_by_name(&c, &parse_iolts(&text).unwrap()));
    }

    #[test]
    fn aut_round_trip_and_sidecar() {
        for name in fixture_names() {
            let m = load_fixture(name).unwrap();
            let back = parse_aut(&write_aut(&m), None).unwrap();
            assert_eq!(back.num_states(), m.num_states(), "{name}");
            assert_eq!(back.num_transitions(), m.num_transitions(), "{name}");
            assert_eq!(write_aut(&back), write_aut(&m), "{name}");
        }
        let aut = "des (0, 3, 3)\n(0, \"coin\", 1)\n(1, i, 2)\n(2, \"tea\", 0)\n";
        let m = parse_aut(aut, Some("inputs: coin\noutputs: tea\n")).unwrap();
        assert!(m.alphabet().is_input(&Label::new("coin").unwrap()));
        assert!(m.has_tau());
        assert!(parse_aut(aut, None).is_err());
        assert!(parse_aut(aut, Some("inputs: coin, tea\n")).is_ok());
        assert!(parse_aut("des (0, 2, 2)\n(0, \"a?\", 1)\n", Some("inputs: a")).is_err());
        assert!(parse_aut("des (0, 1, 2)\n(0, \"a!\", 1)\n", Some("inputs: a")).is_err());
    }

    /// A small DOT lexer and recursive-descent checker covering the subset
    /// of the grammar the exporter emits.
    mod dot {
        #[derive(Debug, PartialEq)]
        pub enum Tok {
            Id(String),
            Sym(char),
            Arrow,
        }

        pub fn lex(s: &str) -> Result<Vec<Tok>, String> {
            let mut out = Vec::new();
            let mut it = s.chars().peekable();
            while let Some(c) = it.next() {
                match c {
                    c if c.is_whitespace() => {}
                    '{' | '}' | '[' | ']' | ';' | ',' | '=' => out.push(Tok::Sym(c)),
                    '-' if it.peek() == Some(&'>') => {
                        it.next();
                        out.push(Tok::Arrow);
                    }
                    '"' => {
                        let mut id = String::new();
                        loop {
                            match it.next() {
                                Some('\\') => id.push(it.next().ok_or("dangling escape")?),
                                Some('"') => break,
                                Some(c) => id.push(c),
                                None => return Err("unterminated string".into()),
                            }
                        }
                        out.push(Tok::Id(id));
                    }
                    c if c.is_alphanumeric() || c == '_' || c == '.' => {
                        let mut id = c.to_string();
                        while let Some(&n) = it.peek() {
                            if n.is_alphanumeric() || n == '_' || n == '.' {
                                id.push(n);
                                it.next();
                            } else {
                                break;
                            }
                        }
                        out.push(Tok::Id(id));
                    }
                    other => return Err(format!("unexpected `{other}`")),
                }
            }
            Ok(out)
        }

        fn id(t: &[Tok], k: &mut usize) -> Result<String, String> {
            match t.get(*k) {
                Some(Tok::Id(s)) => {
                    *k += 1;
                    Ok(s.clone())
                }
                other => Err(format!("expected identifier at {k}, found {other:?}")),
            }
        }

        fn sym(t: &[Tok], k: &mut usize, c: char) -> Result<(), String> {
            if t.get(*k) == Some(&Tok::Sym(c)) {
                *k += 1;
                Ok(())
            } else {
                Err(format!("expected `{c}` at {k}"))
            }
        }

        fn attrs(t: &[Tok], k: &mut usize) -> Result<Vec<(String, String)>, String> {
            let mut out = Vec::new();
            if t.get(*k) != Some(&Tok::Sym('[')) {
                return Ok(out);
            }
            *k += 1;
            while t.get(*k) != Some(&Tok::Sym(']')) {
                let key = id(t, k)?;
                sym(t, k, '=')?;
                out.push((key, id(t, k)?));
                if t.get(*k) == Some(&Tok::Sym(',')) {
                    *k += 1;
                }
            }
            *k += 1;
            Ok(out)
        }

        /// Parsed edges as (src, dst, attributes).
        pub type Edges = Vec<(String, String, Vec<(String, String)>)>;

        pub fn parse(s: &str) -> Result<(Vec<String>, Edges), String> {
            let t = lex(s)?;
            let mut k = 0;
            if id(&t, &mut k)? != "digraph" {
                return Err("not a digraph".into());
            }
            id(&t, &mut k)?;
            sym(&t, &mut k, '{')?;
            let (mut nodes, mut edges) = (Vec::new(), Vec::new());
            while t.get(k) != Some(&Tok::Sym('}')) {
                let a = id(&t, &mut k)?;
                if t.get(k) == Some(&Tok::Sym('=')) {
                    k += 1;
                    id(&t, &mut k)?;
                } else if t.get(k) == Some(&Tok::Arrow) {
                    k += 1;
                    let b = id(&t, &mut k)?;
                    edges.push((a, b, attrs(&t, &mut k)?));
                } else {
                    attrs(&t, &mut k)?;
                    nodes.push(a);
                }
                sym(&t, &mut k, ';')?;
            }
            k += 1;
            if k != t.len() {
                return Err("trailing tokens".into());
            }
            Ok((nodes, edges))
        }
    }

    #[test]
    fn dot_examples() {
        let m = parse_iolts(S1CE).unwrap();
        let (_, edges) = dot::parse(&export_dot(&m, None, false)).unwrap();
        assert!(edges.iter().any(|(_, _, at)| at.contains(&("label".into(), "x?".into()))));

        let lone = parse_iolts("iolts M\ninputs\noutputs\ninit q\n").unwrap();
        let (nodes, edges) = dot::parse(&export_dot(&lone, None, false)).unwrap();
        assert!(nodes.contains(&"q".to_string()));
        assert_eq!(edges.len(), 1, "only the start arrow");

        let s2 = load_fixture("uioco-ce/S2").unwrap();
        let (_, edges) = dot::parse(&export_dot(&s2, None, true)).unwrap();
        let deltas: Vec<_> = edges
            .iter()
            .filter(|(_, _, at)| at.contains(&("label".into(), "δ".into())))
            .collect();
        assert_eq!(deltas.len(), 1);
        assert_eq!(deltas[0].0, "C");
    }

    #[test]
    fn dot_highlights_pruned_branch() {
        let s1 = load_fixture("vending/S1").unwrap();
        let s2 = load_fixture("vending/S2").unwrap();
        let outcome = crate::friendly::friendly_compose(&s1, &s2).unwrap();
        let dot = export_dot(&outcome.plain, Some(&outcome.report), false);
        let (_, edges) = dot::parse(&dot).unwrap();
        let dashed: Vec<_> = edges
            .iter()
            .filter(|(_, _, at)| at.contains(&("style".into(), "dashed".into())))
            .map(|(a, b, _)| (a.as_str(), b.as_str()))
            .collect();
        assert_eq!(dashed, [("(2,A)", "(3,A)")]);
        assert!(dot.contains("\"(3,A)\" [style=dashed"));
    }

    #[test]
    fn dot_escapes_quotes() {
        let mut b = IoltsBuilder::new("we\"ird", Alphabet::default());
        b.init("a\\b");
        let text = export_dot(&b.build().unwrap(), None, false);
        let (nodes, _) = dot::parse(&text).unwrap();
        assert!(nodes.contains(&"a\\b".to_string()));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn random_models_round_trip(seed in any::<u64>(), n in 1usize..7, t in 0.0f64..0.5) {
            let m = random_iolts(&GenParams {
                seed,
                max_states: n,
                n_inputs: 3,
                n_outputs: 3,
                transition_density: 0.4,
                tau_probability: t,
                deterministic: false,
            })
            .unwrap();
            let text = write_iolts(&m);
            let back = parse_iolts(&text).unwrap();
            prop_assert!(isomorphic_by_name(&m, &back));
            prop_assert_eq!(write_iolts(&back), text);
            prop_assert!(dot::parse(&export_dot(&m, None, true)).is_ok());
        }
    }
}
