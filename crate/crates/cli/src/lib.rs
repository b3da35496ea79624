//! The `iolts` command-line tool.
//!
//! Every subcommand reads models from files (or `-` for stdin), runs one
//! library operation chain and writes canonical text. Exit status is 0 on
//! success, 1 when a conformance check fails or components are not
//! compatible, and 2 on usage or input errors.

use std::collections::BTreeSet;
use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use clap::{Parser, Subcommand, ValueEnum};

use iolts::diagnostics::{explain, size_table};
use iolts::fixtures::load_fixture;
use iolts::formats::{export_dot, parse_aut, parse_iolts, write_aut, write_iolts};
use iolts::friendly::{friendly_compose_with, friendly_hide_with};
use iolts::randgen::{random_iolts, GenParams};
use iolts::{
    check, demonic_complete, hide, parallel_compose, selfloop_complete, straces_upto,
    utraces_upto, Enabledness, FriendlyConfig, FriendlyOutcome, Iolts, Label, Relation,
};

#[derive(Parser, Debug)]
#[command(name = "iolts", version, about = "ioco testing algebra for input/output transition systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Debug)]
struct Input {
    /// Label manifest for `.aut` inputs (`inputs: a b` / `outputs: c`).
    #[arg(long, value_name = "FILE", global = true)]
    labels: Option<String>,
}

#[derive(clap::Args, Debug)]
struct Semantics {
    /// Input condition of the friendly environment.
    #[arg(long, value_name = "weak|strong", default_value = "strong")]
    enabledness: Enabledness,
    /// Enabledness used by the ambiguity test.
    #[arg(long, value_name = "weak|strong", default_value = "strong")]
    ambiguity: Enabledness,
}

impl Semantics {
    fn config(&self) -> FriendlyConfig {
        FriendlyConfig {
            envdet: self.enabledness,
            ambiguity: self.ambiguity,
        }
    }
}

#[derive(clap::Args, Debug)]
struct Outputs {
    /// Write the resulting model here (`.aut` selects Aldebaran).
    #[arg(short = 'o', value_name = "FILE")]
    output: Option<String>,
    /// Write the JSON report here.
    #[arg(long, value_name = "FILE")]
    report: Option<String>,
    /// Write a Graphviz rendering of the plain model with pruned parts marked.
    #[arg(long, value_name = "FILE")]
    dot: Option<String>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Completion {
    Demonic,
    Selfloop,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Demo {
    Vending,
    Altbit,
    UiocoCe,
    HideCe,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum TraceKind {
    Straces,
    Utraces,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parallel composition of two models.
    Compose {
        left: String,
        right: String,
        #[arg(short = 'o', value_name = "FILE")]
        output: Option<String>,
        #[command(flatten)]
        input: Input,
    },
    /// Turn the listed outputs into internal steps.
    Hide {
        model: String,
        #[arg(long, value_name = "l1,l2", value_delimiter = ',', required = true)]
        hide: Vec<String>,
        #[arg(short = 'o', value_name = "FILE")]
        output: Option<String>,
        #[command(flatten)]
        input: Input,
    },
    /// Friendly composition with an ambiguity and pruning report.
    Fcompose {
        left: String,
        right: String,
        #[command(flatten)]
        out: Outputs,
        #[command(flatten)]
        semantics: Semantics,
        #[command(flatten)]
        input: Input,
    },
    /// Friendly hiding with a pruning report.
    Fhide {
        model: String,
        #[arg(long, value_name = "l1,l2", value_delimiter = ',', required = true)]
        hide: Vec<String>,
        #[command(flatten)]
        out: Outputs,
        #[command(flatten)]
        semantics: Semantics,
        #[command(flatten)]
        input: Input,
    },
    /// Make a model input-enabled.
    Complete {
        model: String,
        #[arg(long, value_enum, default_value = "demonic")]
        mode: Completion,
        #[arg(short = 'o', value_name = "FILE")]
        output: Option<String>,
        #[command(flatten)]
        input: Input,
    },
    /// Decide ioco or uioco between an implementation and a specification.
    Check {
        relation: Relation,
        implementation: String,
        specification: String,
        /// Write the verdict as JSON here.
        #[arg(long, value_name = "FILE")]
        report: Option<String>,
        #[command(flatten)]
        input: Input,
    },
    /// Report structural properties of a model.
    Validate {
        model: String,
        #[command(flatten)]
        input: Input,
    },
    /// State and transition counts, optionally with demonic completions.
    Stats {
        #[arg(required = true)]
        models: Vec<String>,
        /// Add a row for the demonic completion of each model.
        #[arg(long)]
        completions: bool,
        #[command(flatten)]
        input: Input,
    },
    /// Graphviz rendering.
    Dot {
        model: String,
        /// Draw δ loops on quiescent states.
        #[arg(long)]
        suspension: bool,
        #[arg(short = 'o', value_name = "FILE")]
        output: Option<String>,
        #[command(flatten)]
        input: Input,
    },
    /// Suspension traces up to a bound.
    Traces {
        model: String,
        #[arg(long, default_value_t = 4)]
        bound: usize,
        #[arg(long, value_enum, default_value = "straces")]
        kind: TraceKind,
        #[command(flatten)]
        input: Input,
    },
    /// Walk through one of the built-in examples.
    Demo {
        #[arg(value_enum)]
        name: Demo,
    },
    /// Print a seeded random model.
    Gen {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 6)]
        states: usize,
        #[arg(long, default_value_t = 2)]
        inputs: usize,
        #[arg(long, default_value_t = 2)]
        outputs: usize,
        #[arg(long, default_value_t = 0.4)]
        density: f64,
        #[arg(long, default_value_t = 0.2)]
        tau: f64,
        #[arg(long)]
        deterministic: bool,
        #[arg(short = 'o', value_name = "FILE")]
        output: Option<String>,
    },
}

/// A reason to stop with a non-zero status.
struct Failure {
    code: i32,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

impl From<iolts::Error> for Failure {
    fn from(e: iolts::Error) -> Self {
        usage(e.to_string())
    }
}

struct Io<'a> {
    stdin: &'a mut dyn Read,
    stdout: &'a mut dyn Write,
    stderr: &'a mut dyn Write,
    stdin_used: bool,
}

impl Io<'_> {
    fn read_text(&mut self, path: &str) -> Result<String, Failure> {
        if path == "-" {
            if self.stdin_used {
                return Err(usage("stdin can only be read once"));
            }
            self.stdin_used = true;
            let mut s = String::new();
            self.stdin
                .read_to_string(&mut s)
                .map_err(|e| usage(format!("<stdin>: {e}")))?;
            Ok(s)
        } else {
            fs::read_to_string(path).map_err(|e| usage(format!("{path}: {e}")))
        }
    }

    fn load(&mut self, path: &str, input: &Input) -> Result<Iolts, Failure> {
        let text = self.read_text(path)?;
        let shown = if path == "-" { "<stdin>" } else { path };
        let model = if text.trim_start().starts_with("des") {
            let sidecar = match &input.labels {
                Some(p) => Some(fs::read_to_string(p).map_err(|e| usage(format!("{p}: {e}")))?),
                None => None,
            };
            parse_aut(&text, sidecar.as_deref())
        } else {
            parse_iolts(&text)
        };
        model.map_err(|e| usage(format!("{shown}: {e}")))
    }

    /// Write to `path`, or to stdout when it is absent or `-`.
    fn emit(&mut self, path: Option<&str>, text: &str) -> Result<(), Failure> {
        match path {
            None | Some("-") => self
                .stdout
                .write_all(text.as_bytes())
                .map_err(|e| usage(format!("<stdout>: {e}"))),
            Some(p) => fs::write(p, text).map_err(|e| usage(format!("{p}: {e}"))),
        }
    }

    fn emit_model(&mut self, path: Option<&str>, m: &Iolts) -> Result<(), Failure> {
        let text = match path {
            Some(p) if Path::new(p).extension().is_some_and(|e| e == "aut") => write_aut(m),
            _ => write_iolts(m),
        };
        self.emit(path, &text)
    }

    fn say(&mut self, text: &str) -> Result<(), Failure> {
        self.emit(None, text)
    }
}

fn label_set(names: &[String]) -> Result<BTreeSet<Label>, Failure> {
    names
        .iter()
        .filter(|n| !n.is_empty())
        .map(|n| Label::new(n.trim().trim_end_matches('!')).map_err(Failure::from))
        .collect()
}

/// Report a friendly outcome. The explanation goes to stdout unless the
/// fragment itself does, in which case it moves to stderr.
fn friendly_output(io: &mut Io<'_>, outcome: &FriendlyOutcome, out: &Outputs) -> Result<i32, Failure> {
    let e = explain(outcome);
    let model_on_stdout = matches!(out.output.as_deref(), Some("-"));
    if let Some(f) = &outcome.fragment {
        if let Some(p) = out.output.as_deref() {
            io.emit_model(Some(p), f)?;
        }
    }
    if let Some(p) = out.report.as_deref() {
        io.emit(Some(p), &e.report.to_json())?;
    }
    if let Some(p) = out.dot.as_deref() {
        io.emit(Some(p), &export_dot(&outcome.plain, Some(&outcome.report), false))?;
    }
    if model_on_stdout {
        let _ = io.stderr.write_all(e.text.as_bytes());
    } else {
        io.say(&e.text)?;
    }
    Ok(if outcome.compatible { 0 } else { 1 })
}

fn dispatch(cli: Cli, io: &mut Io<'_>) -> Result<i32, Failure> {
    match cli.command {
        Command::Compose { left, right, output, input } => {
            let (a, b) = (io.load(&left, &input)?, io.load(&right, &input)?);
            io.emit_model(output.as_deref(), &parallel_compose(&a, &b)?)?;
            Ok(0)
        }
        Command::Hide { model, hide: names, output, input } => {
            let m = io.load(&model, &input)?;
            io.emit_model(output.as_deref(), &hide(&m, &label_set(&names)?)?)?;
            Ok(0)
        }
        Command::Fcompose { left, right, out, semantics, input } => {
            let (a, b) = (io.load(&left, &input)?, io.load(&right, &input)?);
            let outcome = friendly_compose_with(&a, &b, semantics.config())?;
            friendly_output(io, &outcome, &out)
        }
        Command::Fhide { model, hide: names, out, semantics, input } => {
            let m = io.load(&model, &input)?;
            let outcome = friendly_hide_with(&m, &label_set(&names)?, semantics.config())?;
            friendly_output(io, &outcome, &out)
        }
        Command::Complete { model, mode, output, input } => {
            let m = io.load(&model, &input)?;
            let done = match mode {
                Completion::Demonic => demonic_complete(&m),
                Completion::Selfloop => selfloop_complete(&m)?,
            };
            io.emit_model(output.as_deref(), &done)?;
            Ok(0)
        }
        Command::Check { relation, implementation, specification, report, input } => {
            let i = io.load(&implementation, &input)?;
            let s = io.load(&specification, &input)?;
            let v = check(&i, &s, relation)?;
            if let Some(p) = report.as_deref() {
                let mut json = serde_json::to_string_pretty(&v).expect("verdict serializes");
                json.push('\n');
                io.emit(Some(p), &json)?;
            }
            io.say(&v.to_string())?;
            Ok(if v.pass { 0 } else { 1 })
        }
        Command::Validate { model, input } => {
            let m = io.load(&model, &input)?;
            io.say(&validation_text(&m))?;
            Ok(0)
        }
        Command::Stats { models, completions, input } => {
            let mut loaded = Vec::new();
            for path in &models {
                let m = io.load(path, &input)?;
                if completions {
                    let d = demonic_complete(&m);
                    loaded.push((m.name().to_string(), m));
                    loaded.push((format!("d({})", loaded.last().unwrap().0), d));
                } else {
                    loaded.push((m.name().to_string(), m));
                }
            }
            let table = size_table(loaded.iter().map(|(n, m)| (n.as_str(), m)));
            io.say(&table.to_string())?;
            Ok(0)
        }
        Command::Dot { model, suspension, output, input } => {
            let m = io.load(&model, &input)?;
            io.emit(output.as_deref(), &export_dot(&m, None, suspension))?;
            Ok(0)
        }
        Command::Traces { model, bound, kind, input } => {
            let m = io.load(&model, &input)?;
            let traces = match kind {
                TraceKind::Straces => straces_upto(&m, bound),
                TraceKind::Utraces => utraces_upto(&m, bound),
            };
            let mut text = String::new();
            for t in traces {
                text.push_str(&t.to_string());
                text.push('\n');
            }
            io.say(&text)?;
            Ok(0)
        }
        Command::Demo { name } => {
            let text = demo(name)?;
            io.say(&text)?;
            Ok(0)
        }
        Command::Gen { seed, states, inputs, outputs, density, tau, deterministic, output } => {
            let p = GenParams {
                seed,
                max_states: states,
                n_inputs: inputs,
                n_outputs: outputs,
                transition_density: density,
                tau_probability: tau,
                deterministic,
            };
            io.emit_model(output.as_deref(), &random_iolts(&p)?)?;
            Ok(0)
        }
    }
}

fn validation_text(m: &Iolts) -> String {
    let r = m.validate();
    let yes = |b: bool| if b { "yes" } else { "no" };
    let names = |s| m.state_names(s).join(" ");
    let mut out = format!(
        "model: {}\nstates: {}\ntransitions: {}\n",
        m.name(),
        m.num_states(),
        m.num_transitions()
    );
    out += &format!("receptive: {}\n", yes(r.receptive));
    out += &format!("weakly receptive: {}\n", yes(r.weakly_receptive));
    out += &format!("strongly convergent: {}\n", yes(r.strongly_convergent));
    out += &format!("deterministic: {}\n", yes(r.deterministic));
    out += &format!("quiescent: {}\n", names(&r.quiescent_states));
    out += &format!("unreachable: {}\n", names(&r.unreachable_states));
    out
}

fn fixture(name: &str) -> Result<Iolts, Failure> {
    Ok(load_fixture(name)?)
}

fn verdict_line(title: &str, i: &Iolts, s: &Iolts, relation: Relation) -> Result<String, Failure> {
    let v = check(i, s, relation)?;
    let mut out = format!("{title}\n");
    for line in v.to_string().lines() {
        out += &format!("  {line}\n");
    }
    Ok(out)
}

fn vending_sigma() -> BTreeSet<Label> {
    ["mtee", "mcoffee", "mcoffeemilk", "done"]
        .iter()
        .map(|l| Label::new(l).expect("valid label"))
        .collect()
}

fn demo(name: Demo) -> Result<String, Failure> {
    let mut out = String::new();
    let cfg = FriendlyConfig::default();
    match name {
        Demo::Vending => {
            let (s1, s2) = (fixture("vending/S1")?, fixture("vending/S2")?);
            let (i1, i2) = (fixture("vending/I1")?, fixture("vending/I2")?);
            let sigma = vending_sigma();
            out += &verdict_line("I1 ioco S1", &i1, &s1, Relation::Ioco)?;
            out += &verdict_line("I2 ioco S2", &i2, &s2, Relation::Ioco)?;
            let (ip, sp) = (parallel_compose(&i1, &i2)?, parallel_compose(&s1, &s2)?);
            out += &verdict_line("I1||I2 ioco S1||S2", &ip, &sp, Relation::Ioco)?;
            let (ih, sh) = (hide(&ip, &sigma)?, hide(&sp, &sigma)?);
            out += &verdict_line("hidden I1||I2 ioco hidden S1||S2", &ih, &sh, Relation::Ioco)?;

            let fs = friendly_compose_with(&s1, &s2, cfg)?;
            let fi = friendly_compose_with(&i1, &i2, cfg)?;
            out += "\n";
            out += &explain(&fs).text;
            let (sf, if_) = (fs.fragment.clone().unwrap(), fi.fragment.clone().unwrap());
            out += &verdict_line("I1(x)I2 ioco S1(x)S2", &if_, &sf, Relation::Ioco)?;
            let hs = friendly_hide_with(&sf, &sigma, cfg)?;
            let hi = friendly_hide_with(&if_, &sigma, cfg)?;
            out += "\n";
            out += &explain(&hs).text;
            out += &verdict_line(
                "fhide(I1(x)I2) ioco fhide(S1(x)S2)",
                hi.fragment.as_ref().unwrap(),
                hs.fragment.as_ref().unwrap(),
                Relation::Ioco,
            )?;
            out += "\n";
            let d = demonic_complete(&s1);
            out += &size_table([("S1", &s1), ("d(S1)", &d)]).to_string();
        }
        Demo::UiocoCe => {
            let (s1, s2) = (fixture("uioco-ce/S1")?, fixture("uioco-ce/S2")?);
            let (i1, i2) = (fixture("uioco-ce/I1")?, fixture("uioco-ce/I2")?);
            out += &verdict_line("I1 uioco S1", &i1, &s1, Relation::Uioco)?;
            out += &verdict_line("I2 uioco S2", &i2, &s2, Relation::Uioco)?;
            let (ip, sp) = (parallel_compose(&i1, &i2)?, parallel_compose(&s1, &s2)?);
            out += &verdict_line("I1||I2 uioco S1||S2", &ip, &sp, Relation::Uioco)?;
            out += "\n";
            out += &explain(&friendly_compose_with(&s1, &s2, cfg)?).text;
        }
        Demo::HideCe => {
            let (s, i) = (fixture("hide-ce/S")?, fixture("hide-ce/I")?);
            let sigma = BTreeSet::from([Label::new("a")?]);
            out += &verdict_line("I uioco S", &i, &s, Relation::Uioco)?;
            let (ih, sh) = (hide(&i, &sigma)?, hide(&s, &sigma)?);
            out += &verdict_line("hide(I) uioco hide(S)", &ih, &sh, Relation::Uioco)?;
            out += "\n";
            out += &explain(&friendly_hide_with(&s, &sigma, cfg)?).text;
        }
        Demo::Altbit => {
            let (a, b) = (fixture("altbit/A")?, fixture("altbit/B")?);
            let drawn = fixture("altbit/composite-drawn")?;
            let (da, db) = (demonic_complete(&a), demonic_complete(&b));
            let ab = parallel_compose(&a, &b)?;
            out += &size_table([
                ("A", &a),
                ("B", &b),
                ("d(A)", &da),
                ("d(B)", &db),
                ("A||B", &ab),
                ("composite-drawn", &drawn),
            ])
            .to_string();
            out += "\n";
            out += &explain(&friendly_compose_with(&a, &b, cfg)?).text;
        }
    }
    Ok(out)
}

/// Run the tool on `args` (including the program name) against the given
/// streams and return the exit status.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let mut io = Io {
        stdin,
        stdout,
        stderr,
        stdin_used: false,
    };
    match dispatch(cli, &mut io) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(io.stderr, "error: {}", f.message);
            f.code
        }
    }
}
