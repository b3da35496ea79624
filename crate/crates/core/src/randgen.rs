//! Seeded random models for property tests.
//!
//! Generation uses ChaCha8 seeded from [`GenParams::seed`], so the same
//! parameters always give the same model on every platform. Labels are
//! named `i0, i1, ...` and `o0, o1, ...`. A random spanning tree from the
//! initial state keeps every state reachable, and τ edges only point to
//! higher-numbered states, so generated models are strongly convergent.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::lts::{Action, Alphabet, Iolts, IoltsBuilder, Label};

#[derive(Clone, Debug, PartialEq)]
pub struct GenParams {
    pub seed: u64,
    pub max_states: usize,
    pub n_inputs: usize,
    pub n_outputs: usize,
    /// Probability that a given (state, label) pair gets an extra edge.
    pub transition_density: f64,
    /// Probability that a state gets an extra τ edge.
    pub tau_probability: f64,
    pub deterministic: bool,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            seed: 0,
            max_states: 6,
            n_inputs: 2,
            n_outputs: 2,
            transition_density: 0.4,
            tau_probability: 0.2,
            deterministic: false,
        }
    }
}

impl GenParams {
    fn check(&self) -> Result<()> {
        if self.max_states == 0 {
            return Err(Error::Params("max_states must be at least 1".into()));
        }
        for (what, p) in [
            ("transition_density", self.transition_density),
            ("tau_probability", self.tau_probability),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Params(format!("{what} must lie in [0, 1], got {p}")));
            }
        }
        Ok(())
    }
}

fn pool(prefix: char, from: usize, n: usize) -> Vec<Label> {
    (from..from + n)
        .map(|k| Label::new(format!("{prefix}{k}")).expect("generated labels are valid"))
        .collect()
}

pub fn random_iolts(p: &GenParams) -> Result<Iolts> {
    let alphabet = Alphabet::new(pool('i', 0, p.n_inputs), pool('o', 0, p.n_outputs))?;
    random_iolts_over(alphabet, p)
}

/// Like [`random_iolts`], but over a caller-chosen alphabet. The label
/// counts in `p` are ignored.
pub fn random_iolts_over(alphabet: Alphabet, p: &GenParams) -> Result<Iolts> {
    p.check()?;
    if alphabet.is_empty() {
        return Err(Error::Params("at least one label is required".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    generate(alphabet, p, &mut rng, "M")
}

fn generate(alphabet: Alphabet, p: &GenParams, rng: &mut ChaCha8Rng, name: &str) -> Result<Iolts> {
    let labels: Vec<Label> = alphabet.labels().cloned().collect();
    let n = rng.gen_range(1..=p.max_states);
    let names: Vec<String> = (0..n).map(|k| format!("s{k}")).collect();
    let mut used = vec![vec![false; labels.len()]; n];
    let mut b = IoltsBuilder::new(name, alphabet);
    b.init(&names[0]);
    for q in &names {
        b.state(q);
    }

    for k in 1..n {
        let parent = rng.gen_range(0..k);
        let tau = !p.deterministic && rng.gen_bool(p.tau_probability);
        if tau {
            b.add(&names[parent], Action::Tau, &names[k])?;
            continue;
        }
        // In deterministic mode the newest state always has every label
        // free, so fall back to it when the drawn parent is saturated.
        let parent = if p.deterministic && used[parent].iter().all(|&u| u) {
            k - 1
        } else {
            parent
        };
        let free: Vec<usize> = (0..labels.len())
            .filter(|&l| !p.deterministic || !used[parent][l])
            .collect();
        let l = *free.choose(rng).expect("a free label exists");
        used[parent][l] = true;
        b.add(&names[parent], Action::Visible(labels[l].clone()), &names[k])?;
    }

    for q in 0..n {
        for l in 0..labels.len() {
            if p.deterministic && used[q][l] {
                continue;
            }
            if rng.gen_bool(p.transition_density) {
                let dst = rng.gen_range(0..n);
                used[q][l] = true;
                b.add(&names[q], Action::Visible(labels[l].clone()), &names[dst])?;
            }
        }
        if !p.deterministic && q + 1 < n && rng.gen_bool(p.tau_probability) {
            let dst = rng.gen_range(q + 1..n);
            b.add(&names[q], Action::Tau, &names[dst])?;
        }
    }
    b.build()
}

/// Two composable models. Each output of the first is, with even odds,
/// an input of the second and vice versa; the remaining label slots of the
/// second are filled with fresh labels. When no label ended up shared, one
/// is forced with probability `transition_density`.
pub fn random_composable_pair(p: &GenParams) -> Result<(Iolts, Iolts)> {
    p.check()?;
    if p.n_inputs + p.n_outputs == 0 {
        return Err(Error::Params("at least one label is required".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let a_in = pool('i', 0, p.n_inputs);
    let a_out = pool('o', 0, p.n_outputs);

    let mut b_in: Vec<Label> = a_out
        .iter()
        .filter(|_| rng.gen_bool(0.5))
        .take(p.n_inputs)
        .cloned()
        .collect();
    let mut b_out: Vec<Label> = a_in
        .iter()
        .filter(|_| rng.gen_bool(0.5))
        .take(p.n_outputs)
        .cloned()
        .collect();
    if b_in.is_empty() && b_out.is_empty() && rng.gen_bool(p.transition_density) {
        if !a_out.is_empty() && p.n_inputs > 0 {
            b_in.push(a_out.choose(&mut rng).expect("non-empty").clone());
        } else if !a_in.is_empty() && p.n_outputs > 0 {
            b_out.push(a_in.choose(&mut rng).expect("non-empty").clone());
        }
    }
    let fresh_in = p.n_inputs - b_in.len();
    let fresh_out = p.n_outputs - b_out.len();
    b_in.extend(pool('i', p.n_inputs, fresh_in));
    b_out.extend(pool('o', p.n_outputs, fresh_out));

    let a = generate(Alphabet::new(a_in, a_out)?, p, &mut rng, "A")?;
    let b = generate(Alphabet::new(b_in, b_out)?, p, &mut rng, "B")?;
    Ok((a, b))
}
