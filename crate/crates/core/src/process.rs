//! Interaction Markov processes on graphs.
//!
//! A vertex in state `s` jumps to `s'` spontaneously at rate `q[s -> s']`,
//! and each neighbor in state `n` adds `q[n; s -> s'] / (N rho)`. Only the
//! off-diagonal rates are stored; diagonal entries are the negated outflows.
//! The `1 / (N rho)` normalization is applied by the simulators and solvers.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

pub const MAX_STATES: usize = 16;

#[derive(Clone, Debug, PartialEq)]
pub struct ProcessSpec {
    states: Vec<String>,
    /// `[from * S + to]`, diagonal kept at zero
    spontaneous: Vec<f64>,
    /// `[(neighbor * S + from) * S + to]`, diagonal kept at zero
    interaction: Vec<f64>,
}

/// Processes with an analytic solution, and where their states live.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ClosedFormTag {
    None,
    /// Catalyst `c` drives `a -> b` at `rate`; everything else is frozen.
    Catalyst { a: usize, b: usize, c: usize, rate: f64 },
    /// Every neighbor drives `a -> b` at `rate`, whatever its state.
    Degree { a: usize, b: usize, rate: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpontaneousEntry {
    pub from: String,
    pub to: String,
    pub rate: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InteractionEntry {
    pub neighbor: String,
    pub from: String,
    pub to: String,
    pub rate: f64,
}

/// JSON form: `{"states": [..], "spontaneous": [..], "interaction": [..]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProcessSpecJson {
    pub states: Vec<String>,
    #[serde(default)]
    pub spontaneous: Vec<SpontaneousEntry>,
    #[serde(default)]
    pub interaction: Vec<InteractionEntry>,
}

impl ProcessSpec {
    pub fn new(
        states: Vec<String>,
        spontaneous: &[SpontaneousEntry],
        interaction: &[InteractionEntry],
    ) -> Result<Self> {
        let s = states.len();
        if s == 0 || s > MAX_STATES {
            return Err(invalid(format!("state space must have 1..={MAX_STATES} states, got {s}")));
        }
        for (i, a) in states.iter().enumerate() {
            if states[..i].contains(a) {
                return Err(invalid(format!("duplicate state label {a:?}")));
            }
        }
        let mut spec = ProcessSpec { states, spontaneous: vec![0.0; s * s], interaction: vec![0.0; s * s * s] };
        for e in spontaneous {
            let (from, to) = (spec.index(&e.from)?, spec.index(&e.to)?);
            let slot = from * s + to;
            check_rate(e.rate, from == to, spec.spontaneous[slot] != 0.0, || {
                format!("spontaneous {} -> {}", e.from, e.to)
            })?;
            spec.spontaneous[slot] = e.rate;
        }
        for e in interaction {
            let (nb, from, to) = (spec.index(&e.neighbor)?, spec.index(&e.from)?, spec.index(&e.to)?);
            let slot = (nb * s + from) * s + to;
            check_rate(e.rate, from == to, spec.interaction[slot] != 0.0, || {
                format!("interaction {}; {} -> {}", e.neighbor, e.from, e.to)
            })?;
            spec.interaction[slot] = e.rate;
        }
        Ok(spec)
    }

    pub fn from_json_repr(repr: &ProcessSpecJson) -> Result<Self> {
        ProcessSpec::new(repr.states.clone(), &repr.spontaneous, &repr.interaction)
    }

    /// Nonzero entries in index order.
    pub fn to_json_repr(&self) -> ProcessSpecJson {
        let s = self.n_states();
        let mut spontaneous = Vec::new();
        let mut interaction = Vec::new();
        for from in 0..s {
            for to in 0..s {
                let rate = self.spontaneous[from * s + to];
                if rate != 0.0 {
                    spontaneous.push(SpontaneousEntry {
                        from: self.states[from].clone(),
                        to: self.states[to].clone(),
                        rate,
                    });
                }
            }
        }
        for nb in 0..s {
            for from in 0..s {
                for to in 0..s {
                    let rate = self.interaction[(nb * s + from) * s + to];
                    if rate != 0.0 {
                        interaction.push(InteractionEntry {
                            neighbor: self.states[nb].clone(),
                            from: self.states[from].clone(),
                            to: self.states[to].clone(),
                            rate,
                        });
                    }
                }
            }
        }
        ProcessSpecJson { states: self.states.clone(), spontaneous, interaction }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_repr()).expect("process spec serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let repr: ProcessSpecJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        ProcessSpec::from_json_repr(&repr)
    }

    pub fn n_states(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn index(&self, label: &str) -> Result<usize> {
        self.states
            .iter()
            .position(|s| s == label)
            .ok_or_else(|| invalid(format!("unknown state {label:?}")))
    }

    /// `q[s -> s']`, with the diagonal equal to minus the outflow.
    pub fn spontaneous(&self, from: usize, to: usize) -> f64 {
        if from == to {
            -self.spontaneous_outflow(from)
        } else {
            self.spontaneous[from * self.n_states() + to]
        }
    }

    /// `q[n; s -> s']`, with the diagonal equal to minus the outflow.
    pub fn interaction(&self, neighbor: usize, from: usize, to: usize) -> f64 {
        if from == to {
            -self.interaction_outflow(neighbor, from)
        } else {
            let s = self.n_states();
            self.interaction[(neighbor * s + from) * s + to]
        }
    }

    pub fn spontaneous_outflow(&self, from: usize) -> f64 {
        let s = self.n_states();
        self.spontaneous[from * s..(from + 1) * s].iter().sum()
    }

    pub fn interaction_outflow(&self, neighbor: usize, from: usize) -> f64 {
        let s = self.n_states();
        let base = (neighbor * s + from) * s;
        self.interaction[base..base + s].iter().sum()
    }

    /// Nonzero spontaneous transitions `(from, to, rate)`.
    pub fn spontaneous_transitions(&self) -> Vec<(usize, usize, f64)> {
        let s = self.n_states();
        (0..s * s)
            .filter(|&i| self.spontaneous[i] != 0.0)
            .map(|i| (i / s, i % s, self.spontaneous[i]))
            .collect()
    }

    /// Nonzero interaction transitions `(neighbor, from, to, rate)`.
    pub fn interaction_transitions(&self) -> Vec<(usize, usize, usize, f64)> {
        let s = self.n_states();
        (0..s * s * s)
            .filter(|&i| self.interaction[i] != 0.0)
            .map(|i| (i / (s * s), (i / s) % s, i % s, self.interaction[i]))
            .collect()
    }

    pub fn max_spontaneous_outflow(&self) -> f64 {
        (0..self.n_states()).map(|s| self.spontaneous_outflow(s)).fold(0.0, f64::max)
    }

    pub fn max_interaction_outflow(&self) -> f64 {
        let s = self.n_states();
        (0..s)
            .flat_map(|nb| (0..s).map(move |from| (nb, from)))
            .map(|(nb, from)| self.interaction_outflow(nb, from))
            .fold(0.0, f64::max)
    }

    /// Recognizes the catalyst and degree shapes.
    pub fn closed_form_tag(&self) -> ClosedFormTag {
        let spont = self.spontaneous_transitions();
        let inter = self.interaction_transitions();
        if !spont.is_empty() {
            return ClosedFormTag::None;
        }
        match (self.n_states(), inter.as_slice()) {
            (3, &[(c, a, b, rate)]) if c != a && c != b => ClosedFormTag::Catalyst { a, b, c, rate },
            (2, &[(n0, a0, b0, r0), (n1, a1, b1, r1)])
                if n0 != n1 && a0 == a1 && b0 == b1 && r0 == r1 =>
            {
                ClosedFormTag::Degree { a: a0, b: b0, rate: r0 }
            }
            _ => ClosedFormTag::None,
        }
    }
}

fn check_rate(rate: f64, diagonal: bool, duplicate: bool, what: impl Fn() -> String) -> Result<()> {
    if diagonal {
        return Err(invalid(format!("{}: diagonal rates are derived, not given", what())));
    }
    if duplicate {
        return Err(invalid(format!("{}: rate given twice", what())));
    }
    if !rate.is_finite() || rate < 0.0 {
        return Err(invalid(format!("{}: rate {rate} must be finite and nonnegative", what())));
    }
    Ok(())
}

fn labels(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

/// SIR: `q[I; S -> I] = beta`, `q[I -> R] = gamma`.
pub fn preset_sir(beta: f64, gamma: f64) -> Result<ProcessSpec> {
    if !(beta >= 0.0 && gamma >= 0.0) {
        return Err(invalid(format!("SIR rates must be nonnegative, got beta={beta}, gamma={gamma}")));
    }
    ProcessSpec::new(
        labels(&["S", "I", "R"]),
        &[SpontaneousEntry { from: "I".into(), to: "R".into(), rate: gamma }],
        &[InteractionEntry { neighbor: "I".into(), from: "S".into(), to: "I".into(), rate: beta }],
    )
}

/// Catalyst process on `{a, b, c}`: `q[c; a -> b] = 1`.
pub fn preset_catalyst() -> ProcessSpec {
    ProcessSpec::new(
        labels(&["a", "b", "c"]),
        &[],
        &[InteractionEntry { neighbor: "c".into(), from: "a".into(), to: "b".into(), rate: 1.0 }],
    )
    .expect("catalyst preset is valid")
}

/// Degree process on `{a, b}`: `q[a; a -> b] = q[b; a -> b] = 1`.
pub fn preset_degree() -> ProcessSpec {
    ProcessSpec::new(
        labels(&["a", "b"]),
        &[],
        &[
            InteractionEntry { neighbor: "a".into(), from: "a".into(), to: "b".into(), rate: 1.0 },
            InteractionEntry { neighbor: "b".into(), from: "a".into(), to: "b".into(), rate: 1.0 },
        ],
    )
    .expect("degree preset is valid")
}
