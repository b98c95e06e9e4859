//! Circuit intermediate representation.
//!
//! A circuit prepares every wire in a computational basis state, applies an
//! ordered list of one- and two-wire gates and finally measures a subset of
//! the wires in the computational basis. Wires are 0-based.

mod parse;
pub mod random;
mod schedule;

use std::fmt;

use thiserror::Error;

pub use parse::{parse_circuit, ParseError};
pub use schedule::{schedule, Schedule};

/// One gate application.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GateApp {
    pub name: String,
    /// One or two distinct wires; for two-wire gates the first wire is the control.
    pub wires: Vec<usize>,
    /// Optional integer parameter in `[1, d-1]`, e.g. the multiplier of `M_a`.
    pub param: Option<u32>,
}

impl GateApp {
    pub fn new(name: impl Into<String>, wires: &[usize]) -> Self {
        Self { name: name.into(), wires: wires.to_vec(), param: None }
    }

    pub fn with_param(name: impl Into<String>, wires: &[usize], param: u32) -> Self {
        Self { name: name.into(), wires: wires.to_vec(), param: Some(param) }
    }

    pub fn arity(&self) -> usize {
        self.wires.len()
    }

    /// Lookup key used by gate tables: `NAME`, or `NAME:param` when a parameter is present.
    pub fn table_key(&self) -> String {
        gate_key(&self.name, self.param)
    }
}

pub fn gate_key(name: &str, param: Option<u32>) -> String {
    match param {
        Some(a) => format!("{name}:{a}"),
        None => name.to_string(),
    }
}

impl fmt::Display for GateApp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)?;
        for w in &self.wires {
            write!(f, " {w}")?;
        }
        if let Some(a) = self.param {
            write!(f, " param {a}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Prep {
    pub wire: usize,
    /// Computational basis label in `[0, d)`.
    pub label: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    pub name: String,
    pub dim: u32,
    pub n_wires: usize,
    pub preps: Vec<Prep>,
    pub gates: Vec<GateApp>,
    pub measured: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CircuitError {
    #[error("dimension {0} is below 2")]
    BadDimension(u32),
    #[error("circuit needs at least one wire")]
    NoWires,
    #[error("wire {0} out of range")]
    WireOutOfRange(usize),
    #[error("wire {0} prepared more than once")]
    DuplicatePrep(usize),
    #[error("wire {0} has no preparation")]
    MissingPrep(usize),
    #[error("basis label {label} out of range for dimension {dim}")]
    LabelOutOfRange { label: u32, dim: u32 },
    #[error("gate {index} ({name}) must act on 1 or 2 wires, got {arity}")]
    BadGateArity { index: usize, name: String, arity: usize },
    #[error("gate {index} ({name}) repeats a wire")]
    RepeatedGateWire { index: usize, name: String },
    #[error("gate {index} ({name}) parameter {param} outside [1, {max}]")]
    ParamOutOfRange { index: usize, name: String, param: u32, max: u32 },
    #[error("wire {0} measured more than once")]
    DuplicateMeasure(usize),
}

impl Circuit {
    /// Builds a circuit after checking every structural invariant.
    pub fn new(
        dim: u32,
        n_wires: usize,
        preps: Vec<Prep>,
        gates: Vec<GateApp>,
        measured: Vec<usize>,
    ) -> Result<Self, CircuitError> {
        let c = Self { name: String::new(), dim, n_wires, preps, gates, measured };
        c.check()?;
        Ok(c)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Re-checks the structural invariants.
    pub fn check(&self) -> Result<(), CircuitError> {
        if self.dim < 2 {
            return Err(CircuitError::BadDimension(self.dim));
        }
        if self.n_wires == 0 {
            return Err(CircuitError::NoWires);
        }
        let mut prepared = vec![false; self.n_wires];
        for p in &self.preps {
            if p.wire >= self.n_wires {
                return Err(CircuitError::WireOutOfRange(p.wire));
            }
            if p.label >= self.dim {
                return Err(CircuitError::LabelOutOfRange { label: p.label, dim: self.dim });
            }
            if std::mem::replace(&mut prepared[p.wire], true) {
                return Err(CircuitError::DuplicatePrep(p.wire));
            }
        }
        if let Some(w) = prepared.iter().position(|&p| !p) {
            return Err(CircuitError::MissingPrep(w));
        }
        for (index, g) in self.gates.iter().enumerate() {
            if g.wires.is_empty() || g.wires.len() > 2 {
                return Err(CircuitError::BadGateArity { index, name: g.name.clone(), arity: g.wires.len() });
            }
            if let Some(&w) = g.wires.iter().find(|&&w| w >= self.n_wires) {
                return Err(CircuitError::WireOutOfRange(w));
            }
            if g.wires.len() == 2 && g.wires[0] == g.wires[1] {
                return Err(CircuitError::RepeatedGateWire { index, name: g.name.clone() });
            }
            if let Some(a) = g.param {
                if a == 0 || a >= self.dim {
                    return Err(CircuitError::ParamOutOfRange {
                        index,
                        name: g.name.clone(),
                        param: a,
                        max: self.dim - 1,
                    });
                }
            }
        }
        let mut seen = vec![false; self.n_wires];
        for &w in &self.measured {
            if w >= self.n_wires {
                return Err(CircuitError::WireOutOfRange(w));
            }
            if std::mem::replace(&mut seen[w], true) {
                return Err(CircuitError::DuplicateMeasure(w));
            }
        }
        Ok(())
    }

    /// Basis label of every wire, indexed by wire.
    pub fn basis_labels(&self) -> Vec<u32> {
        let mut labels = vec![0; self.n_wires];
        for p in &self.preps {
            labels[p.wire] = p.label;
        }
        labels
    }

    /// Per-wire gate counts.
    pub fn wire_loads(&self) -> Vec<usize> {
        let mut loads = vec![0; self.n_wires];
        for g in &self.gates {
            for &w in &g.wires {
                loads[w] += 1;
            }
        }
        loads
    }
}

/// Prints the circuit in the line-oriented file format accepted by [`parse_circuit`].
impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "dim {}", self.dim)?;
        writeln!(f, "wires {}", self.n_wires)?;
        for p in &self.preps {
            writeln!(f, "prep {} basis {}", p.wire, p.label)?;
        }
        for g in &self.gates {
            writeln!(f, "gate {g}")?;
        }
        write!(f, "measure")?;
        for w in &self.measured {
            write!(f, " {w}")?;
        }
        writeln!(f)
    }
}

/// Name, arity and parameter requirement of one gate a backend understands.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GateSignature {
    pub name: String,
    pub arity: usize,
    pub takes_param: bool,
}

impl GateSignature {
    pub fn new(name: impl Into<String>, arity: usize, takes_param: bool) -> Self {
        Self { name: name.into(), arity, takes_param }
    }
}

/// A problem found by [`validate_circuit`], located by gate index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircuitDiagnostic {
    pub gate_index: usize,
    pub message: String,
}

impl fmt::Display for CircuitDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "gate #{}: {}", self.gate_index, self.message)
    }
}

/// Checks every gate against a backend gate set. Reports all violations.
pub fn validate_circuit(c: &Circuit, gate_set: &[GateSignature]) -> Result<(), Vec<CircuitDiagnostic>> {
    let mut diags = Vec::new();
    for (gate_index, g) in c.gates.iter().enumerate() {
        let Some(sig) = gate_set.iter().find(|s| s.name == g.name) else {
            diags.push(CircuitDiagnostic { gate_index, message: format!("gate {} not in backend gate set", g.name) });
            continue;
        };
        if sig.arity != g.arity() {
            diags.push(CircuitDiagnostic {
                gate_index,
                message: format!("arity mismatch: {} expects {} wire(s), got {}", g.name, sig.arity, g.arity()),
            });
        }
        match (sig.takes_param, g.param) {
            (true, None) => {
                diags.push(CircuitDiagnostic { gate_index, message: format!("gate {} requires a parameter", g.name) })
            }
            (false, Some(_)) => {
                diags.push(CircuitDiagnostic { gate_index, message: format!("gate {} takes no parameter", g.name) })
            }
            _ => {}
        }
    }
    if diags.is_empty() {
        Ok(())
    } else {
        Err(diags)
    }
}
