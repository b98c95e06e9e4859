use std::collections::BTreeMap;
use std::fmt;

use crate::circuit::{Circuit, GateSignature};

/// Normalization tolerance for tables read from a model.
pub const TABLE_TOL: f64 = 1e-12;

/// A finite, wire-homogeneous noncontextual ontological model.
///
/// Every wire has a local ontic space of `local_size` points. A pair of wires
/// touched by a two-wire gate additionally owns a holistic coordinate in
/// `[0, pair_size)`, which starts at 0. Two-wire gate tables act on the joint
/// index `λᵢ·(L·P) + λⱼ·P + λ_nl` with the first (control) wire `i` most
/// significant. Outcomes of the per-wire measurement range over `[0, d)`.
#[derive(Debug, Clone, PartialEq)]
pub struct OntologicalModel {
    pub d: u32,
    pub n_wires: usize,
    pub local_size: usize,
    pub pair_size: usize,
    /// Basis label → distribution over local ontic states.
    pub preparations: BTreeMap<u32, Vec<f64>>,
    /// Gate key → permutation of `[0, L)`, `perm[λ] = λ'`.
    pub gates1: BTreeMap<String, Vec<u32>>,
    /// Gate key → permutation of `[0, L·L·P)`.
    pub gates2: BTreeMap<String, Vec<u32>>,
    /// `indicator[x][λ] = ξ(x | λ)`, shape `d × L`.
    pub indicator: Vec<Vec<f64>>,
}

/// A violated model invariant, with the offending table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelDiagnostic {
    pub location: String,
    pub message: String,
}

impl fmt::Display for ModelDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.message)
    }
}

impl OntologicalModel {
    pub fn joint_size(&self) -> usize {
        self.local_size * self.local_size * self.pair_size
    }

    /// Gate signatures implied by the gate tables. A key `NAME:a` declares
    /// a parameterized gate `NAME`.
    pub fn gate_signatures(&self) -> Vec<GateSignature> {
        let mut sigs: Vec<GateSignature> = Vec::new();
        let tables = self.gates1.keys().map(|k| (k, 1)).chain(self.gates2.keys().map(|k| (k, 2)));
        for (key, arity) in tables {
            let (name, takes_param) = match key.split_once(':') {
                Some((name, _)) => (name, true),
                None => (key.as_str(), false),
            };
            if !sigs.iter().any(|s| s.name == name) {
                sigs.push(GateSignature::new(name, arity, takes_param));
            }
        }
        sigs
    }

    /// Problems preventing this model from simulating `c`.
    pub fn compatibility(&self, c: &Circuit) -> Vec<String> {
        let mut problems = Vec::new();
        if c.dim != self.d {
            problems.push(format!("circuit dimension {} differs from model dimension {}", c.dim, self.d));
        }
        if c.n_wires != self.n_wires {
            problems.push(format!("circuit has {} wires, model has {}", c.n_wires, self.n_wires));
        }
        for p in &c.preps {
            if !self.preparations.contains_key(&p.label) {
                problems.push(format!("no preparation for basis label {} (wire {})", p.label, p.wire));
            }
        }
        for (i, g) in c.gates.iter().enumerate() {
            let key = g.table_key();
            let known = match g.arity() {
                1 => self.gates1.contains_key(&key),
                _ => self.gates2.contains_key(&key),
            };
            if !known {
                problems.push(format!("gate #{i}: no {}-wire table for {key}", g.arity()));
            }
        }
        problems
    }
}

fn check_distribution(values: &[f64], location: &str, what: &str, diags: &mut Vec<ModelDiagnostic>) {
    if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| v.is_nan() || **v < 0.0) {
        diags.push(ModelDiagnostic {
            location: format!("{location}[{i}]"),
            message: format!("negative or invalid probability {v}"),
        });
    }
    let total: f64 = values.iter().sum();
    if total.is_nan() || (total - 1.0).abs() > TABLE_TOL {
        diags.push(ModelDiagnostic {
            location: location.to_string(),
            message: format!("{what} not normalized (sum {total})"),
        });
    }
}

fn check_permutation(perm: &[u32], size: usize, location: String, diags: &mut Vec<ModelDiagnostic>) {
    if perm.len() != size {
        diags.push(ModelDiagnostic { location, message: format!("table has {} entries, expected {size}", perm.len()) });
        return;
    }
    let mut hits = vec![0u32; size];
    for (i, &v) in perm.iter().enumerate() {
        match hits.get_mut(v as usize) {
            Some(h) => *h += 1,
            None => {
                diags.push(ModelDiagnostic {
                    location: format!("{location}[{i}]"),
                    message: format!("image {v} outside [0, {size})"),
                });
                return;
            }
        }
    }
    if let Some(collision) = hits.iter().position(|&h| h > 1) {
        let inputs: Vec<usize> =
            perm.iter().enumerate().filter(|(_, &v)| v as usize == collision).map(|(i, _)| i).collect();
        diags.push(ModelDiagnostic {
            location: format!("{location}[{}]", inputs[1]),
            message: format!("transformation not deterministic/invertible: inputs {inputs:?} share image {collision}"),
        });
    }
}

/// Checks every structural invariant of `m`: normalized nonnegative
/// preparations, bijective gate tables and complete indicator columns.
/// Returns all violations.
pub fn validate_model(m: &OntologicalModel) -> Result<(), Vec<ModelDiagnostic>> {
    let mut diags = Vec::new();
    let mut push =
        |location: &str, message: String| diags.push(ModelDiagnostic { location: location.to_string(), message });
    if m.d < 2 {
        push("d", format!("outcome alphabet size {} is below 2", m.d));
    }
    if m.n_wires == 0 {
        push("n_wires", "model needs at least one wire".into());
    }
    if m.local_size == 0 {
        push("local_size", "local ontic space is empty".into());
    }
    if m.pair_size == 0 {
        push("pair_size", "pair ontic space is empty".into());
    }
    if !diags.is_empty() {
        return Err(diags);
    }
    let l = m.local_size;
    for (label, table) in &m.preparations {
        let location = format!("preparations[{label}]");
        if *label >= m.d {
            diags.push(ModelDiagnostic {
                location: location.clone(),
                message: format!("basis label outside [0, {})", m.d),
            });
        }
        if table.len() != l {
            diags.push(ModelDiagnostic {
                location,
                message: format!("table has {} entries, expected {l}", table.len()),
            });
            continue;
        }
        check_distribution(table, &location, "preparation", &mut diags);
    }
    for (name, perm) in &m.gates1 {
        check_permutation(perm, l, format!("gates1[{name}]"), &mut diags);
        if m.gates2.contains_key(name) {
            diags.push(ModelDiagnostic {
                location: format!("gates1[{name}]"),
                message: "name also used by a two-wire gate".into(),
            });
        }
    }
    for (name, perm) in &m.gates2 {
        check_permutation(perm, m.joint_size(), format!("gates2[{name}]"), &mut diags);
    }
    if m.indicator.len() != m.d as usize || m.indicator.iter().any(|row| row.len() != l) {
        diags.push(ModelDiagnostic {
            location: "indicator".into(),
            message: format!("indicator must have shape {} × {l}", m.d),
        });
    } else {
        for lambda in 0..l {
            let column: Vec<f64> = m.indicator.iter().map(|row| row[lambda]).collect();
            if let Some((x, v)) = column.iter().enumerate().find(|(_, v)| !(0.0..=1.0).contains(*v)) {
                diags.push(ModelDiagnostic {
                    location: format!("indicator[{x}][{lambda}]"),
                    message: format!("response {v} outside [0, 1]"),
                });
            }
            let total: f64 = column.iter().sum();
            if total.is_nan() || (total - 1.0).abs() > TABLE_TOL {
                diags.push(ModelDiagnostic {
                    location: format!("indicator[*][{lambda}]"),
                    message: format!("measurement responses sum to {total}, not 1"),
                });
            }
        }
    }
    if diags.is_empty() {
        Ok(())
    } else {
        Err(diags)
    }
}
