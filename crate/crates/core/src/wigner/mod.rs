//! Discrete Wigner model of odd-prime-dimension stabilizer circuits.
//!
//! Each wire's ontic space is the phase space `Z_d × Z_d`, indexed `q·d + p`.
//! A basis state `|j⟩` is the uniform distribution on the line `q = j`, the
//! computational measurement reads `q`, and every Clifford gate moves phase
//! points by an affine symplectic map. The holistic pair spaces are trivial.
//!
//! The gate actions below are closed forms for the convention
//! `T(q,p) = ω^{−qp/2} Z^p X^q`, `A_u = T_u A₀ T_u†`. Tests check each one
//! against the dense conjugation `U A_u U†` in [`crate::oracle`].

mod affine;

use std::collections::BTreeMap;

use thiserror::Error;

pub use affine::{AffineSymplectic, PhasePoint};

use crate::circuit::{validate_circuit, Circuit, CircuitDiagnostic, GateSignature};
use crate::modular::{inv_mod, is_odd_prime, MAX_DIM};
use crate::ncom::OntologicalModel;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WignerError {
    #[error("dimension {0} is not an odd prime ≤ 13")]
    BadDimension(u32),
    #[error("basis label {label} out of range for dimension {dim}")]
    LabelOutOfRange { label: u32, dim: u32 },
    #[error("unknown gate {0}")]
    UnknownGate(String),
    #[error("gate {0} requires a parameter")]
    MissingParam(String),
    #[error("gate {0} takes no parameter")]
    UnexpectedParam(String),
    #[error("gate {name}: parameter {param} has no inverse mod d")]
    BadParam { name: String, param: u32 },
    #[error("no nonnegative representation in this backend: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    NotRepresentable(Vec<CircuitDiagnostic>),
    #[error("affine map needs a 2×2 or 4×4 matrix with matching shift, got {matrix} and {shift} entries")]
    BadAffineShape { matrix: usize, shift: usize },
    #[error("matrix is not symplectic")]
    NotSymplectic,
}

fn check_dim(d: u32) -> Result<(), WignerError> {
    if is_odd_prime(d) && d <= MAX_DIM {
        Ok(())
    } else {
        Err(WignerError::BadDimension(d))
    }
}

/// Gates this backend represents.
pub fn gate_set() -> Vec<GateSignature> {
    let mut set: Vec<GateSignature> =
        ["I", "X", "Z", "F", "P"].into_iter().map(|n| GateSignature::new(n, 1, false)).collect();
    set.push(GateSignature::new("M_a", 1, true));
    set.push(GateSignature::new("SUM", 2, false));
    set.push(GateSignature::new("CZ", 2, false));
    set
}

/// `μ(q, p) = [q = j] / d` over the `d²` phase points of one wire.
pub fn prep_distribution(j: u32, d: u32) -> Result<Vec<f64>, WignerError> {
    check_dim(d)?;
    if j >= d {
        return Err(WignerError::LabelOutOfRange { label: j, dim: d });
    }
    let weight = 1.0 / d as f64;
    Ok((0..(d * d) as usize).map(|i| if PhasePoint::from_index(i, d).q == j { weight } else { 0.0 }).collect())
}

/// `ξ(x | (q, p)) = [x = q]`, shape `d × d²`.
pub fn meas_indicator(d: u32) -> Result<Vec<Vec<f64>>, WignerError> {
    check_dim(d)?;
    Ok((0..d)
        .map(|x| (0..(d * d) as usize).map(|i| f64::from(u8::from(PhasePoint::from_index(i, d).q == x))).collect())
        .collect())
}

/// Phase-space action of a Clifford gate.
///
/// | gate  | action |
/// |-------|--------|
/// | `I`   | identity |
/// | `X`   | `(q, p) ↦ (q + 1, p)` |
/// | `Z`   | `(q, p) ↦ (q, p + 1)` |
/// | `F`   | `(q, p) ↦ (−p, q)` |
/// | `P`   | `(q, p) ↦ (q, p + q)` |
/// | `M_a` | `(q, p) ↦ (a q, a⁻¹ p)` |
/// | `SUM` | `(q₁, p₁, q₂, p₂) ↦ (q₁, p₁ − p₂, q₁ + q₂, p₂)` |
/// | `CZ`  | `(q₁, p₁, q₂, p₂) ↦ (q₁, p₁ + q₂, q₂, p₂ + q₁)` |
pub fn symplectic_for_gate(name: &str, param: Option<u32>, d: u32) -> Result<AffineSymplectic, WignerError> {
    check_dim(d)?;
    if param.is_some() && name != "M_a" {
        return Err(WignerError::UnexpectedParam(name.into()));
    }
    let m1 = d - 1;
    match name {
        "I" => Ok(AffineSymplectic::identity(d, 1)),
        "X" => AffineSymplectic::translation(d, vec![1, 0]),
        "Z" => AffineSymplectic::translation(d, vec![0, 1]),
        "F" => AffineSymplectic::new(d, vec![0, m1, 1, 0], vec![0, 0]),
        "P" => AffineSymplectic::new(d, vec![1, 0, 1, 1], vec![0, 0]),
        "M_a" => {
            let a = param.ok_or_else(|| WignerError::MissingParam(name.into()))?;
            let inv = inv_mod(a, d).ok_or_else(|| WignerError::BadParam { name: name.into(), param: a })?;
            AffineSymplectic::new(d, vec![a % d, 0, 0, inv], vec![0, 0])
        }
        "SUM" => AffineSymplectic::new(
            d,
            vec![
                1, 0, 0, 0, //
                0, 1, 0, m1, //
                1, 0, 1, 0, //
                0, 0, 0, 1,
            ],
            vec![0; 4],
        ),
        "CZ" => AffineSymplectic::new(
            d,
            vec![
                1, 0, 0, 0, //
                0, 1, 1, 0, //
                0, 0, 1, 0, //
                1, 0, 0, 1,
            ],
            vec![0; 4],
        ),
        other => Err(WignerError::UnknownGate(other.into())),
    }
}

/// Every gate of the backend for one dimension, keyed like circuit gate
/// tables (`NAME` or `M_a:a`).
#[derive(Debug, Clone, PartialEq)]
pub struct GateTable {
    dim: u32,
    entries: BTreeMap<String, AffineSymplectic>,
}

impl GateTable {
    pub fn clifford(d: u32) -> Result<Self, WignerError> {
        check_dim(d)?;
        let mut entries = BTreeMap::new();
        for sig in gate_set() {
            if sig.takes_param {
                for a in 1..d {
                    entries.insert(format!("{}:{a}", sig.name), symplectic_for_gate(&sig.name, Some(a), d)?);
                }
            } else {
                entries.insert(sig.name.clone(), symplectic_for_gate(&sig.name, None, d)?);
            }
        }
        Ok(Self { dim: d, entries })
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn get(&self, key: &str) -> Option<&AffineSymplectic> {
        self.entries.get(key)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &AffineSymplectic)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v))
    }
}

/// Builds the Wigner model of a stabilizer circuit. Gates outside the
/// Clifford set are refused rather than approximated.
pub fn build_ncom(c: &Circuit) -> Result<OntologicalModel, WignerError> {
    let d = c.dim;
    check_dim(d)?;
    validate_circuit(c, &gate_set()).map_err(WignerError::NotRepresentable)?;
    let mut gates1 = BTreeMap::new();
    let mut gates2 = BTreeMap::new();
    for g in &c.gates {
        let key = g.table_key();
        let target = if g.arity() == 1 { &mut gates1 } else { &mut gates2 };
        if let std::collections::btree_map::Entry::Vacant(slot) = target.entry(key) {
            slot.insert(symplectic_for_gate(&g.name, g.param, d)?.permutation());
        }
    }
    let preparations = (0..d).map(|j| prep_distribution(j, d).map(|t| (j, t))).collect::<Result<_, _>>()?;
    Ok(OntologicalModel {
        d,
        n_wires: c.n_wires,
        local_size: (d * d) as usize,
        pair_size: 1,
        preparations,
        gates1,
        gates2,
        indicator: meas_indicator(d)?,
    })
}
