//! JSON model files.
//!
//! ```json
//! {
//!   "version": 1,
//!   "d": 2, "n_wires": 2, "local_size": 2, "pair_size": 1,
//!   "preparations": { "0": [1.0, 0.0], "1": [0.0, 1.0] },
//!   "gates1": { "NOT": [1, 0] },
//!   "gates2": { "CNOT": [0, 1, 3, 2] },
//!   "indicator": [[1.0, 0.0], [0.0, 1.0]]
//! }
//! ```
//!
//! Permutations are 0-based images. A two-wire table is indexed by
//! `λᵢ·(L·P) + λⱼ·P + λ_nl`, control wire first. Parameterized gates use
//! keys of the form `NAME:a`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{validate_model, ModelDiagnostic, OntologicalModel};

pub const MODEL_FILE_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelDocument {
    version: u32,
    d: u32,
    n_wires: usize,
    local_size: usize,
    pair_size: usize,
    preparations: BTreeMap<u32, Vec<f64>>,
    #[serde(default)]
    gates1: BTreeMap<String, Vec<u32>>,
    #[serde(default)]
    gates2: BTreeMap<String, Vec<u32>>,
    indicator: Vec<Vec<f64>>,
}

#[derive(Debug, Error)]
pub enum ModelFileError {
    #[error("schema error at line {line}, column {column}: {message}")]
    Schema { line: usize, column: usize, message: String },
    #[error("unsupported model file version {0}")]
    Version(u32),
    #[error("model failed validation: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<ModelDiagnostic>),
}

/// Parses and validates a model document.
pub fn load_model(text: &str) -> Result<OntologicalModel, ModelFileError> {
    let doc: ModelDocument = serde_json::from_str(text).map_err(|e| ModelFileError::Schema {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if doc.version != MODEL_FILE_VERSION {
        return Err(ModelFileError::Version(doc.version));
    }
    let model = OntologicalModel {
        d: doc.d,
        n_wires: doc.n_wires,
        local_size: doc.local_size,
        pair_size: doc.pair_size,
        preparations: doc.preparations,
        gates1: doc.gates1,
        gates2: doc.gates2,
        indicator: doc.indicator,
    };
    validate_model(&model).map_err(ModelFileError::Invalid)?;
    Ok(model)
}

pub fn save_model(m: &OntologicalModel) -> String {
    let doc = ModelDocument {
        version: MODEL_FILE_VERSION,
        d: m.d,
        n_wires: m.n_wires,
        local_size: m.local_size,
        pair_size: m.pair_size,
        preparations: m.preparations.clone(),
        gates1: m.gates1.clone(),
        gates2: m.gates2.clone(),
        indicator: m.indicator.clone(),
    };
    serde_json::to_string_pretty(&doc).expect("model documents always serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncom::model::tests::toy_model;

    #[test]
    fn round_trip() {
        let m = toy_model();
        assert_eq!(load_model(&save_model(&m)).unwrap(), m);
    }

    #[test]
    fn non_bijective_table_refused() {
        let text = save_model(&toy_model()).replace("\"NOT\": [\n      1,\n      0\n    ]", "\"NOT\": [0, 0]");
        assert!(text.contains("[0, 0]"));
        match load_model(&text) {
            Err(ModelFileError::Invalid(d)) => assert!(d[0].message.contains("not deterministic")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn negative_probability_refused() {
        let mut m = toy_model();
        m.preparations.insert(0, vec![1.5, -0.5]);
        assert!(matches!(load_model(&save_model(&m)), Err(ModelFileError::Invalid(_))));
    }

    #[test]
    fn schema_errors_carry_position() {
        let e = load_model("{\"version\": 1,\n \"d\": \"three\"}").unwrap_err();
        assert!(matches!(e, ModelFileError::Schema { line: 2, .. }), "{e}");
        let e = load_model(&save_model(&toy_model()).replace("\"version\": 1", "\"version\": 7")).unwrap_err();
        assert!(matches!(e, ModelFileError::Version(7)));
        let e = load_model(&save_model(&toy_model()).replace("\"version\": 1", "\"version\": 1, \"extra\": 0"))
            .unwrap_err();
        assert!(matches!(e, ModelFileError::Schema { .. }));
    }
}
