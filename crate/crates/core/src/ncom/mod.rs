//! Generic noncontextual ontological models: data model, validation,
//! sampling and exact enumeration.

mod enumerate;
mod file;
mod model;
mod sampler;
pub mod stochastic;

use thiserror::Error;

pub use enumerate::{enumerate, exact_ontological_distribution, Enumeration, SparseDistribution, DEFAULT_SUPPORT_CAP};
pub use file::{load_model, save_model, ModelFileError, MODEL_FILE_VERSION};
pub use model::{validate_model, ModelDiagnostic, OntologicalModel, TABLE_TOL};
pub use sampler::{sample_many, sample_run, OnticState, PairKey, SamplingPlan};
pub use stochastic::{is_deterministic, stochastic_inverse, StochasticMap};

use crate::stats::StatsError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("invalid model: {}", join(.0))]
    InvalidModel(Vec<ModelDiagnostic>),
    #[error("model and circuit do not match: {}", .0.join("; "))]
    Mismatch(Vec<String>),
    #[error("shots must be at least 1")]
    NoShots,
    #[error("initial support of {needed} points exceeds the cap of {cap}")]
    SupportCapExceeded { needed: f64, cap: usize },
    #[error(transparent)]
    Stats(#[from] StatsError),
}

fn join(diags: &[ModelDiagnostic]) -> String {
    diags.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}
