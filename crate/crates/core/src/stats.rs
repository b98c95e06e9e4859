//! Outcome distributions and the distances used to compare them.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use thiserror::Error;

/// Normalization tolerance for probability distributions.
pub const PROB_TOL: f64 = 1e-10;

/// A measurement record: one base-`d` digit per measured wire, in measurement order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Outcome(pub Vec<u8>);

impl Outcome {
    pub fn digits(&self) -> &[u8] {
        &self.0
    }
}

const DIGITS: &[u8; 36] = b"0123456789abcdefghijklmnopqrstuvwxyz";

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("-");
        }
        for &x in &self.0 {
            f.write_char(DIGITS[x as usize] as char)?;
        }
        Ok(())
    }
}

impl FromStr for Outcome {
    type Err = StatsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "-" {
            return Ok(Outcome(Vec::new()));
        }
        s.bytes()
            .map(|b| {
                DIGITS
                    .iter()
                    .position(|&c| c == b.to_ascii_lowercase())
                    .map(|i| i as u8)
                    .ok_or_else(|| StatsError::BadOutcome(s.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Outcome)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StatsError {
    #[error("cannot normalize an empty count table")]
    EmptyCounts,
    #[error("distribution is not normalized (total {0})")]
    Unnormalized(f64),
    #[error("expected a probability distribution, found counts")]
    NotProbabilities,
    #[error("invalid outcome string '{0}'")]
    BadOutcome(String),
    #[error("negative weight {weight} for outcome {outcome}")]
    NegativeWeight { outcome: String, weight: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightKind {
    Counts,
    Probabilities,
}

/// Outcome weights, either shot counts or probabilities. Missing outcomes have weight 0.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    kind: WeightKind,
    weights: BTreeMap<Outcome, f64>,
}

impl Distribution {
    pub fn counts() -> Self {
        Self { kind: WeightKind::Counts, weights: BTreeMap::new() }
    }

    /// Wraps probabilities after checking nonnegativity and normalization.
    pub fn from_probabilities(weights: BTreeMap<Outcome, f64>) -> Result<Self, StatsError> {
        if let Some((o, &w)) = weights.iter().find(|(_, &w)| w < 0.0) {
            return Err(StatsError::NegativeWeight { outcome: o.to_string(), weight: w });
        }
        let total: f64 = weights.values().sum();
        if (total - 1.0).abs() > PROB_TOL {
            return Err(StatsError::Unnormalized(total));
        }
        Ok(Self { kind: WeightKind::Probabilities, weights })
    }

    pub fn kind(&self) -> WeightKind {
        self.kind
    }

    pub fn add_count(&mut self, outcome: Outcome, n: u64) {
        debug_assert_eq!(self.kind, WeightKind::Counts);
        *self.weights.entry(outcome).or_insert(0.0) += n as f64;
    }

    /// Adds another count table into this one.
    pub fn merge_counts(&mut self, other: &Distribution) {
        for (o, &w) in &other.weights {
            *self.weights.entry(o.clone()).or_insert(0.0) += w;
        }
    }

    pub fn get(&self, outcome: &Outcome) -> f64 {
        self.weights.get(outcome).copied().unwrap_or(0.0)
    }

    pub fn total(&self) -> f64 {
        self.weights.values().sum()
    }

    /// Number of outcomes with positive weight.
    pub fn support_len(&self) -> usize {
        self.weights.values().filter(|&&w| w > 0.0).count()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Outcome, f64)> {
        self.weights.iter().map(|(o, &w)| (o, w))
    }

    pub fn outcomes(&self) -> impl Iterator<Item = &Outcome> {
        self.weights.keys()
    }
}

/// Divides counts by their total.
pub fn normalize(counts: &Distribution) -> Result<Distribution, StatsError> {
    let total = counts.total();
    if total <= 0.0 {
        return Err(StatsError::EmptyCounts);
    }
    let weights = counts.weights.iter().map(|(o, &w)| (o.clone(), w / total)).collect();
    Ok(Distribution { kind: WeightKind::Probabilities, weights })
}

fn check_probabilities(p: &Distribution) -> Result<(), StatsError> {
    if p.kind != WeightKind::Probabilities {
        return Err(StatsError::NotProbabilities);
    }
    let total = p.total();
    if (total - 1.0).abs() > PROB_TOL {
        return Err(StatsError::Unnormalized(total));
    }
    Ok(())
}

fn union_outcomes<'a>(p: &'a Distribution, q: &'a Distribution) -> impl Iterator<Item = &'a Outcome> {
    let mut keys: Vec<&Outcome> = p.weights.keys().chain(q.weights.keys()).collect();
    keys.sort();
    keys.dedup();
    keys.into_iter()
}

/// Total variation distance `(1/2) Σ_x |p(x) − q(x)|`.
pub fn tv_distance(p: &Distribution, q: &Distribution) -> Result<f64, StatsError> {
    check_probabilities(p)?;
    check_probabilities(q)?;
    let l1: f64 = union_outcomes(p, q).map(|o| (p.get(o) - q.get(o)).abs()).sum();
    Ok((0.5 * l1).clamp(0.0, 1.0))
}

/// Largest per-outcome absolute difference.
pub fn max_abs_difference(p: &Distribution, q: &Distribution) -> f64 {
    union_outcomes(p, q).map(|o| (p.get(o) - q.get(o)).abs()).fold(0.0, f64::max)
}

/// Pearson chi-square statistic of observed counts against expected
/// probabilities, and its degrees of freedom (positive-probability outcomes minus one).
/// Diagnostic only.
pub fn chi_square(counts: &Distribution, expected: &Distribution) -> (f64, usize) {
    let shots = counts.total();
    let mut stat = 0.0;
    let mut cells = 0usize;
    for (o, p) in expected.iter().filter(|(_, p)| *p > 0.0) {
        let e = p * shots;
        let diff = counts.get(o) - e;
        stat += diff * diff / e;
        cells += 1;
    }
    (stat, cells.saturating_sub(1))
}

/// TSV report: `outcome, count, frequency`, plus `exact, abs_delta` when an
/// exact distribution is supplied.
pub fn report_tsv(counts: &Distribution, exact: Option<&Distribution>) -> String {
    let shots = counts.total();
    let mut out = String::new();
    match exact {
        None => {
            out.push_str("outcome\tcount\tfrequency\n");
            for (o, c) in counts.iter() {
                let _ = writeln!(out, "{o}\t{c}\t{}", c / shots);
            }
        }
        Some(p) => {
            out.push_str("outcome\tcount\tfrequency\texact\tabs_delta\n");
            for o in union_outcomes(counts, p) {
                let c = counts.get(o);
                let freq = if shots > 0.0 { c / shots } else { 0.0 };
                let e = p.get(o);
                let _ = writeln!(out, "{o}\t{c}\t{freq}\t{e}\t{}", (freq - e).abs());
            }
        }
    }
    out
}
