//! Exact output distribution of a model, by pushing the full initial support
//! through the gate permutations and contracting with the indicators.

use std::collections::{BTreeMap, HashMap};

use super::sampler::{pair_key, PairKey};
use super::{validate_model, OntologicalModel, SimError};
use crate::circuit::{Circuit, Schedule};
use crate::stats::{Distribution, Outcome};

/// Default cap on the initial joint support size.
pub const DEFAULT_SUPPORT_CAP: usize = 1_000_000;

/// Joint ontic points with positive weight. A point lists the local
/// coordinate of every wire followed by one holistic coordinate per touched pair.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseDistribution {
    pub points: HashMap<Vec<u32>, f64>,
}

impl SparseDistribution {
    pub fn support_len(&self) -> usize {
        self.points.len()
    }

    pub fn total(&self) -> f64 {
        self.points.values().sum()
    }
}

/// The exact distribution together with the support size after the input
/// (index 0) and after every gate.
#[derive(Debug, Clone)]
pub struct Enumeration {
    pub distribution: Distribution,
    pub support_sizes: Vec<usize>,
}

fn initial_support(
    m: &OntologicalModel,
    c: &Circuit,
    n_slots: usize,
    cap: usize,
) -> Result<SparseDistribution, SimError> {
    let per_wire: Vec<Vec<(u32, f64)>> = c
        .basis_labels()
        .iter()
        .map(|l| m.preparations[l].iter().enumerate().filter(|(_, &w)| w > 0.0).map(|(i, &w)| (i as u32, w)).collect())
        .collect();
    let size = per_wire.iter().try_fold(1usize, |acc, s| acc.checked_mul(s.len()));
    match size {
        Some(n) if n <= cap => {}
        _ => {
            let needed = per_wire.iter().map(|s| s.len() as f64).product();
            return Err(SimError::SupportCapExceeded { needed, cap });
        }
    }
    let mut points: Vec<(Vec<u32>, f64)> = vec![(Vec::with_capacity(c.n_wires + n_slots), 1.0)];
    for support in &per_wire {
        points = points
            .into_iter()
            .flat_map(|(prefix, w)| {
                support.iter().map(move |&(l, p)| {
                    let mut next = prefix.clone();
                    next.push(l);
                    (next, w * p)
                })
            })
            .collect();
    }
    let points = points
        .into_iter()
        .map(|(mut pt, w)| {
            pt.resize(c.n_wires + n_slots, 0);
            (pt, w)
        })
        .collect();
    Ok(SparseDistribution { points })
}

/// Exact `p(x) = Σ_λ ξ(x | λ_D) μ(λ_0)` with `λ_D` the deterministic image of `λ_0`.
pub fn exact_ontological_distribution(
    m: &OntologicalModel,
    c: &Circuit,
    s: &Schedule,
    cap: usize,
) -> Result<Distribution, SimError> {
    enumerate(m, c, s, cap).map(|e| e.distribution)
}

/// As [`exact_ontological_distribution`], recording the support size at every step.
pub fn enumerate(m: &OntologicalModel, c: &Circuit, s: &Schedule, cap: usize) -> Result<Enumeration, SimError> {
    validate_model(m).map_err(SimError::InvalidModel)?;
    let problems = m.compatibility(c);
    if !problems.is_empty() {
        return Err(SimError::Mismatch(problems));
    }
    if !s.is_valid_for(c) {
        return Err(SimError::Mismatch(vec!["schedule does not match circuit".into()]));
    }
    let mut slots: HashMap<PairKey, usize> = HashMap::new();
    for g in &c.gates {
        if let [a, b] = g.wires[..] {
            let next = slots.len();
            slots.entry(pair_key(a, b)).or_insert(next);
        }
    }
    let n = c.n_wires;
    let mut dist = initial_support(m, c, slots.len(), cap)?;
    let mut support_sizes = vec![dist.support_len()];
    let p = m.pair_size as u32;
    let lp = m.local_size as u32 * p;
    for gi in s.order() {
        let g = &c.gates[gi];
        let key = g.table_key();
        let mut next = HashMap::with_capacity(dist.points.len());
        for (mut pt, w) in dist.points {
            match g.wires[..] {
                [wire] => pt[wire] = m.gates1[&key][pt[wire] as usize],
                [ctl, tgt] => {
                    let slot = n + slots[&pair_key(ctl, tgt)];
                    let out = m.gates2[&key][(pt[ctl] * lp + pt[tgt] * p + pt[slot]) as usize];
                    pt[ctl] = out / lp;
                    pt[tgt] = (out % lp) / p;
                    pt[slot] = out % p;
                }
                _ => unreachable!(),
            }
            *next.entry(pt).or_insert(0.0) += w;
        }
        dist = SparseDistribution { points: next };
        support_sizes.push(dist.support_len());
    }
    let mut acc: BTreeMap<Outcome, f64> = BTreeMap::new();
    let mut partial: Vec<(Vec<u8>, f64)> = Vec::new();
    for (pt, w) in &dist.points {
        partial.clear();
        partial.push((Vec::with_capacity(c.measured.len()), *w));
        for &wire in &c.measured {
            let lambda = pt[wire] as usize;
            partial = std::mem::take(&mut partial)
                .into_iter()
                .flat_map(|(prefix, pw)| {
                    m.indicator.iter().enumerate().filter(move |(_, row)| row[lambda] > 0.0).map(move |(x, row)| {
                        let mut o = prefix.clone();
                        o.push(x as u8);
                        (o, pw * row[lambda])
                    })
                })
                .collect();
        }
        for (o, pw) in partial.drain(..) {
            *acc.entry(Outcome(o)).or_insert(0.0) += pw;
        }
    }
    let distribution = Distribution::from_probabilities(acc).map_err(SimError::Stats)?;
    Ok(Enumeration { distribution, support_sizes })
}
