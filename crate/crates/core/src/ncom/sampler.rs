//! Weak simulation by sampling a single ontic trajectory per shot.
//!
//! A shot draws every wire's ontic state independently from its preparation,
//! pushes the point through the deterministic gate tables in schedule order
//! and finally reads each measured wire's outcome from its local indicator.
//! Holistic pair coordinates start at zero and materialize the first time a
//! two-wire gate touches the pair; they never enter the readout.

use std::collections::HashMap;

use rand::distributions::{Distribution as _, WeightedIndex};
use rand::Rng;
use rayon::prelude::*;

use super::{validate_model, OntologicalModel, SimError};
use crate::circuit::{Circuit, Schedule};
use crate::rng::shot_rng;
use crate::stats::{Distribution, Outcome};

/// Unordered wire pair, smaller index first.
pub type PairKey = (usize, usize);

pub(crate) fn pair_key(a: usize, b: usize) -> PairKey {
    (a.min(b), a.max(b))
}

#[derive(Debug, Clone, Copy)]
pub(crate) enum Op<'m> {
    Local { wire: usize, table: &'m [u32] },
    Joint { control: usize, target: usize, slot: usize, table: &'m [u32] },
}

/// The sample point: local coordinates of every wire plus the holistic
/// coordinates of the pairs touched so far, in order of first touch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OnticState {
    pub locals: Vec<u32>,
    pub pairs: Vec<u32>,
}

impl OnticState {
    pub fn tracked_coordinates(&self) -> usize {
        self.locals.len() + self.pairs.len()
    }
}

/// A circuit compiled against a model: gate tables resolved, pair slots
/// numbered, and sampling tables prepared.
#[derive(Debug)]
pub struct SamplingPlan<'m> {
    model: &'m OntologicalModel,
    ops: Vec<Op<'m>>,
    pair_keys: Vec<PairKey>,
    wire_prep: Vec<usize>,
    prep_samplers: Vec<WeightedIndex<f64>>,
    readout: Vec<WeightedIndex<f64>>,
    measured: Vec<usize>,
}

impl<'m> SamplingPlan<'m> {
    /// Validates the model and its compatibility with the circuit, then compiles.
    pub fn new(model: &'m OntologicalModel, c: &Circuit, s: &Schedule) -> Result<Self, SimError> {
        validate_model(model).map_err(SimError::InvalidModel)?;
        Self::new_prevalidated(model, c, s)
    }

    /// Compiles without re-running model validation.
    pub fn new_prevalidated(model: &'m OntologicalModel, c: &Circuit, s: &Schedule) -> Result<Self, SimError> {
        let problems = model.compatibility(c);
        if !problems.is_empty() {
            return Err(SimError::Mismatch(problems));
        }
        if !s.is_valid_for(c) {
            return Err(SimError::Mismatch(vec!["schedule does not match circuit".into()]));
        }
        let mut slots: HashMap<PairKey, usize> = HashMap::new();
        let mut pair_keys = Vec::new();
        let mut ops = Vec::with_capacity(c.gates.len());
        for gi in s.order() {
            let g = &c.gates[gi];
            let key = g.table_key();
            match g.wires[..] {
                [wire] => ops.push(Op::Local { wire, table: &model.gates1[&key] }),
                [control, target] => {
                    let pk = pair_key(control, target);
                    let slot = *slots.entry(pk).or_insert_with(|| {
                        pair_keys.push(pk);
                        pair_keys.len() - 1
                    });
                    ops.push(Op::Joint { control, target, slot, table: &model.gates2[&key] });
                }
                _ => unreachable!("circuit invariants bound arity"),
            }
        }
        let mut labels: Vec<u32> = Vec::new();
        let wire_prep = c
            .basis_labels()
            .into_iter()
            .map(|label| match labels.iter().position(|&l| l == label) {
                Some(i) => i,
                None => {
                    labels.push(label);
                    labels.len() - 1
                }
            })
            .collect();
        let prep_samplers =
            labels.iter().map(|l| WeightedIndex::new(&model.preparations[l]).expect("validated preparation")).collect();
        let readout = (0..model.local_size)
            .map(|lambda| {
                WeightedIndex::new(model.indicator.iter().map(|row| row[lambda])).expect("validated indicator")
            })
            .collect();
        Ok(Self { model, ops, pair_keys, wire_prep, prep_samplers, readout, measured: c.measured.clone() })
    }

    /// Distinct wire pairs touched by two-wire gates, in order of first touch.
    pub fn touched_pairs(&self) -> &[PairKey] {
        &self.pair_keys
    }

    pub fn gate_count(&self) -> usize {
        self.ops.len()
    }

    /// Draws the initial local coordinates, one wire at a time.
    pub fn sample_initial<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<u32> {
        self.wire_prep.iter().map(|&i| self.prep_samplers[i].sample(rng) as u32).collect()
    }

    /// Pushes an initial point through every gate. Pair coordinates start at 0.
    pub fn evolve(&self, locals: Vec<u32>) -> OnticState {
        let p = self.model.pair_size as u32;
        let lp = self.model.local_size as u32 * p;
        let mut state = OnticState { locals, pairs: Vec::new() };
        for op in &self.ops {
            match *op {
                Op::Local { wire, table } => {
                    state.locals[wire] = table[state.locals[wire] as usize];
                }
                Op::Joint { control, target, slot, table } => {
                    if slot == state.pairs.len() {
                        state.pairs.push(0);
                    }
                    let joint = state.locals[control] * lp + state.locals[target] * p + state.pairs[slot];
                    let out = table[joint as usize];
                    state.locals[control] = out / lp;
                    state.locals[target] = (out % lp) / p;
                    state.pairs[slot] = out % p;
                }
            }
        }
        state
    }

    /// Reads the measured wires from the local part of the final point.
    pub fn readout<R: Rng + ?Sized>(&self, state: &OnticState, rng: &mut R) -> Outcome {
        Outcome(self.measured.iter().map(|&w| self.readout[state.locals[w] as usize].sample(rng) as u8).collect())
    }

    /// One shot, returning the final ontic state as well.
    pub fn run_traced<R: Rng + ?Sized>(&self, rng: &mut R) -> (Outcome, OnticState) {
        let state = self.evolve(self.sample_initial(rng));
        (self.readout(&state, rng), state)
    }

    pub fn run<R: Rng + ?Sized>(&self, rng: &mut R) -> Outcome {
        self.run_traced(rng).0
    }

    /// `shots` independent runs; shot `k` uses the stream derived from `(seed, k)`.
    pub fn sample_many(&self, seed: u64, shots: u64) -> Result<Distribution, SimError> {
        if shots == 0 {
            return Err(SimError::NoShots);
        }
        let tally = (0..shots)
            .into_par_iter()
            .fold(HashMap::new, |mut acc: HashMap<Outcome, u64>, k| {
                *acc.entry(self.run(&mut shot_rng(seed, k))).or_insert(0) += 1;
                acc
            })
            .reduce(HashMap::new, |mut a, b| {
                for (o, n) in b {
                    *a.entry(o).or_insert(0) += n;
                }
                a
            });
        let mut counts = Distribution::counts();
        for (o, n) in tally {
            counts.add_count(o, n);
        }
        Ok(counts)
    }
}

/// A single shot.
pub fn sample_run<R: Rng + ?Sized>(
    m: &OntologicalModel,
    c: &Circuit,
    s: &Schedule,
    rng: &mut R,
) -> Result<Outcome, SimError> {
    Ok(SamplingPlan::new(m, c, s)?.run(rng))
}

/// Counts over `shots` independent, reproducible shots.
pub fn sample_many(
    m: &OntologicalModel,
    c: &Circuit,
    s: &Schedule,
    seed: u64,
    shots: u64,
) -> Result<Distribution, SimError> {
    SamplingPlan::new(m, c, s)?.sample_many(seed, shots)
}
