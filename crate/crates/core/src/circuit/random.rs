//! Random stabilizer circuits over the qudit Clifford gate set.

use rand::seq::SliceRandom;
use rand::Rng;

use super::{Circuit, GateApp, Prep};

/// The Clifford gate set used for random circuits. `M_a` takes a parameter.
pub const CLIFFORD_GATES: [&str; 7] = ["X", "Z", "F", "P", "M_a", "SUM", "CZ"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasureChoice {
    /// Measure every wire in index order.
    All,
    /// Measure a random nonempty subset of the wires in random order.
    RandomSubset,
}

#[derive(Debug, Clone, Copy)]
pub struct RandomCircuitSpec {
    pub dim: u32,
    pub n_wires: usize,
    /// Number of layers. Every wire receives a gate in every layer, so the
    /// greedy schedule of the result has exactly this depth.
    pub depth: usize,
    pub measure: MeasureChoice,
}

fn random_gate<R: Rng + ?Sized>(rng: &mut R, dim: u32, allow_two: bool) -> (&'static str, Option<u32>) {
    loop {
        let name = *CLIFFORD_GATES.choose(rng).unwrap();
        let two = matches!(name, "SUM" | "CZ");
        if two && !allow_two {
            continue;
        }
        let param = (name == "M_a").then(|| rng.gen_range(1..dim));
        return (name, param);
    }
}

/// Layered random stabilizer circuit with random basis-state preparations.
pub fn random_clifford_circuit<R: Rng + ?Sized>(rng: &mut R, spec: RandomCircuitSpec) -> Circuit {
    let dim = spec.dim;
    layered(rng, spec, |rng, allow_two| {
        let (name, param) = random_gate(rng, dim, allow_two);
        let arity = if matches!(name, "SUM" | "CZ") { 2 } else { 1 };
        Some(GateApp { name: name.into(), wires: vec![usize::MAX; arity], param })
    })
}

/// Layered random circuit over an explicit list of gates, each given with
/// its wire count as `(gate, arity)`. A wire left without a partner in a
/// layer gets a one-wire gate if the list has any, otherwise nothing.
pub fn random_circuit_over<R: Rng + ?Sized>(
    rng: &mut R,
    spec: RandomCircuitSpec,
    choices: &[(GateApp, usize)],
) -> Circuit {
    let singles: Vec<&GateApp> = choices.iter().filter(|(_, a)| *a == 1).map(|(g, _)| g).collect();
    layered(rng, spec, |rng, allow_two| {
        if allow_two {
            choices.choose(rng).map(|(g, arity)| GateApp { wires: vec![usize::MAX; *arity], ..g.clone() })
        } else {
            singles.choose(rng).map(|g| GateApp { wires: vec![usize::MAX], ..(*g).clone() })
        }
    })
}

/// `pick` returns a gate with placeholder wires; their count is the arity.
fn layered<R, F>(rng: &mut R, spec: RandomCircuitSpec, mut pick: F) -> Circuit
where
    R: Rng + ?Sized,
    F: FnMut(&mut R, bool) -> Option<GateApp>,
{
    let RandomCircuitSpec { dim, n_wires, depth, measure } = spec;
    let preps = (0..n_wires).map(|wire| Prep { wire, label: rng.gen_range(0..dim) }).collect();
    let mut gates = Vec::new();
    let mut order: Vec<usize> = (0..n_wires).collect();
    for _ in 0..depth {
        order.shuffle(rng);
        let mut i = 0;
        while i < n_wires {
            let Some(mut g) = pick(rng, i + 1 < n_wires) else {
                i += 1;
                continue;
            };
            if g.wires.len() == 2 {
                g.wires = vec![order[i], order[i + 1]];
                i += 2;
            } else {
                g.wires = vec![order[i]];
                i += 1;
            }
            gates.push(g);
        }
    }
    let measured = match measure {
        MeasureChoice::All => (0..n_wires).collect(),
        MeasureChoice::RandomSubset => {
            let mut wires: Vec<usize> = (0..n_wires).collect();
            wires.shuffle(rng);
            let m = rng.gen_range(1..=n_wires);
            wires.truncate(m);
            wires
        }
    };
    Circuit::new(dim, n_wires, preps, gates, measured).expect("generator emits valid circuits")
}
