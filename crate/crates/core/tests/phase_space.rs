//! The closed-form gate actions against dense conjugation of phase-point
//! operators, Born-rule consistency of the Wigner model, and closure of
//! affine maps under composition.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ncomsim::circuit::random::{random_clifford_circuit, MeasureChoice, RandomCircuitSpec};
use ncomsim::circuit::{schedule, GateApp};
use ncomsim::oracle::{
    derive_symplectic, gate_matrix, phase_point_operator, phase_point_operators, wigner_function, StateVector,
    DEFAULT_AMPLITUDE_CAP,
};
use ncomsim::wigner::{
    meas_indicator, prep_distribution, symplectic_for_gate, AffineSymplectic, GateTable, PhasePoint,
};

fn max_entry_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Local phase-point indices of a joint coordinate vector `(q₁, p₁, q₂, p₂, …)`.
fn locals(coords: &[u32], d: u32) -> Vec<usize> {
    coords.chunks(2).map(|qp| PhasePoint::new(qp[0], qp[1]).index(d)).collect()
}

fn all_coords(d: u32, arity: usize) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..2 * arity {
        out = out.into_iter().flat_map(|v| (0..d).map(move |x| [v.clone(), vec![x]].concat())).collect();
    }
    out
}

fn check_covariance(d: u32, name: &str, param: Option<u32>, arity: usize) {
    let table = phase_point_operators(d).unwrap();
    let u = gate_matrix(name, param, d).unwrap();
    let u_dag = u.adjoint();
    let map = symplectic_for_gate(name, param, d).unwrap();
    assert_eq!(map.arity(), arity);
    for coords in all_coords(d, arity) {
        let a = phase_point_operator(&table, &locals(&coords, d));
        let image = phase_point_operator(&table, &locals(&map.apply(&coords), d));
        let diff = max_entry_diff(&(&u * &a * &u_dag), &image);
        assert!(diff <= 1e-10, "{name} {param:?} d={d} u={coords:?}: {diff}");
    }
}

#[test]
fn single_wire_covariance() {
    for d in [3, 5, 7] {
        for name in ["I", "X", "Z", "F", "P"] {
            check_covariance(d, name, None, 1);
        }
        for a in 1..d {
            check_covariance(d, "M_a", Some(a), 1);
        }
    }
}

#[test]
fn two_wire_covariance() {
    for d in [3, 5] {
        check_covariance(d, "SUM", None, 2);
        check_covariance(d, "CZ", None, 2);
    }
}

#[test]
fn closed_forms_match_derived_actions() {
    for d in [3, 5, 7] {
        for (key, map) in GateTable::clifford(d).unwrap().iter() {
            let (name, param) = match key.split_once(':') {
                Some((n, a)) => (n, Some(a.parse().unwrap())),
                None => (key, None),
            };
            if map.arity() == 2 && d > 5 {
                continue;
            }
            let derived = derive_symplectic(&gate_matrix(name, param, d).unwrap(), d).unwrap();
            assert_eq!(&derived, map, "{key} d={d}");
        }
    }
}

#[test]
fn non_clifford_gate_has_no_action() {
    for d in [3, 5, 7] {
        assert!(derive_symplectic(&gate_matrix("T", None, d).unwrap(), d).is_err(), "d={d}");
    }
}

#[test]
fn single_wire_determinants_are_one() {
    for d in [3, 5, 7, 11, 13] {
        for (key, map) in GateTable::clifford(d).unwrap().iter() {
            assert!(map.is_symplectic(), "{key}");
            if let Some(det) = map.det2() {
                assert_eq!(det, 1, "{key} d={d}");
            }
        }
    }
}

/// `Σ_u W_ρ(u) ξ(x | u) = ⟨x|ρ|x⟩` on the final state of random circuits,
/// and the final Wigner function is the initial one moved by the gate maps.
#[test]
fn duality_and_born_consistency() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for (d, n) in [(3u32, 1usize), (3, 2), (5, 1), (5, 2), (7, 1)] {
        for _ in 0..10 {
            let spec = RandomCircuitSpec { dim: d, n_wires: n, depth: 6, measure: MeasureChoice::All };
            let c = random_clifford_circuit(&mut rng, spec);
            let mut psi = StateVector::basis(d, &c.basis_labels(), DEFAULT_AMPLITUDE_CAP).unwrap();
            for gi in schedule(&c).order() {
                let g = &c.gates[gi];
                psi.apply_gate(g, &gate_matrix(&g.name, g.param, d).unwrap()).unwrap();
            }
            let v = DMatrix::from_column_slice(psi.amps.len(), 1, &psi.amps);
            let rho = &v * v.adjoint();
            let w = wigner_function(&rho, d, n).unwrap();
            let l = (d * d) as usize;

            // Initial product distribution, pushed through the gate maps.
            let preps: Vec<Vec<f64>> = c.basis_labels().iter().map(|&j| prep_distribution(j, d).unwrap()).collect();
            let mut pushed = vec![0.0; l.pow(n as u32)];
            for idx in 0..pushed.len() {
                let mut loc = decode(idx, l, n);
                let weight: f64 = loc.iter().zip(&preps).map(|(&x, p)| p[x]).product();
                if weight == 0.0 {
                    continue;
                }
                for gi in schedule(&c).order() {
                    apply_map(&c.gates[gi], d, &mut loc);
                }
                pushed[encode(&loc, l)] += weight;
            }
            for (i, (&a, &b)) in w.iter().zip(&pushed).enumerate() {
                assert!((a - b).abs() <= 1e-12, "point {i}: {a} vs {b}");
            }

            // Born rule on the first wire.
            let xi = meas_indicator(d).unwrap();
            for x in 0..d as usize {
                let born: f64 =
                    (0..psi.amps.len()).filter(|k| k % d as usize == x).map(|k| psi.amps[k].norm_sqr()).sum();
                let model: f64 = w.iter().enumerate().map(|(idx, &wu)| wu * xi[x][decode(idx, l, n)[0]]).sum();
                assert!((born - model).abs() <= 1e-12, "x={x}: {born} vs {model}");
            }
        }
    }
}

fn decode(mut idx: usize, l: usize, n: usize) -> Vec<usize> {
    let mut out = vec![0; n];
    for slot in out.iter_mut().rev() {
        *slot = idx % l;
        idx /= l;
    }
    out
}

fn encode(loc: &[usize], l: usize) -> usize {
    loc.iter().fold(0, |acc, &x| acc * l + x)
}

fn apply_map(g: &GateApp, d: u32, loc: &mut [usize]) {
    let map = symplectic_for_gate(&g.name, g.param, d).unwrap();
    let coords: Vec<u32> = g
        .wires
        .iter()
        .flat_map(|&w| {
            let p = PhasePoint::from_index(loc[w], d);
            [p.q, p.p]
        })
        .collect();
    let out = map.apply(&coords);
    for (k, &w) in g.wires.iter().enumerate() {
        loc[w] = PhasePoint::new(out[2 * k], out[2 * k + 1]).index(d);
    }
}

fn random_map(rng: &mut ChaCha8Rng, table: &[AffineSymplectic], d: u32) -> AffineSymplectic {
    let arity = table[0].arity();
    let mut m = AffineSymplectic::identity(d, arity);
    for _ in 0..rng.gen_range(1..6) {
        m = m.then(table.choose(rng).unwrap());
    }
    let shift: Vec<u32> = (0..2 * arity).map(|_| rng.gen_range(0..d)).collect();
    m.then(&AffineSymplectic::translation(d, shift).unwrap())
}

#[test]
fn composition_closure() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut checked = 0;
    for d in [3u32, 5, 7] {
        let table = GateTable::clifford(d).unwrap();
        let ones: Vec<AffineSymplectic> =
            table.iter().filter(|(_, m)| m.arity() == 1).map(|(_, m)| m.clone()).collect();
        for _ in 0..3000 {
            let f = random_map(&mut rng, &ones, d);
            let g = random_map(&mut rng, &ones, d);
            let fg = f.then(&g);
            assert!(fg.is_symplectic());
            assert_eq!(fg.det2(), Some(1));
            let (pf, pg) = (f.permutation(), g.permutation());
            let composed: Vec<u32> = pf.iter().map(|&x| pg[x as usize]).collect();
            assert_eq!(fg.permutation(), composed);
            checked += 1;
        }
    }
    // Two-wire maps, including local maps lifted to one wire of the pair.
    let d = 3;
    let table = GateTable::clifford(d).unwrap();
    let mut twos: Vec<AffineSymplectic> =
        table.iter().filter(|(_, m)| m.arity() == 2).map(|(_, m)| m.clone()).collect();
    for (_, m) in table.iter().filter(|(_, m)| m.arity() == 1) {
        twos.push(lift(m, 0));
        twos.push(lift(m, 1));
    }
    for _ in 0..1000 {
        let f = random_map(&mut rng, &twos, d);
        let g = random_map(&mut rng, &twos, d);
        let fg = f.then(&g);
        assert!(fg.is_symplectic());
        let (pf, pg) = (f.permutation(), g.permutation());
        let composed: Vec<u32> = pf.iter().map(|&x| pg[x as usize]).collect();
        assert_eq!(fg.permutation(), composed);
        checked += 1;
    }
    assert_eq!(checked, 10_000);
}

fn lift(m: &AffineSymplectic, wire: usize) -> AffineSymplectic {
    let d = m.dim();
    let mut matrix = vec![0u32; 16];
    for i in 0..4 {
        matrix[i * 4 + i] = 1;
    }
    let s = m.matrix();
    let o = 2 * wire;
    for r in 0..2 {
        for c in 0..2 {
            matrix[(o + r) * 4 + o + c] = s[r * 2 + c];
        }
    }
    let mut shift = vec![0u32; 4];
    shift[o] = m.shift()[0];
    shift[o + 1] = m.shift()[1];
    AffineSymplectic::new(d, matrix, shift).unwrap()
}
