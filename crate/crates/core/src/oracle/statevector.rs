use std::collections::{BTreeMap, HashMap};

use num_complex::Complex64;

use super::{gate_matrix, DenseOperator, OracleError};
use crate::circuit::{schedule, Circuit, GateApp};
use crate::stats::{Distribution, Outcome};

/// Default amplitude cap, `3^12`.
pub const DEFAULT_AMPLITUDE_CAP: usize = 531_441;

/// Probabilities below this are treated as numerical zeros and dropped.
const ZERO_CUTOFF: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    pub dim: u32,
    pub n_wires: usize,
    pub amps: Vec<Complex64>,
}

impl StateVector {
    /// Product of computational basis states, `labels[w]` on wire `w`.
    pub fn basis(dim: u32, labels: &[u32], cap: usize) -> Result<Self, OracleError> {
        let needed = (dim as u128).checked_pow(labels.len() as u32).unwrap_or(u128::MAX);
        if needed > cap as u128 {
            return Err(OracleError::CapExceeded { needed, cap });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); needed as usize];
        let index: usize = labels.iter().rev().fold(0, |acc, &j| acc * dim as usize + j as usize);
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { dim, n_wires: labels.len(), amps })
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(Complex64::norm_sqr).sum()
    }

    /// Applies `matrix` on the wires of `g`. The first wire of `g` is the low
    /// digit of the matrix index.
    pub fn apply_gate(&mut self, g: &GateApp, matrix: &DenseOperator) -> Result<(), OracleError> {
        let d = self.dim as usize;
        let local = d.pow(g.wires.len() as u32);
        if matrix.nrows() != local || matrix.ncols() != local {
            return Err(OracleError::ArityMismatch { got: matrix.nrows(), wires: g.wires.len(), dim: self.dim });
        }
        if let Some(&w) = g.wires.iter().find(|&&w| w >= self.n_wires) {
            return Err(OracleError::ArityMismatch { got: w, wires: self.n_wires, dim: self.dim });
        }
        let strides: Vec<usize> = g.wires.iter().map(|&w| d.pow(w as u32)).collect();
        // Offsets of each local basis index relative to a base index whose
        // gate digits are all zero.
        let offsets: Vec<usize> = (0..local)
            .map(|l| {
                let mut rest = l;
                strides
                    .iter()
                    .map(|s| {
                        let digit = rest % d;
                        rest /= d;
                        digit * s
                    })
                    .sum()
            })
            .collect();
        let mut buf = vec![Complex64::new(0.0, 0.0); local];
        for base in 0..self.amps.len() {
            if strides.iter().any(|&s| (base / s) % d != 0) {
                continue;
            }
            for (b, &o) in buf.iter_mut().zip(&offsets) {
                *b = self.amps[base + o];
            }
            for (r, &o) in offsets.iter().enumerate() {
                let mut acc = Complex64::new(0.0, 0.0);
                for (c, b) in buf.iter().enumerate() {
                    acc += matrix[(r, c)] * b;
                }
                self.amps[base + o] = acc;
            }
        }
        Ok(())
    }

    /// Marginal distribution of the computational-basis measurement of `measured`.
    pub fn measurement_distribution(&self, measured: &[usize]) -> Distribution {
        let d = self.dim as usize;
        let strides: Vec<usize> = measured.iter().map(|&w| d.pow(w as u32)).collect();
        let mut acc: HashMap<Vec<u8>, f64> = HashMap::new();
        for (i, a) in self.amps.iter().enumerate() {
            let p = a.norm_sqr();
            if p == 0.0 {
                continue;
            }
            let key: Vec<u8> = strides.iter().map(|&s| ((i / s) % d) as u8).collect();
            *acc.entry(key).or_insert(0.0) += p;
        }
        let weights: BTreeMap<Outcome, f64> =
            acc.into_iter().filter(|&(_, p)| p > ZERO_CUTOFF).map(|(k, p)| (Outcome(k), p)).collect();
        Distribution::from_probabilities(weights).expect("unitary evolution preserves the norm")
    }
}

/// Exact output distribution of `c`: the basis-state input evolved through the
/// scheduled gates, then marginalized onto the measured wires.
pub fn exact_quantum_distribution(c: &Circuit, cap: usize) -> Result<Distribution, OracleError> {
    let mut psi = StateVector::basis(c.dim, &c.basis_labels(), cap)?;
    let mut cache: HashMap<String, DenseOperator> = HashMap::new();
    for gi in schedule(c).order() {
        let g = &c.gates[gi];
        let key = g.table_key();
        if !cache.contains_key(&key) {
            cache.insert(key.clone(), gate_matrix(&g.name, g.param, c.dim)?);
        }
        psi.apply_gate(g, &cache[&key])?;
    }
    Ok(psi.measurement_distribution(&c.measured))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::parse_circuit;

    fn dist(text: &str) -> Distribution {
        exact_quantum_distribution(&parse_circuit(text).unwrap(), DEFAULT_AMPLITUDE_CAP).unwrap()
    }

    fn o(s: &str) -> Outcome {
        s.parse().unwrap()
    }

    #[test]
    fn shift_on_basis_state() {
        let mut psi = StateVector::basis(3, &[1], 10).unwrap();
        psi.apply_gate(&GateApp::new("X", &[0]), &gate_matrix("X", None, 3).unwrap()).unwrap();
        assert_eq!(psi.amps[2], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn sum_on_two_wires() {
        let mut psi = StateVector::basis(3, &[1, 0], 100).unwrap();
        psi.apply_gate(&GateApp::new("SUM", &[0, 1]), &gate_matrix("SUM", None, 3).unwrap()).unwrap();
        // |1,1⟩ = index 1 + 3·1
        assert!((psi.amps[4].re - 1.0).abs() < 1e-15);
        // Reversed roles: wire 1 controls wire 0 → |1,0⟩ unchanged.
        let mut psi = StateVector::basis(3, &[1, 0], 100).unwrap();
        psi.apply_gate(&GateApp::new("SUM", &[1, 0]), &gate_matrix("SUM", None, 3).unwrap()).unwrap();
        assert!((psi.amps[1].re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn fourier_gives_uniform_amplitudes() {
        let mut psi = StateVector::basis(3, &[0], 10).unwrap();
        psi.apply_gate(&GateApp::new("F", &[0]), &gate_matrix("F", None, 3).unwrap()).unwrap();
        for a in &psi.amps {
            assert!((a - Complex64::new(1.0 / 3f64.sqrt(), 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn distribution_examples() {
        let p = dist("dim 3\nwires 1\nprep 0 basis 1\nmeasure 0");
        assert_eq!(p.get(&o("1")), 1.0);
        let p = dist("dim 3\nwires 1\nprep 0 basis 0\ngate F 0\nmeasure 0");
        for x in ["0", "1", "2"] {
            assert!((p.get(&o(x)) - 1.0 / 3.0).abs() < 1e-12);
        }
        let p = dist("dim 3\nwires 2\nprep 0 basis 1\nprep 1 basis 0\ngate SUM 0 1\nmeasure 0 1");
        assert!((p.get(&o("11")) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unmeasured_wires_are_traced_out() {
        let p = dist("dim 3\nwires 2\nprep 0 basis 0\nprep 1 basis 2\ngate F 0\ngate SUM 0 1\nmeasure 1");
        for x in ["0", "1", "2"] {
            assert!((p.get(&o(x)) - 1.0 / 3.0).abs() < 1e-12);
        }
        let p = dist("dim 3\nwires 1\nprep 0 basis 2\nmeasure");
        assert_eq!(p.get(&Outcome::default()), 1.0);
    }

    #[test]
    fn cap_is_enforced() {
        let c = parse_circuit("dim 3\nwires 3\nprep 0 basis 0\nprep 1 basis 0\nprep 2 basis 0\nmeasure 0").unwrap();
        assert!(matches!(exact_quantum_distribution(&c, 26), Err(OracleError::CapExceeded { needed: 27, .. })));
        assert!(exact_quantum_distribution(&c, 27).is_ok());
    }

    #[test]
    fn arity_mismatch() {
        let mut psi = StateVector::basis(3, &[0, 0], 100).unwrap();
        let err = psi.apply_gate(&GateApp::new("X", &[0]), &gate_matrix("SUM", None, 3).unwrap());
        assert!(matches!(err, Err(OracleError::ArityMismatch { .. })));
    }
}
