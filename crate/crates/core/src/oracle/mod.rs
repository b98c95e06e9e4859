//! Exact dense simulation used as ground truth.
//!
//! Everything here works on explicit complex matrices and amplitude vectors.
//! Wire `w` is the base-`d` digit of weight `d^w` in a basis index
//! (little-endian), both for full states and for the two-wire gate matrices,
//! where the first listed wire is the low digit.

mod gates;
mod phase_space;
mod statevector;

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

pub use gates::{gate_matrix, ORACLE_GATES};
pub use phase_space::{
    derive_symplectic, negativity, phase_point_operator, phase_point_operators, tensor_le, weyl_operator,
    wigner_function, DERIVE_ENTRY_CAP,
};
pub use statevector::{exact_quantum_distribution, StateVector, DEFAULT_AMPLITUDE_CAP};

/// Dense `d^k × d^k` complex operator.
pub type DenseOperator = DMatrix<Complex64>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("dimension {0} is not an odd prime")]
    BadDimension(u32),
    #[error("unknown gate {0}")]
    UnknownGate(String),
    #[error("gate {0} requires a parameter")]
    MissingParam(String),
    #[error("gate {name}: invalid parameter {param}")]
    BadParam { name: String, param: u32 },
    #[error("operator of size {got} does not act on {wires} wire(s) of dimension {dim}")]
    ArityMismatch { got: usize, wires: usize, dim: u32 },
    #[error("state needs {needed} amplitudes, cap is {cap}")]
    CapExceeded { needed: u128, cap: usize },
    #[error("gate is not Clifford / has no deterministic phase-space action: {0}")]
    NotClifford(String),
    #[error("invalid density operator: {0}")]
    InvalidDensity(String),
    #[error("quasiprobability table sums to {0}, not 1")]
    Unnormalized(f64),
}

pub(crate) fn omega(d: u32, k: i64) -> Complex64 {
    let k = k.rem_euclid(d as i64) as f64;
    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k / d as f64)
}

/// `U† U = I` within `tol`.
pub fn is_unitary(u: &DenseOperator, tol: f64) -> bool {
    if !u.is_square() {
        return false;
    }
    let prod = u.adjoint() * u;
    let id = DenseOperator::identity(u.nrows(), u.ncols());
    (prod - id).iter().all(|z| z.norm() <= tol)
}
