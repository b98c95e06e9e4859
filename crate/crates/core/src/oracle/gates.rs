use num_complex::Complex64;

use super::{omega, DenseOperator, OracleError};
use crate::modular::{half, inv_mod};

/// Gates with a dense definition. `T` is a non-Clifford diagonal gate.
pub const ORACLE_GATES: [&str; 9] = ["I", "X", "Z", "F", "P", "M_a", "SUM", "CZ", "T"];

fn diagonal(d: usize, phase: impl Fn(usize) -> Complex64) -> DenseOperator {
    DenseOperator::from_fn(d, d, |r, c| if r == c { phase(r) } else { Complex64::new(0.0, 0.0) })
}

fn basis_map(n: usize, image: impl Fn(usize) -> usize) -> DenseOperator {
    let mut m = DenseOperator::zeros(n, n);
    for x in 0..n {
        m[(image(x), x)] = Complex64::new(1.0, 0.0);
    }
    m
}

/// Dense matrix of a named gate.
///
/// * `X|x⟩ = |x+1⟩`, `Z|x⟩ = ω^x|x⟩`, `F|x⟩ = d^{-1/2} Σ_y ω^{xy}|y⟩`
/// * `P|x⟩ = ω^{x²/2}|x⟩` (with `1/2` the inverse of 2 mod d), `M_a|x⟩ = |ax⟩`
/// * `SUM|x,y⟩ = |x, x+y⟩`, `CZ|x,y⟩ = ω^{xy}|x,y⟩`
/// * `T`: for `d = 3`, `diag(1, e^{2πi/9}, e^{-2πi/9})`; otherwise `diag(ω^{x³})`.
///
/// Two-wire matrices index `|x,y⟩` as `x + d·y`.
pub fn gate_matrix(name: &str, param: Option<u32>, d: u32) -> Result<DenseOperator, OracleError> {
    let n = d as usize;
    let di = d as i64;
    let m = match name {
        "I" => DenseOperator::identity(n, n),
        "X" => basis_map(n, |x| (x + 1) % n),
        "Z" => diagonal(n, |x| omega(d, x as i64)),
        "F" => {
            let s = 1.0 / (d as f64).sqrt();
            DenseOperator::from_fn(n, n, |y, x| omega(d, (x * y) as i64) * s)
        }
        "P" => {
            let h = half(d) as i64;
            diagonal(n, |x| omega(d, h * (x as i64) * (x as i64) % di))
        }
        "M_a" => {
            let a = param.ok_or_else(|| OracleError::MissingParam(name.into()))?;
            if inv_mod(a, d).is_none() {
                return Err(OracleError::BadParam { name: name.into(), param: a });
            }
            basis_map(n, |x| (a as usize * x) % n)
        }
        "SUM" => basis_map(n * n, |i| {
            let (x, y) = (i % n, i / n);
            x + n * ((x + y) % n)
        }),
        "CZ" => diagonal(n * n, |i| omega(d, ((i % n) * (i / n)) as i64)),
        "T" => {
            if d == 3 {
                let [a, b, c] =
                    [0.0, 1.0, -1.0].map(|k: f64| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k / 9.0));
                diagonal(3, |x| [a, b, c][x])
            } else {
                diagonal(n, |x| omega(d, (x as i64).pow(3) % di))
            }
        }
        other => return Err(OracleError::UnknownGate(other.into())),
    };
    Ok(m)
}
