//! Discrete Wigner representation for odd prime `d`.
//!
//! Displacements are `T(q,p) = ω^{−qp/2} Z^p X^q`, the parity-type operator is
//! `A₀ = (1/d) Σ_u T_u` and `A_u = T_u A₀ T_u†`. Multi-wire phase-point
//! operators are tensor products, and multi-wire tables index a point as
//! `λ₁·L^{k−1} + … + λ_k` (first wire most significant) with `λ = q·d + p`.

use nalgebra::SymmetricEigen;
use num_complex::Complex64;

use super::{is_unitary, omega, DenseOperator, OracleError};
use crate::modular::{half, is_odd_prime};
use crate::wigner::{AffineSymplectic, PhasePoint};

fn check_dim(d: u32) -> Result<(), OracleError> {
    if is_odd_prime(d) {
        Ok(())
    } else {
        Err(OracleError::BadDimension(d))
    }
}

fn shift_and_clock(d: u32) -> (DenseOperator, DenseOperator) {
    let n = d as usize;
    let mut x = DenseOperator::zeros(n, n);
    let mut z = DenseOperator::zeros(n, n);
    for k in 0..n {
        x[((k + 1) % n, k)] = Complex64::new(1.0, 0.0);
        z[(k, k)] = omega(d, k as i64);
    }
    (x, z)
}

fn matrix_power(m: &DenseOperator, k: u32) -> DenseOperator {
    let mut out = DenseOperator::identity(m.nrows(), m.ncols());
    for _ in 0..k {
        out = &out * m;
    }
    out
}

/// `T(q,p) = ω^{−qp/2} Z^p X^q`.
pub fn weyl_operator(q: u32, p: u32, d: u32) -> DenseOperator {
    let (x, z) = shift_and_clock(d);
    let phase = omega(d, -((half(d) as i64 * q as i64 % d as i64) * p as i64));
    matrix_power(&z, p) * matrix_power(&x, q) * phase
}

/// The `d²` single-wire phase-point operators, indexed by `q·d + p`.
pub fn phase_point_operators(d: u32) -> Result<Vec<DenseOperator>, OracleError> {
    check_dim(d)?;
    let n = d as usize;
    let weyl: Vec<DenseOperator> = (0..n * n)
        .map(|i| {
            let u = PhasePoint::from_index(i, d);
            weyl_operator(u.q, u.p, d)
        })
        .collect();
    let mut a0 = DenseOperator::zeros(n, n);
    for t in &weyl {
        a0 += t;
    }
    a0 /= Complex64::new(d as f64, 0.0);
    Ok(weyl.iter().map(|t| t * &a0 * t.adjoint()).collect())
}

/// Tensor product with `ops[0]` on the least significant digit.
pub fn tensor_le(ops: &[&DenseOperator]) -> DenseOperator {
    let (last, rest) = ops.split_last().expect("at least one factor");
    let mut out = (*last).clone();
    for op in rest.iter().rev() {
        out = out.kronecker(*op);
    }
    out
}

fn decode_point(index: usize, d: u32, k: usize) -> Vec<usize> {
    let l = (d * d) as usize;
    (0..k).map(|i| (index / l.pow((k - 1 - i) as u32)) % l).collect()
}

/// Phase-point operator of a `k`-wire point given as per-wire local indices.
pub fn phase_point_operator(table: &[DenseOperator], locals: &[usize]) -> DenseOperator {
    let factors: Vec<&DenseOperator> = locals.iter().map(|&l| &table[l]).collect();
    tensor_le(&factors)
}

fn tr_product(a: &DenseOperator, b: &DenseOperator) -> Complex64 {
    let n = a.nrows();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            acc += a[(i, j)] * b[(j, i)];
        }
    }
    acc
}

fn check_density(rho: &DenseOperator, tol: f64) -> Result<(), OracleError> {
    if (rho - rho.adjoint()).iter().any(|z| z.norm() > tol) {
        return Err(OracleError::InvalidDensity("not Hermitian".into()));
    }
    let tr = rho.trace();
    if (tr - Complex64::new(1.0, 0.0)).norm() > tol {
        return Err(OracleError::InvalidDensity(format!("trace {tr}")));
    }
    let min = SymmetricEigen::new(rho.clone()).eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    if min < -tol {
        return Err(OracleError::InvalidDensity(format!("eigenvalue {min}")));
    }
    Ok(())
}

/// `W(u) = d^{−k} Tr(ρ A_u)` over all `d^{2k}` points of `k` wires.
///
/// Also used for effects by passing `E / Tr E`, which need not be checked
/// further than Hermiticity, unit trace and positivity.
pub fn wigner_function(rho: &DenseOperator, d: u32, k: usize) -> Result<Vec<f64>, OracleError> {
    let table = phase_point_operators(d)?;
    let n = (d as usize).pow(k as u32);
    if rho.nrows() != n || rho.ncols() != n {
        return Err(OracleError::ArityMismatch { got: rho.nrows(), wires: k, dim: d });
    }
    check_density(rho, 1e-10)?;
    let points = (d as usize).pow(2 * k as u32);
    let scale = 1.0 / n as f64;
    let w: Vec<f64> = (0..points)
        .map(|i| {
            let a = phase_point_operator(&table, &decode_point(i, d, k));
            tr_product(rho, &a).re * scale
        })
        .collect();
    let total: f64 = w.iter().sum();
    if (total - 1.0).abs() > 1e-10 {
        return Err(OracleError::Unnormalized(total));
    }
    Ok(w)
}

/// `Σ_u |W(u)| − 1`, zero exactly for nonnegative tables.
pub fn negativity(w: &[f64]) -> Result<f64, OracleError> {
    let total: f64 = w.iter().sum();
    if (total - 1.0).abs() > 1e-8 {
        return Err(OracleError::Unnormalized(total));
    }
    Ok((w.iter().map(|x| x.abs()).sum::<f64>() - 1.0).max(0.0))
}

/// `U A U†` from the nonzero entries of `U`, in `O(nnz(U) · n)`.
fn conjugate(u: &[(usize, usize, Complex64)], a: &DenseOperator) -> DenseOperator {
    let n = a.nrows();
    let mut ua = DenseOperator::zeros(n, n);
    for &(i, k, v) in u {
        for j in 0..n {
            ua[(i, j)] += v * a[(k, j)];
        }
    }
    let mut out = DenseOperator::zeros(n, n);
    for &(l, j, v) in u {
        let vc = v.conj();
        for i in 0..n {
            out[(i, l)] += ua[(i, j)] * vc;
        }
    }
    out
}

fn frobenius_close(a: &DenseOperator, b: &DenseOperator, tol: f64) -> bool {
    let tol2 = tol * tol;
    let mut acc = 0.0;
    for (x, y) in a.iter().zip(b.iter()) {
        acc += (x - y).norm_sqr();
        if acc > tol2 {
            return false;
        }
    }
    true
}

/// Bound on the matrix entries held while deriving a phase-space action
/// (phase points × operator size). Two-wire gates fit for `d ≤ 7`.
pub const DERIVE_ENTRY_CAP: usize = 6_000_000;

/// Finds `(S, a)` with `U A_u U† = A_{Su+a}` for every point `u`, by matching
/// each conjugated phase-point operator against the table. Fails for gates
/// outside the Clifford group.
pub fn derive_symplectic(u: &DenseOperator, d: u32) -> Result<AffineSymplectic, OracleError> {
    let table = phase_point_operators(d)?;
    let n = u.nrows();
    let k = match n {
        _ if n == d as usize => 1,
        _ if n == (d * d) as usize => 2,
        _ => return Err(OracleError::ArityMismatch { got: n, wires: 0, dim: d }),
    };
    if !is_unitary(u, 1e-10) {
        return Err(OracleError::NotClifford("operator is not unitary".into()));
    }
    let l = (d * d) as usize;
    let points = l.pow(k as u32);
    let needed = (points * n * n) as u128;
    if needed > DERIVE_ENTRY_CAP as u128 {
        return Err(OracleError::CapExceeded { needed, cap: DERIVE_ENTRY_CAP });
    }
    let ops: Vec<DenseOperator> = (0..points).map(|i| phase_point_operator(&table, &decode_point(i, d, k))).collect();
    let nonzeros: Vec<(usize, usize, Complex64)> = (0..n)
        .flat_map(|c| (0..n).map(move |r| (r, c)))
        .map(|(r, c)| (r, c, u[(r, c)]))
        .filter(|&(_, _, v)| v != Complex64::new(0.0, 0.0))
        .collect();
    let coords = |i: usize| -> Vec<u32> {
        decode_point(i, d, k)
            .into_iter()
            .flat_map(|loc| {
                let pp = PhasePoint::from_index(loc, d);
                [pp.q, pp.p]
            })
            .collect()
    };
    let mut image = vec![0usize; points];
    for (i, a) in ops.iter().enumerate() {
        let conj = conjugate(&nonzeros, a);
        image[i] = ops.iter().position(|b| frobenius_close(&conj, b, 1e-8)).ok_or_else(|| {
            OracleError::NotClifford(format!("U A_u U† matches no phase-point operator at u={:?}", coords(i)))
        })?;
    }
    let dim2 = 2 * k;
    let index_of =
        |c: &[u32]| -> usize { c.chunks(2).fold(0, |acc, qp| acc * l + PhasePoint::new(qp[0], qp[1]).index(d)) };
    let shift = coords(image[0]);
    let mut matrix = vec![0u32; dim2 * dim2];
    for col in 0..dim2 {
        let mut e = vec![0u32; dim2];
        e[col] = 1;
        let img = coords(image[index_of(&e)]);
        for row in 0..dim2 {
            matrix[row * dim2 + col] = (img[row] + d - shift[row]) % d;
        }
    }
    let map = AffineSymplectic::new(d, matrix, shift)
        .map_err(|e| OracleError::NotClifford(format!("fitted map rejected: {e}")))?;
    for (i, &img) in image.iter().enumerate() {
        if index_of(&map.apply(&coords(i))) != img {
            return Err(OracleError::NotClifford("phase-space action is not affine".into()));
        }
    }
    Ok(map)
}
