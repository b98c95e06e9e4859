//! Column-stochastic matrices and their stochastic inverses.
//!
//! An invertible stochastic map whose inverse is again stochastic is a
//! permutation. [`stochastic_inverse`] computes the ordinary matrix inverse
//! and accepts it only if it is itself stochastic, so it never assumes that fact.

use thiserror::Error;

const TOL: f64 = 1e-12;
/// Pivots below this are treated as singular.
const PIVOT_TOL: f64 = 1e-12;
/// Inverse entries this far below zero are rounding noise.
const NEG_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StochasticError {
    #[error("expected {expected} entries for a {n}×{n} matrix, got {got}")]
    Shape { n: usize, expected: usize, got: usize },
    #[error("entry ({row}, {col}) = {value} is negative")]
    Negative { row: usize, col: usize, value: f64 },
    #[error("column {col} sums to {sum}, not 1")]
    ColumnSum { col: usize, sum: f64 },
    #[error("index {0} is not a permutation image")]
    NotPermutation(usize),
}

/// `τ(λ' | λ)` stored row-major as `entry(λ', λ)`; columns sum to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct StochasticMap {
    n: usize,
    entries: Vec<f64>,
}

impl StochasticMap {
    pub fn new(n: usize, entries: Vec<f64>) -> Result<Self, StochasticError> {
        if entries.len() != n * n {
            return Err(StochasticError::Shape { n, expected: n * n, got: entries.len() });
        }
        for col in 0..n {
            let mut sum = 0.0;
            for row in 0..n {
                let value = entries[row * n + col];
                if value.is_nan() || value < 0.0 {
                    return Err(StochasticError::Negative { row, col, value });
                }
                sum += value;
            }
            if (sum - 1.0).abs() > TOL {
                return Err(StochasticError::ColumnSum { col, sum });
            }
        }
        Ok(Self { n, entries })
    }

    /// Deterministic map sending `λ` to `image[λ]`.
    pub fn from_permutation(image: &[usize]) -> Result<Self, StochasticError> {
        let n = image.len();
        let mut entries = vec![0.0; n * n];
        let mut hit = vec![false; n];
        for (from, &to) in image.iter().enumerate() {
            if to >= n || std::mem::replace(&mut hit[to], true) {
                return Err(StochasticError::NotPermutation(to));
            }
            entries[to * n + from] = 1.0;
        }
        Ok(Self { n, entries })
    }

    pub fn identity(n: usize) -> Self {
        Self::from_permutation(&(0..n).collect::<Vec<_>>()).unwrap()
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn entry(&self, to: usize, from: usize) -> f64 {
        self.entries[to * self.n + from]
    }

    /// Matrix product `self · other`: apply `other` first.
    pub fn compose(&self, other: &StochasticMap) -> StochasticMap {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut entries = vec![0.0; n * n];
        for r in 0..n {
            for k in 0..n {
                let a = self.entry(r, k);
                if a == 0.0 {
                    continue;
                }
                for c in 0..n {
                    entries[r * n + c] += a * other.entry(k, c);
                }
            }
        }
        StochasticMap { n, entries }
    }

    /// The image table if this is a 0/1 permutation matrix.
    pub fn as_permutation(&self) -> Option<Vec<usize>> {
        let n = self.n;
        let mut image = Vec::with_capacity(n);
        let mut hit = vec![false; n];
        for col in 0..n {
            let mut target = None;
            for row in 0..n {
                let v = self.entry(row, col);
                if (v - 1.0).abs() <= TOL {
                    if target.replace(row).is_some() {
                        return None;
                    }
                } else if v.abs() > TOL {
                    return None;
                }
            }
            let row = target?;
            if std::mem::replace(&mut hit[row], true) {
                return None;
            }
            image.push(row);
        }
        Some(image)
    }

    pub fn approx_eq(&self, other: &StochasticMap, tol: f64) -> bool {
        self.n == other.n && self.entries.iter().zip(&other.entries).all(|(a, b)| (a - b).abs() <= tol)
    }
}

/// True iff `t` is a 0/1 permutation matrix: each column has a single unit
/// entry and no two columns share a row.
pub fn is_deterministic(t: &StochasticMap) -> bool {
    t.as_permutation().is_some()
}

/// The stochastic matrix `s` with `s·t = t·s = I`, if one exists.
pub fn stochastic_inverse(t: &StochasticMap) -> Option<StochasticMap> {
    let n = t.n;
    // Gauss–Jordan on [t | I] with partial pivoting.
    let w = 2 * n;
    let mut aug = vec![0.0; n * w];
    for r in 0..n {
        for c in 0..n {
            aug[r * w + c] = t.entry(r, c);
        }
        aug[r * w + n + r] = 1.0;
    }
    for col in 0..n {
        let pivot = (col..n).max_by(|&a, &b| aug[a * w + col].abs().total_cmp(&aug[b * w + col].abs()))?;
        if aug[pivot * w + col].abs() < PIVOT_TOL {
            return None;
        }
        if pivot != col {
            for c in 0..w {
                aug.swap(pivot * w + c, col * w + c);
            }
        }
        let p = aug[col * w + col];
        for c in 0..w {
            aug[col * w + c] /= p;
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let f = aug[r * w + col];
            if f == 0.0 {
                continue;
            }
            for c in 0..w {
                aug[r * w + c] -= f * aug[col * w + c];
            }
        }
    }
    let mut inv = vec![0.0; n * n];
    for r in 0..n {
        for c in 0..n {
            let v = aug[r * w + n + c];
            if v < -NEG_TOL {
                return None;
            }
            inv[r * n + c] = v.max(0.0);
        }
    }
    // Column sums of an inverse of a column-stochastic matrix are 1 up to rounding.
    for c in 0..n {
        let sum: f64 = (0..n).map(|r| inv[r * n + c]).sum();
        if (sum - 1.0).abs() > 1e-9 {
            return None;
        }
        for r in 0..n {
            inv[r * n + c] /= sum;
        }
    }
    let s = StochasticMap { n, entries: inv };
    let id = StochasticMap::identity(n);
    (s.compose(t).approx_eq(&id, 1e-9) && t.compose(&s).approx_eq(&id, 1e-9)).then_some(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_permutation() {
        let t = StochasticMap::from_permutation(&[1, 2, 0]).unwrap();
        assert!(is_deterministic(&t));
        let inv = stochastic_inverse(&t).unwrap();
        assert_eq!(inv.as_permutation(), Some(vec![2, 0, 1]));
    }

    #[test]
    fn uniform_two_by_two() {
        let t = StochasticMap::new(2, vec![0.5; 4]).unwrap();
        assert!(!is_deterministic(&t));
        assert_eq!(stochastic_inverse(&t), None);
    }

    #[test]
    fn identity_is_its_own_inverse() {
        let id = StochasticMap::identity(4);
        assert!(is_deterministic(&id));
        assert_eq!(stochastic_inverse(&id).unwrap(), id);
    }

    #[test]
    fn invertible_but_not_stochastically() {
        // Nonsingular, yet its inverse has negative entries.
        let t = StochasticMap::new(2, vec![0.75, 0.25, 0.25, 0.75]).unwrap();
        assert!(!is_deterministic(&t));
        assert_eq!(stochastic_inverse(&t), None);
    }

    #[test]
    fn many_to_one_is_not_deterministic_bijection() {
        let t = StochasticMap::new(2, vec![1.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(!is_deterministic(&t));
        assert_eq!(stochastic_inverse(&t), None);
    }

    #[test]
    fn constructor_checks() {
        assert!(matches!(StochasticMap::new(2, vec![1.0; 3]), Err(StochasticError::Shape { .. })));
        assert!(matches!(StochasticMap::new(2, vec![1.5, 0.0, -0.5, 1.0]), Err(StochasticError::Negative { .. })));
        assert!(matches!(StochasticMap::new(2, vec![0.5, 0.0, 0.4, 1.0]), Err(StochasticError::ColumnSum { .. })));
        assert!(StochasticMap::from_permutation(&[0, 0]).is_err());
    }
}
