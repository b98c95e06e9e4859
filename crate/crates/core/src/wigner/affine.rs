use std::fmt;

use super::WignerError;
use crate::modular::reduce;

/// A point `(q, p)` of the single-qudit phase space `Z_d × Z_d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PhasePoint {
    pub q: u32,
    pub p: u32,
}

impl PhasePoint {
    pub fn new(q: u32, p: u32) -> Self {
        Self { q, p }
    }

    /// Local ontic index `q·d + p`.
    #[inline]
    pub fn index(self, d: u32) -> usize {
        (self.q * d + self.p) as usize
    }

    #[inline]
    pub fn from_index(i: usize, d: u32) -> Self {
        let i = i as u32;
        Self { q: i / d, p: i % d }
    }
}

/// The affine map `u ↦ S u + a` on the phase space of one or two qudits.
///
/// Coordinates are ordered `(q₁, p₁)` for one wire and `(q₁, p₁, q₂, p₂)` for
/// two, the first pair belonging to the first (control) wire. `S` is stored
/// row-major and preserves the symplectic form `J = ⊕ [[0, 1], [−1, 0]]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AffineSymplectic {
    dim: u32,
    arity: usize,
    matrix: Vec<u32>,
    shift: Vec<u32>,
}

fn symplectic_form(r: usize, c: usize) -> i64 {
    if r / 2 != c / 2 {
        return 0;
    }
    match (r % 2, c % 2) {
        (0, 1) => 1,
        (1, 0) => -1,
        _ => 0,
    }
}

impl AffineSymplectic {
    pub fn new(dim: u32, matrix: Vec<u32>, shift: Vec<u32>) -> Result<Self, WignerError> {
        let n = shift.len();
        if !(n == 2 || n == 4) || matrix.len() != n * n {
            return Err(WignerError::BadAffineShape { matrix: matrix.len(), shift: n });
        }
        let matrix: Vec<u32> = matrix.into_iter().map(|x| x % dim).collect();
        let shift: Vec<u32> = shift.into_iter().map(|x| x % dim).collect();
        let map = Self { dim, arity: n / 2, matrix, shift };
        if !map.is_symplectic() {
            return Err(WignerError::NotSymplectic);
        }
        Ok(map)
    }

    pub fn identity(dim: u32, arity: usize) -> Self {
        let n = 2 * arity;
        let matrix = (0..n * n).map(|i| u32::from(i / n == i % n)).collect();
        Self { dim, arity, matrix, shift: vec![0; n] }
    }

    pub fn translation(dim: u32, shift: Vec<u32>) -> Result<Self, WignerError> {
        let n = shift.len();
        Self::new(dim, Self::identity(dim, n / 2).matrix, shift)
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn matrix(&self) -> &[u32] {
        &self.matrix
    }

    pub fn shift(&self) -> &[u32] {
        &self.shift
    }

    fn n(&self) -> usize {
        2 * self.arity
    }

    /// `Sᵀ J S ≡ J (mod d)`.
    pub fn is_symplectic(&self) -> bool {
        let n = self.n();
        let s = |r: usize, c: usize| self.matrix[r * n + c] as i64;
        (0..n).all(|r| {
            (0..n).all(|c| {
                let mut acc = 0i64;
                for i in 0..n {
                    for j in 0..n {
                        acc += s(i, r) * symplectic_form(i, j) * s(j, c);
                    }
                }
                reduce(acc - symplectic_form(r, c), self.dim) == 0
            })
        })
    }

    /// Determinant of the 2×2 block for single-wire maps.
    pub fn det2(&self) -> Option<u32> {
        (self.arity == 1).then(|| {
            let m = &self.matrix;
            reduce(m[0] as i64 * m[3] as i64 - m[1] as i64 * m[2] as i64, self.dim)
        })
    }

    /// Image of a coordinate vector.
    pub fn apply(&self, u: &[u32]) -> Vec<u32> {
        let n = self.n();
        debug_assert_eq!(u.len(), n);
        (0..n)
            .map(|r| {
                let mut acc = self.shift[r] as u64;
                for c in 0..n {
                    acc += self.matrix[r * n + c] as u64 * u[c] as u64;
                }
                (acc % self.dim as u64) as u32
            })
            .collect()
    }

    /// The map applying `self` first and then `next`: `(S₂S₁, S₂a₁ + a₂)`.
    pub fn then(&self, next: &AffineSymplectic) -> AffineSymplectic {
        assert_eq!((self.dim, self.arity), (next.dim, next.arity));
        let n = self.n();
        let mut matrix = vec![0u32; n * n];
        for r in 0..n {
            for c in 0..n {
                let acc: u64 = (0..n).map(|k| next.matrix[r * n + k] as u64 * self.matrix[k * n + c] as u64).sum();
                matrix[r * n + c] = (acc % self.dim as u64) as u32;
            }
        }
        let shift = next.apply(&self.shift);
        AffineSymplectic { dim: self.dim, arity: self.arity, matrix, shift }
    }

    /// The induced permutation of ontic indices. Single-wire index is
    /// `q·d + p`; two-wire index is `λ₁·d² + λ₂`.
    pub fn permutation(&self) -> Vec<u32> {
        let d = self.dim;
        let l = (d * d) as usize;
        match self.arity {
            1 => (0..l)
                .map(|i| {
                    let u = PhasePoint::from_index(i, d);
                    let v = self.apply(&[u.q, u.p]);
                    PhasePoint::new(v[0], v[1]).index(d) as u32
                })
                .collect(),
            _ => (0..l * l)
                .map(|i| {
                    let a = PhasePoint::from_index(i / l, d);
                    let b = PhasePoint::from_index(i % l, d);
                    let v = self.apply(&[a.q, a.p, b.q, b.p]);
                    (PhasePoint::new(v[0], v[1]).index(d) * l + PhasePoint::new(v[2], v[3]).index(d)) as u32
                })
                .collect(),
        }
    }
}

impl fmt::Display for AffineSymplectic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.n();
        write!(f, "S=[")?;
        for r in 0..n {
            if r > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.matrix[r * n..(r + 1) * n].iter().map(u32::to_string).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "] a=({}) mod {}", self.shift.iter().map(u32::to_string).collect::<Vec<_>>().join(", "), self.dim)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_symplectic() {
        // diag(2, 1) has determinant 2 ≢ 1 mod 3.
        assert_eq!(AffineSymplectic::new(3, vec![2, 0, 0, 1], vec![0, 0]), Err(WignerError::NotSymplectic));
        assert!(AffineSymplectic::new(3, vec![2, 0, 0, 2, 0], vec![0, 0]).is_err());
    }

    #[test]
    fn identity_and_translation() {
        let id = AffineSymplectic::identity(5, 2);
        assert!(id.is_symplectic());
        assert_eq!(id.apply(&[1, 2, 3, 4]), vec![1, 2, 3, 4]);
        let t = AffineSymplectic::translation(5, vec![1, 0]).unwrap();
        assert_eq!(t.apply(&[4, 2]), vec![0, 2]);
        assert_eq!(t.det2(), Some(1));
    }

    #[test]
    fn permutation_is_bijective() {
        let s = AffineSymplectic::new(3, vec![1, 0, 0, 0, 0, 1, 1, 0, 0, 0, 1, 0, 1, 0, 0, 1], vec![0; 4]).unwrap();
        let mut perm = s.permutation();
        assert_eq!(perm.len(), 81);
        perm.sort_unstable();
        assert!(perm.iter().enumerate().all(|(i, &v)| i as u32 == v));
    }
}
