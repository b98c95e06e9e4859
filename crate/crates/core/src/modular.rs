//! Small integer helpers for arithmetic modulo an odd prime.

/// Largest qudit dimension the phase-space backends accept.
pub const MAX_DIM: u32 = 13;

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= n {
        if n.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

pub fn is_odd_prime(n: u32) -> bool {
    n % 2 == 1 && is_prime(n)
}

#[inline]
pub fn reduce(x: i64, d: u32) -> u32 {
    x.rem_euclid(d as i64) as u32
}

/// Multiplicative inverse of `a` modulo the prime `d`, or `None` when `a ≡ 0`.
pub fn inv_mod(a: u32, d: u32) -> Option<u32> {
    let a = a % d;
    if a == 0 {
        return None;
    }
    // Fermat: a^(d-2) mod d
    let mut result = 1u64;
    let mut base = a as u64;
    let mut exp = d - 2;
    let m = d as u64;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    Some(result as u32)
}

/// The inverse of 2 modulo an odd `d`.
#[inline]
pub fn half(d: u32) -> u32 {
    d.div_ceil(2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_up_to_thirteen() {
        let odd: Vec<u32> = (0..=13).filter(|&n| is_odd_prime(n)).collect();
        assert_eq!(odd, vec![3, 5, 7, 11, 13]);
        assert!(is_prime(2) && !is_odd_prime(2));
        assert!(!is_prime(9));
    }

    #[test]
    fn inverses() {
        for d in [3u32, 5, 7, 11, 13] {
            assert_eq!(inv_mod(0, d), None);
            for a in 1..d {
                let b = inv_mod(a, d).unwrap();
                assert_eq!(a * b % d, 1);
            }
            assert_eq!(2 * half(d) % d, 1);
        }
    }
}
