//! A stochastic map has a stochastic inverse exactly when it is a permutation.

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ncomsim::ncom::{is_deterministic, stochastic_inverse, StochasticMap};

/// Every column with entries in {0, ½, 1} summing to one.
fn half_columns(n: usize) -> Vec<Vec<f64>> {
    let mut cols = Vec::new();
    for i in 0..n {
        let mut c = vec![0.0; n];
        c[i] = 1.0;
        cols.push(c);
        for j in i + 1..n {
            let mut c = vec![0.0; n];
            c[i] = 0.5;
            c[j] = 0.5;
            cols.push(c);
        }
    }
    cols
}

fn from_columns(cols: &[&Vec<f64>]) -> StochasticMap {
    let n = cols.len();
    let mut entries = vec![0.0; n * n];
    for (from, col) in cols.iter().enumerate() {
        for (to, &v) in col.iter().enumerate() {
            entries[to * n + from] = v;
        }
    }
    StochasticMap::new(n, entries).unwrap()
}

fn check(m: &StochasticMap) {
    let inv = stochastic_inverse(m);
    assert_eq!(inv.is_some(), is_deterministic(m), "{m:?}");
    if let Some(t) = inv {
        assert!(is_deterministic(&t));
        assert!(m.compose(&t).approx_eq(&StochasticMap::identity(m.size()), 1e-12));
    }
}

#[test]
fn exhaustive_half_integer_maps() {
    let mut total = 0usize;
    let mut invertible = 0usize;
    for n in 1..=4 {
        let cols = half_columns(n);
        let mut idx = vec![0usize; n];
        loop {
            let chosen: Vec<&Vec<f64>> = idx.iter().map(|&i| &cols[i]).collect();
            let m = from_columns(&chosen);
            check(&m);
            total += 1;
            invertible += usize::from(is_deterministic(&m));
            let mut k = 0;
            while k < n {
                idx[k] += 1;
                if idx[k] < cols.len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == n {
                break;
            }
        }
    }
    // 1 + 3² + 6³ + 10⁴ maps, of which 1! + 2! + 3! + 4! are permutations.
    assert_eq!(total, 1 + 9 + 216 + 10_000);
    assert_eq!(invertible, 1 + 2 + 6 + 24);
}

fn random_map(rng: &mut ChaCha8Rng) -> StochasticMap {
    let n = rng.gen_range(1..=6);
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    match rng.gen_range(0..4) {
        0 => StochasticMap::from_permutation(&perm).unwrap(),
        1 => {
            // A permutation with one column smeared.
            let mut entries = vec![0.0; n * n];
            for (from, &to) in perm.iter().enumerate() {
                entries[to * n + from] = 1.0;
            }
            if n > 1 {
                let col = rng.gen_range(0..n);
                let eps: f64 = rng.gen_range(1e-6..0.5);
                let other = (perm[col] + 1) % n;
                entries[perm[col] * n + col] = 1.0 - eps;
                entries[other * n + col] = eps;
            }
            StochasticMap::new(n, entries).unwrap()
        }
        2 => {
            // Deterministic but possibly many-to-one.
            let mut entries = vec![0.0; n * n];
            for from in 0..n {
                entries[rng.gen_range(0..n) * n + from] = 1.0;
            }
            StochasticMap::new(n, entries).unwrap()
        }
        _ => {
            let mut entries = vec![0.0; n * n];
            for from in 0..n {
                let raw: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
                let s: f64 = raw.iter().sum();
                for (to, r) in raw.into_iter().enumerate() {
                    entries[to * n + from] = r / s;
                }
            }
            StochasticMap::new(n, entries).unwrap()
        }
    }
}

#[test]
fn random_maps_up_to_six_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut permutations = 0;
    for _ in 0..10_000 {
        let m = random_map(&mut rng);
        check(&m);
        permutations += usize::from(is_deterministic(&m));
    }
    assert!(permutations > 2000, "{permutations}");
}

proptest! {
    #[test]
    fn permutation_inverse_round_trip(perm in Just((0..6usize).collect::<Vec<_>>()).prop_shuffle()) {
        let m = StochasticMap::from_permutation(&perm).unwrap();
        let t = stochastic_inverse(&m).unwrap();
        prop_assert!(t.compose(&m).approx_eq(&StochasticMap::identity(6), 1e-12));
        let inv = t.as_permutation().unwrap();
        for (x, &y) in perm.iter().enumerate() {
            prop_assert_eq!(inv[y], x);
        }
    }
}
