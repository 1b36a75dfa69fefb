#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sumset_core::{generates_full_lattice, normalize_to_origin, IntVector, LatticePointSet};

pub const SUITE_SEED: u64 = 20_240_601;
pub const SUITE_SIZE: usize = 200;

pub fn set(points: &[&[i64]]) -> LatticePointSet {
    LatticePointSet::from_i64(points).unwrap()
}

pub fn ints(v: &[i64]) -> LatticePointSet {
    LatticePointSet::from_points(1, v.iter().map(|&x| IntVector::from_i64(&[x]))).unwrap()
}

/// `m` distinct points of `[-r, r]^n`.
pub fn random_set(rng: &mut ChaCha8Rng, n: usize, m: usize, r: i64) -> LatticePointSet {
    let mut pts = BTreeSet::new();
    while pts.len() < m {
        let p: Vec<i64> = (0..n).map(|_| rng.gen_range(-r..=r)).collect();
        pts.insert(p);
    }
    LatticePointSet::from_points(n, pts.iter().map(|p| IntVector::from_i64(p))).unwrap()
}

/// Random sets with `n ∈ {1,2,3}`, `max(3, n+1) <= |A| <= 6` and coordinates
/// in `[-3, 3]`, kept when their differences generate `Z^n`, then moved so
/// that they contain the origin.
pub fn suite_with(seed: u64, size: usize) -> Vec<LatticePointSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(size);
    while out.len() < size {
        let n = rng.gen_range(1..=3usize);
        let m = rng.gen_range(3.max(n + 1)..=6usize);
        let a = random_set(&mut rng, n, m, 3);
        if !generates_full_lattice(&a).unwrap() {
            continue;
        }
        out.push(normalize_to_origin(&a).unwrap().0);
    }
    out
}

pub fn suite() -> Vec<LatticePointSet> {
    suite_with(SUITE_SEED, SUITE_SIZE)
}
