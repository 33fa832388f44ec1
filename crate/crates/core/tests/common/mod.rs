//! Brute-force reference implementations shared by the integration tests.
#![allow(dead_code)]

use cbf_core::discrete::DiscreteMassFunction;
use rand::Rng;

/// Dense mass vector over all `2^n` subsets.
pub fn dense(m: &DiscreteMassFunction) -> Vec<f64> {
    let n = m.frame_size();
    (0..1u32 << n).map(|s| m.mass(s)).collect()
}

fn subset(a: u32, b: u32) -> bool {
    a & !b == 0
}

pub fn bel(m: &[f64], x: u32) -> f64 {
    (1..m.len() as u32)
        .filter(|&y| subset(y, x))
        .map(|y| m[y as usize])
        .sum()
}

pub fn pl(m: &[f64], x: u32) -> f64 {
    (0..m.len() as u32)
        .filter(|&y| y & x != 0)
        .map(|y| m[y as usize])
        .sum()
}

pub fn q(m: &[f64], x: u32) -> f64 {
    (0..m.len() as u32)
        .filter(|&y| subset(x, y))
        .map(|y| m[y as usize])
        .sum()
}

/// Jaccard matrix entry from explicit element counting.
fn jaccard(a: u32, b: u32, n: usize) -> f64 {
    let (mut inter, mut union) = (0, 0);
    for k in 0..n {
        let (ia, ib) = (a >> k & 1 == 1, b >> k & 1 == 1);
        inter += (ia && ib) as u32;
        union += (ia || ib) as u32;
    }
    if union == 0 {
        1.0
    } else {
        inter as f64 / union as f64
    }
}

pub fn jousselme(m1: &[f64], m2: &[f64], n: usize) -> f64 {
    let size = m1.len();
    let diff: Vec<f64> = m1.iter().zip(m2).map(|(a, b)| a - b).collect();
    let mut quad = 0.0;
    for a in 0..size {
        for b in 0..size {
            quad += diff[a] * jaccard(a as u32, b as u32, n) * diff[b];
        }
    }
    (0.5 * quad).max(0.0).sqrt()
}

pub fn d_inc(m1: &[f64], m2: &[f64]) -> f64 {
    let f1: Vec<u32> = (1..m1.len() as u32)
        .filter(|&s| m1[s as usize] > 0.0)
        .collect();
    let f2: Vec<u32> = (1..m2.len() as u32)
        .filter(|&s| m2[s as usize] > 0.0)
        .collect();
    if f1.is_empty() || f2.is_empty() {
        return 0.0;
    }
    let mut count = 0;
    for &x in &f1 {
        for &y in &f2 {
            if subset(x, y) {
                count += 1;
            }
        }
    }
    count as f64 / (f1.len() * f2.len()) as f64
}

pub fn conflict(m1: &[f64], m2: &[f64], n: usize) -> f64 {
    let s = d_inc(m1, m2).max(d_inc(m2, m1));
    (1.0 - s) * jousselme(m1, m2, n)
}

/// Random mass function with 1 to 4 focal sets (sometimes including ∅).
pub fn random_bba<R: Rng>(rng: &mut R, n: usize) -> DiscreteMassFunction {
    let size = 1u32 << n;
    let k = rng.random_range(1..=4usize);
    let mut sets: Vec<u32> = (0..k)
        .map(|_| {
            if rng.random_bool(0.05) {
                0
            } else {
                rng.random_range(1..size)
            }
        })
        .collect();
    sets.sort_unstable();
    sets.dedup();
    let raw: Vec<f64> = sets.iter().map(|_| rng.random_range(0.05..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let mut entries: Vec<(u32, f64)> = sets
        .iter()
        .zip(&raw)
        .map(|(&s, &w)| (s, w / total))
        .collect();
    // land the sum on 1 exactly
    let rest: f64 = entries[1..].iter().map(|e| e.1).sum();
    entries[0].1 = 1.0 - rest;
    DiscreteMassFunction::new(n, entries).expect("valid random bba")
}
