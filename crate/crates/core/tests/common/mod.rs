#![allow(dead_code)]

use std::f64::consts::PI;

use intrinsic_gates::model::{Bond, DotArray};
use rand::Rng;

/// Zeeman energies `1, 1.37, 1.74, ...` with a small jitter, shuffled.
pub fn zeeman<R: Rng>(n: usize, rng: &mut R) -> Vec<f64> {
    let mut e: Vec<f64> = (0..n)
        .map(|j| 1.0 + 0.37 * j as f64 + rng.random_range(0.0..0.08))
        .collect();
    for i in (1..n).rev() {
        e.swap(i, rng.random_range(0..=i));
    }
    e
}

pub fn soi_bond<R: Rng>(j: usize, k: usize, exchange: f64, rng: &mut R) -> Bond {
    Bond::from_soi(
        j,
        k,
        exchange,
        rng.random_range(0.05..0.45),
        rng.random_range(0.0..PI / 2.0),
    )
    .unwrap()
}

/// Random spanning tree plus a few chords, exchanges in `[0.5, 1] * scale`.
pub fn random_array<R: Rng>(n: usize, scale: f64, rng: &mut R) -> DotArray {
    let mut edges: Vec<(usize, usize)> = (1..n).map(|k| (rng.random_range(0..k), k)).collect();
    for j in 0..n {
        for k in j + 1..n {
            if !edges.contains(&(j, k)) && rng.random_bool(0.2) {
                edges.push((j, k));
            }
        }
    }
    let bonds = edges
        .into_iter()
        .map(|(j, k)| soi_bond(j, k, scale * rng.random_range(0.5..1.0), rng))
        .collect();
    DotArray::from_zeeman(&zeeman(n, rng), bonds).unwrap()
}

/// Dot 0 coupled to every other dot.
pub fn random_stellar<R: Rng>(n: usize, scale: f64, rng: &mut R) -> DotArray {
    let bonds = (1..n)
        .map(|k| soi_bond(0, k, scale * rng.random_range(0.7..1.3), rng))
        .collect();
    DotArray::from_zeeman(&zeeman(n, rng), bonds).unwrap()
}

/// Bonds N = (0,1), E = (1,3), S = (2,3), W = (0,2).
pub fn random_rectangle<R: Rng>(scale: f64, rng: &mut R) -> DotArray {
    let bonds = [(0, 1), (1, 3), (2, 3), (0, 2)]
        .iter()
        .map(|&(j, k)| soi_bond(j, k, scale * rng.random_range(0.7..1.3), rng))
        .collect();
    DotArray::from_zeeman(&zeeman(4, rng), bonds).unwrap()
}

pub fn homogeneous_chain(n: usize, exchange: f64) -> DotArray {
    let bonds = (0..n - 1)
        .map(|j| Bond::spin_conserving(j, j + 1, exchange).unwrap())
        .collect();
    // Uneven spacing keeps distinct flip-flop states off resonance.
    let e: Vec<f64> = (0..n)
        .map(|j| 1.0 + 0.25 * j as f64 + 0.05 * (j * j) as f64)
        .collect();
    DotArray::from_zeeman(&e, bonds).unwrap()
}
