//! Computational-basis bookkeeping.
//!
//! Qubit 0 is the most significant bit of a basis index; bit value 0 is the
//! spin-up (`+eps_Z/2`) state.

use std::f64::consts::{PI, TAU};

/// Bit of `qubit` in basis `index` for an `n_qubits` register.
#[inline]
pub fn bit(index: usize, qubit: usize, n_qubits: usize) -> usize {
    (index >> (n_qubits - 1 - qubit)) & 1
}

/// Single-bit mask selecting `qubit`.
#[inline]
pub fn mask(qubit: usize, n_qubits: usize) -> usize {
    1 << (n_qubits - 1 - qubit)
}

/// Dimension of an `n_qubits` register.
#[inline]
pub fn dim(n_qubits: usize) -> usize {
    1 << n_qubits
}

/// Bit string of `index`, qubit 0 first.
pub fn bitstring(index: usize, n_qubits: usize) -> String {
    (0..n_qubits)
        .map(|q| {
            if bit(index, q, n_qubits) == 1 {
                '1'
            } else {
                '0'
            }
        })
        .collect()
}

/// Reduce an angle to `[0, 2pi)`.
#[inline]
pub fn wrap_tau(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Reduce an angle to `(-pi, pi]`.
#[inline]
pub fn wrap_pi(x: f64) -> f64 {
    let r = wrap_tau(x);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// Distance from `x` to the nearest multiple of `period`.
#[inline]
pub fn lattice_distance(x: f64, period: f64) -> f64 {
    let r = x.rem_euclid(period);
    r.min(period - r).abs()
}
