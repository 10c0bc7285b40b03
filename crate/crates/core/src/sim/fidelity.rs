use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::algebra::PhaseVector;
use crate::basis::wrap_pi;

/// Average gate fidelity `(d + |tr(U^dagger V)|^2) / (d (d + 1))` against a
/// diagonal target; only the diagonal of `u` enters the trace.
pub fn average_gate_fidelity(u: &DMatrix<Complex64>, v: &PhaseVector) -> f64 {
    let d = v.len() as f64;
    let tr: Complex64 = u
        .diagonal()
        .iter()
        .zip(v.to_unitary_diagonal())
        .map(|(a, b)| a.conj() * b)
        .sum();
    ((d + tr.norm_sqr()) / (d * (d + 1.0))).clamp(0.0, 1.0)
}

/// `1 - 2d/(d+1) max|phi_n| - 4/(d+1) leak`.
pub fn fidelity_lower_bound(residues: &[f64], leak: f64) -> f64 {
    let d = residues.len() as f64;
    let max = residues.iter().map(|r| r.abs()).fold(0.0, f64::max);
    1.0 - 2.0 * d / (d + 1.0) * max - 4.0 / (d + 1.0) * leak
}

/// `arg(U_nn exp(-i ideal_n))` folded to `(-pi, pi]`.
pub fn residues(u: &DMatrix<Complex64>, ideal: &PhaseVector) -> Vec<f64> {
    u.diagonal()
        .iter()
        .zip(ideal.values())
        .map(|(z, p)| wrap_pi(z.arg() - p))
        .collect()
}
