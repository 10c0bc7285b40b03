use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::algebra::FreePhase;
use crate::basis::{bit, dim};
use crate::error::{Error, Result};

/// Free-phase design matrix: a column of ones, then one bit indicator per qubit.
pub fn free_phase_matrix(n_qubits: usize) -> DMatrix<f64> {
    DMatrix::from_fn(dim(n_qubits), n_qubits + 1, |n, c| {
        if c == 0 {
            1.0
        } else {
            bit(n, c - 1, n_qubits) as f64
        }
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseCorrection {
    /// Least-squares free phase `y = (K^T K)^{-1} K^T phi`.
    pub y: FreePhase,
    /// Residues left after subtracting `K y`.
    pub post: Vec<f64>,
}

impl PhaseCorrection {
    pub fn max_post(&self) -> f64 {
        self.post.iter().map(|x| x.abs()).fold(0.0, f64::max)
    }
}

/// Projects residues off the free-phase column space.
pub fn optimal_phase_correction(residues: &[f64], n_qubits: usize) -> Result<PhaseCorrection> {
    if residues.len() != dim(n_qubits) {
        return Err(Error::DimensionMismatch {
            expected: dim(n_qubits),
            found: residues.len(),
        });
    }
    let k = free_phase_matrix(n_qubits);
    let phi = DVector::from_column_slice(residues);
    let normal = k.tr_mul(&k);
    let y = normal
        .cholesky()
        .expect("free-phase normal matrix is positive definite")
        .solve(&k.tr_mul(&phi));
    let post = &phi - &k * &y;
    Ok(PhaseCorrection {
        y: FreePhase::new(y[0], y.iter().skip(1).copied().collect()),
        post: post.iter().copied().collect(),
    })
}
