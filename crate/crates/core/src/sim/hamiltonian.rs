use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::basis::{bit, dim, mask};
use crate::error::{Error, Result};
use crate::model::DotArray;

/// Dot part (diagonal) and exchange part of the computational Hamiltonian.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianPair {
    pub h0: Vec<f64>,
    pub h_ex: DMatrix<Complex64>,
}

impl HamiltonianPair {
    pub fn total(&self) -> DMatrix<Complex64> {
        let mut h = self.h_ex.clone();
        for (n, e) in self.h0.iter().enumerate() {
            h[(n, n)] += e;
        }
        h
    }
}

/// Zeeman energies `sum_j (-1)^{b_j} eps_j / 2` of every basis state.
pub fn zeeman_energies(array: &DotArray) -> Vec<f64> {
    let n = array.n_qubits();
    let eps = array.zeeman();
    (0..dim(n))
        .map(|idx| {
            eps.iter()
                .enumerate()
                .map(|(j, e)| {
                    if bit(idx, j, n) == 0 {
                        e / 2.0
                    } else {
                        -e / 2.0
                    }
                })
                .sum()
        })
        .collect()
}

pub fn build_hamiltonian(array: &DotArray) -> HamiltonianPair {
    let n = array.n_qubits();
    let d = dim(n);
    let mut h_ex = DMatrix::zeros(d, d);
    for b in array.bonds() {
        let (j, k) = b.endpoints();
        let xi = b.entangled_state();
        let (mj, mk) = (mask(j, n), mask(k, n));
        let embed = |base: usize, q: usize| {
            base | if q & 2 != 0 { mj } else { 0 } | if q & 1 != 0 { mk } else { 0 }
        };
        for base in (0..d).filter(|idx| idx & (mj | mk) == 0) {
            for p in 0..4 {
                for q in 0..4 {
                    h_ex[(embed(base, p), embed(base, q))] -= xi[p] * xi[q].conj() * b.exchange();
                }
            }
        }
    }
    HamiltonianPair {
        h0: zeeman_energies(array),
        h_ex,
    }
}

/// Eigenpairs of a Hermitian matrix, ascending.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub values: DVector<f64>,
    pub vectors: DMatrix<Complex64>,
}

impl Spectrum {
    pub fn of(h: &DMatrix<Complex64>) -> Result<Self> {
        let eig = h
            .clone()
            .try_symmetric_eigen(1e-15, 0)
            .ok_or(Error::EigensolverFailure)?;
        let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = DVector::from_iterator(order.len(), order.iter().map(|&i| eig.eigenvalues[i]));
        let vectors = DMatrix::from_columns(
            &order
                .iter()
                .map(|&i| eig.eigenvectors.column(i))
                .collect::<Vec<_>>(),
        );
        Ok(Spectrum { values, vectors })
    }

    /// `exp(-i tau H)`.
    pub fn propagator(&self, tau: f64) -> DMatrix<Complex64> {
        let phases = DVector::from_iterator(
            self.values.len(),
            self.values
                .iter()
                .map(|&e| Complex64::from_polar(1.0, -tau * e)),
        );
        let mut scaled = self.vectors.clone();
        for (mut col, p) in scaled.column_iter_mut().zip(phases.iter()) {
            col *= *p;
        }
        scaled * self.vectors.adjoint()
    }
}
