use std::collections::HashSet;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::calib::lp::nnls;
use crate::calib::pauli::{Pauli, PauliAssignment};
use crate::error::{Error, Result};
use crate::model::DotArray;

/// Largest array enumerated by [`assignment_vectors`].
pub const MAX_ENUMERATED_DOTS: usize = 20;

/// One distinct bond-sign vector with the X assignment that first produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignPattern {
    pub signs: Vec<i8>,
    pub frame: PauliAssignment,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssignmentReport {
    pub patterns: Vec<SignPattern>,
    /// Number of distinct sign vectors.
    pub n_a: usize,
    /// Number of bonds.
    pub n_b: usize,
    pub rank: usize,
    /// Every phase direction is a non-negative combination of the patterns.
    pub positive_span: bool,
}

/// Bond signs `a_w = s_j s_k` produced by flipping the dots in `frame`.
pub fn bond_signs(array: &DotArray, frame: &PauliAssignment) -> Vec<i8> {
    array
        .bonds()
        .iter()
        .map(|b| {
            let (j, k) = b.endpoints();
            if frame.get(j).flips() == frame.get(k).flips() {
                1
            } else {
                -1
            }
        })
        .collect()
}

/// Enumerates all `2^N` X assignments and keeps the distinct sign vectors in
/// order of first appearance (dot `j` flipped when bit `j` of the counter is set).
pub fn assignment_vectors(array: &DotArray) -> Result<AssignmentReport> {
    let n = array.n_qubits();
    if n > MAX_ENUMERATED_DOTS {
        return Err(Error::InvalidArray(format!(
            "{n} dots exceed the enumeration limit of {MAX_ENUMERATED_DOTS}"
        )));
    }
    let mut seen = HashSet::new();
    let mut patterns = Vec::new();
    for subset in 0u64..1 << n {
        let dots: Vec<usize> = (0..n).filter(|&j| subset >> j & 1 == 1).collect();
        let frame = PauliAssignment::on(n, &dots, Pauli::X);
        let signs = bond_signs(array, &frame);
        if seen.insert(signs.clone()) {
            patterns.push(SignPattern { signs, frame });
        }
    }
    let n_b = array.bonds().len();
    let m = sign_matrix(&patterns, n_b);
    let rank = if n_b == 0 { 0 } else { m.rank(1e-9) };
    let positive_span = rank == n_b && positively_spans(&m);
    Ok(AssignmentReport {
        n_a: patterns.len(),
        n_b,
        rank,
        positive_span,
        patterns,
    })
}

/// Bonds by patterns.
pub fn sign_matrix(patterns: &[SignPattern], n_bonds: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n_bonds, patterns.len(), |w, p| patterns[p].signs[w] as f64)
}

/// Whether every `+-e_i` is a non-negative combination of the columns.
pub fn positively_spans(m: &DMatrix<f64>) -> bool {
    let rows = m.nrows();
    (0..rows).all(|i| {
        [1.0, -1.0].iter().all(|&s| {
            let mut e = DVector::zeros(rows);
            e[i] = s;
            nnls(m, &e).1 < 1e-9
        })
    })
}
