use std::ops::{Add, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::basis::{bit, dim, mask, wrap_pi, wrap_tau};
use crate::error::{Error, Result};
use crate::model::PhaseRateVector;

/// Default tolerance for algebraic phase identities, in radians.
pub const PHASE_TOL: f64 = 1e-9;

/// Diagonal of a diagonal unitary as phases in `[0, 2pi)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct PhaseVector {
    values: Vec<f64>,
}

impl PhaseVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        let len = values.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::InvalidGate(format!(
                "phase vector length {len} is not a power of two >= 2"
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidGate(
                "phase vector has non-finite entries".into(),
            ));
        }
        Ok(PhaseVector {
            values: values.into_iter().map(wrap_tau).collect(),
        })
    }

    pub fn zeros(n_qubits: usize) -> Self {
        PhaseVector {
            values: vec![0.0; dim(n_qubits)],
        }
    }

    /// Phases accumulated over `tau` at the given rates.
    pub fn from_rates(rates: &PhaseRateVector, tau: f64) -> Self {
        PhaseVector {
            values: rates.values().iter().map(|r| wrap_tau(r * tau)).collect(),
        }
    }

    /// Builds `f(n)` for every basis index.
    pub fn from_fn(n_qubits: usize, f: impl Fn(usize) -> f64) -> Self {
        PhaseVector {
            values: (0..dim(n_qubits)).map(|n| wrap_tau(f(n))).collect(),
        }
    }

    /// Arguments of the diagonal entries of `u`.
    pub fn from_diagonal(u: &DMatrix<Complex64>) -> Self {
        PhaseVector {
            values: u.diagonal().iter().map(|z| wrap_tau(z.arg())).collect(),
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn n_qubits(&self) -> usize {
        self.values.len().trailing_zeros() as usize
    }

    /// Entries with qubit 0 up.
    pub fn lower(&self) -> &[f64] {
        &self.values[..self.len() / 2]
    }

    /// Entries with qubit 0 down.
    pub fn upper(&self) -> &[f64] {
        &self.values[self.len() / 2..]
    }

    /// Largest folded difference to `other`.
    pub fn max_deviation(&self, other: &PhaseVector) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| wrap_pi(a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Equality modulo `2pi` within `tol`.
    pub fn approx_eq(&self, other: &PhaseVector, tol: f64) -> bool {
        self.len() == other.len() && self.max_deviation(other) <= tol
    }

    /// `exp(i values)`.
    pub fn to_unitary_diagonal(&self) -> Vec<Complex64> {
        self.values
            .iter()
            .map(|&p| Complex64::from_polar(1.0, p))
            .collect()
    }

    pub fn scaled(&self, factor: f64) -> PhaseVector {
        PhaseVector {
            values: self.values.iter().map(|v| wrap_tau(v * factor)).collect(),
        }
    }

    fn zip_with(&self, other: &PhaseVector, f: impl Fn(f64, f64) -> f64) -> PhaseVector {
        assert_eq!(self.len(), other.len(), "phase vectors of different length");
        PhaseVector {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| wrap_tau(f(a, b)))
                .collect(),
        }
    }
}

impl TryFrom<Vec<f64>> for PhaseVector {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        PhaseVector::new(v)
    }
}

impl From<PhaseVector> for Vec<f64> {
    fn from(p: PhaseVector) -> Self {
        p.values
    }
}

impl Add for &PhaseVector {
    type Output = PhaseVector;
    fn add(self, rhs: &PhaseVector) -> PhaseVector {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &PhaseVector {
    type Output = PhaseVector;
    fn sub(self, rhs: &PhaseVector) -> PhaseVector {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for &PhaseVector {
    type Output = PhaseVector;
    fn neg(self) -> PhaseVector {
        PhaseVector {
            values: self.values.iter().map(|v| wrap_tau(-v)).collect(),
        }
    }
}

/// Global phase plus one virtual-Z phase per qubit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FreePhase {
    pub global: f64,
    pub local: Vec<f64>,
}

impl FreePhase {
    pub fn zero(n_qubits: usize) -> Self {
        FreePhase {
            global: 0.0,
            local: vec![0.0; n_qubits],
        }
    }

    pub fn new(global: f64, local: Vec<f64>) -> Self {
        FreePhase { global, local }
    }

    pub fn n_qubits(&self) -> usize {
        self.local.len()
    }

    /// Phase `global + sum_j b_j(n) local_j` on every basis state `n`.
    pub fn expand(&self) -> PhaseVector {
        let n = self.n_qubits();
        PhaseVector::from_fn(n, |idx| {
            self.global
                + self
                    .local
                    .iter()
                    .enumerate()
                    .filter(|&(q, _)| bit(idx, q, n) == 1)
                    .map(|(_, p)| p)
                    .sum::<f64>()
        })
    }

    /// Same map with every angle reduced to `[0, 2pi)`.
    pub fn canonical(&self) -> FreePhase {
        FreePhase {
            global: wrap_tau(self.global),
            local: self.local.iter().map(|&p| wrap_tau(p)).collect(),
        }
    }

    /// Whether two free-phase maps produce the same phase vector.
    pub fn approx_eq(&self, other: &FreePhase, tol: f64) -> bool {
        self.n_qubits() == other.n_qubits() && self.expand().approx_eq(&other.expand(), tol)
    }
}

/// Outcome of comparing two diagonal gates up to free phases.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Equivalence {
    pub equivalent: bool,
    /// Free phase with `u = target + free` on every entry that fits.
    pub free: FreePhase,
    pub residual: f64,
}

/// Decides whether `u` equals `target` up to a global phase and per-qubit
/// phase gates.
///
/// The global phase is read from the all-up entry and each local phase from
/// the entry with only that qubit down; every entry is then checked.
pub fn equiv_up_to_free_phase(
    u: &PhaseVector,
    target: &PhaseVector,
    tol: f64,
) -> Result<Equivalence> {
    if u.len() != target.len() {
        return Err(Error::DimensionMismatch {
            expected: target.len(),
            found: u.len(),
        });
    }
    let n = u.n_qubits();
    let diff = u - target;
    let global = diff.values()[0];
    let local = (0..n)
        .map(|q| wrap_tau(diff.values()[mask(q, n)] - global))
        .collect();
    let free = FreePhase { global, local };
    let residual = diff.max_deviation(&free.expand());
    Ok(Equivalence {
        equivalent: residual <= tol,
        free,
        residual,
    })
}
