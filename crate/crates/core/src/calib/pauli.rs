use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::basis::{bit, dim, mask};

/// Single-qubit Pauli label; products are tracked up to phase.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pauli {
    #[default]
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    /// Product with `other`, dropping the phase.
    pub fn compose(self, other: Pauli) -> Pauli {
        let (a, b) = (self.bits(), other.bits());
        Pauli::from_bits(a.0 ^ b.0, a.1 ^ b.1)
    }

    /// Whether the label flips the spin (X or Y).
    pub fn flips(self) -> bool {
        self.bits().0
    }

    /// `+1` for I and Z, `-1` for X and Y.
    pub fn sig(self) -> f64 {
        if self.flips() {
            -1.0
        } else {
            1.0
        }
    }

    pub fn matrix(self) -> DMatrix<Complex64> {
        let (o, l, i) = (
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 1.0),
        );
        let m = match self {
            Pauli::I => [l, o, o, l],
            Pauli::X => [o, l, l, o],
            Pauli::Y => [o, -i, i, o],
            Pauli::Z => [l, o, o, -l],
        };
        DMatrix::from_row_slice(2, 2, &m)
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// One Pauli label per dot.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PauliAssignment {
    labels: Vec<Pauli>,
}

impl PauliAssignment {
    pub fn identity(n_qubits: usize) -> Self {
        PauliAssignment {
            labels: vec![Pauli::I; n_qubits],
        }
    }

    pub fn new(labels: Vec<Pauli>) -> Self {
        PauliAssignment { labels }
    }

    /// `pauli` on each listed dot, identity elsewhere.
    pub fn on(n_qubits: usize, dots: &[usize], pauli: Pauli) -> Self {
        let mut a = Self::identity(n_qubits);
        for &d in dots {
            a.labels[d] = pauli;
        }
        a
    }

    pub fn labels(&self) -> &[Pauli] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn get(&self, dot: usize) -> Pauli {
        self.labels[dot]
    }

    pub fn is_identity(&self) -> bool {
        self.labels.iter().all(|&p| p == Pauli::I)
    }

    pub fn compose(&self, other: &PauliAssignment) -> PauliAssignment {
        PauliAssignment {
            labels: self
                .labels
                .iter()
                .zip(&other.labels)
                .map(|(a, b)| a.compose(*b))
                .collect(),
        }
    }

    pub fn sig(&self, dot: usize) -> f64 {
        self.labels[dot].sig()
    }

    /// Bit mask of flipped dots in the basis index convention.
    pub fn flip_mask(&self) -> usize {
        let n = self.len();
        (0..n)
            .filter(|&j| self.labels[j].flips())
            .map(|j| mask(j, n))
            .sum()
    }

    /// `P|r> = c_r |r ^ flip_mask>`, returned as `c_r` for every `r`.
    pub fn basis_action(&self) -> Vec<Complex64> {
        let n = self.len();
        (0..dim(n))
            .map(|r| {
                let mut c = Complex64::new(1.0, 0.0);
                for (j, p) in self.labels.iter().enumerate() {
                    let down = bit(r, j, n) == 1;
                    c *= match (p, down) {
                        (Pauli::Z, true) => Complex64::new(-1.0, 0.0),
                        (Pauli::Y, false) => Complex64::new(0.0, 1.0),
                        (Pauli::Y, true) => Complex64::new(0.0, -1.0),
                        _ => Complex64::new(1.0, 0.0),
                    };
                }
                c
            })
            .collect()
    }

    /// `P * m` without forming the Pauli matrix.
    pub fn apply_left(&self, m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        let flip = self.flip_mask();
        let coef = self.basis_action();
        let mut out = DMatrix::zeros(m.nrows(), m.ncols());
        for r in 0..m.nrows() {
            let src = m.row(r) * coef[r];
            out.row_mut(r ^ flip).copy_from(&src);
        }
        out
    }

    /// Dense matrix of the Pauli string.
    pub fn matrix(&self) -> DMatrix<Complex64> {
        self.apply_left(&DMatrix::identity(dim(self.len()), dim(self.len())))
    }
}

impl fmt::Display for PauliAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.labels {
            write!(f, "{p}")?;
        }
        Ok(())
    }
}
