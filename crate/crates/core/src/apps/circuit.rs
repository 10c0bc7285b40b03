use nalgebra::DVector;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::algebra::PhaseVector;
use crate::basis::{dim, mask};
use crate::error::{Error, Result};

pub type State = DVector<Complex64>;

/// Measurement basis for a single dot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MeasureBasis {
    Z,
    /// The `|+>, |->` basis.
    X,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum Op {
    Hadamard { dot: usize },
    Phase { phases: PhaseVector },
    Measure { dot: usize, basis: MeasureBasis },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    pub n_qubits: usize,
    pub ops: Vec<Op>,
}

/// A recorded measurement: `value` is `+1` for `|0>` or `|+>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    pub dot: usize,
    pub basis: MeasureBasis,
    pub value: i8,
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Transcript {
    pub circuit: Circuit,
    pub seed: u64,
    pub input: Vec<Complex64>,
    pub outcomes: Vec<Outcome>,
    pub output: Vec<Complex64>,
}

impl Transcript {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("transcript serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Circuit {
            n_qubits,
            ops: Vec::new(),
        }
    }

    pub fn h(mut self, dot: usize) -> Self {
        self.ops.push(Op::Hadamard { dot });
        self
    }

    pub fn h_all(mut self, dots: &[usize]) -> Self {
        self.ops
            .extend(dots.iter().map(|&dot| Op::Hadamard { dot }));
        self
    }

    pub fn phase(mut self, phases: PhaseVector) -> Self {
        self.ops.push(Op::Phase { phases });
        self
    }

    pub fn measure(mut self, dot: usize, basis: MeasureBasis) -> Self {
        self.ops.push(Op::Measure { dot, basis });
        self
    }

    pub fn measurements(&self) -> usize {
        self.ops
            .iter()
            .filter(|op| matches!(op, Op::Measure { .. }))
            .count()
    }

    /// Checks dots and phase-vector sizes against the register.
    pub fn validate(&self) -> Result<()> {
        for op in &self.ops {
            match op {
                Op::Hadamard { dot } | Op::Measure { dot, .. } if *dot >= self.n_qubits => {
                    return Err(Error::InvalidGate(format!(
                        "dot {dot} outside {}-qubit register",
                        self.n_qubits
                    )));
                }
                Op::Phase { phases } if phases.len() != dim(self.n_qubits) => {
                    return Err(Error::DimensionMismatch {
                        expected: dim(self.n_qubits),
                        found: phases.len(),
                    });
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// Runs the circuit, sampling each measurement from `rng`.
    pub fn run<R: Rng + ?Sized>(
        &self,
        input: &State,
        rng: &mut R,
    ) -> Result<(State, Vec<Outcome>)> {
        self.execute(
            input,
            |p_plus| if rng.random::<f64>() < p_plus { 1 } else { -1 },
        )
        .map(|(s, o)| (s.expect("sampled branch has weight"), o))
    }

    /// Runs the circuit with forced outcomes. `None` when the branch has
    /// zero probability.
    pub fn run_branch(
        &self,
        input: &State,
        forced: &[i8],
    ) -> Result<Option<(State, Vec<Outcome>)>> {
        if forced.len() != self.measurements() {
            return Err(Error::DimensionMismatch {
                expected: self.measurements(),
                found: forced.len(),
            });
        }
        let mut it = forced.iter();
        let (state, outcomes) = self.execute(input, |_| *it.next().expect("counted"))?;
        Ok(state.map(|s| (s, outcomes)))
    }

    fn execute(
        &self,
        input: &State,
        mut choose: impl FnMut(f64) -> i8,
    ) -> Result<(Option<State>, Vec<Outcome>)> {
        self.validate()?;
        if input.len() != dim(self.n_qubits) {
            return Err(Error::DimensionMismatch {
                expected: dim(self.n_qubits),
                found: input.len(),
            });
        }
        let mut state = input.clone();
        let mut outcomes = Vec::new();
        for op in &self.ops {
            match op {
                Op::Hadamard { dot } => hadamard(&mut state, *dot, self.n_qubits),
                Op::Phase { phases } => {
                    for (a, z) in state.iter_mut().zip(phases.to_unitary_diagonal()) {
                        *a *= z;
                    }
                }
                Op::Measure { dot, basis } => {
                    if *basis == MeasureBasis::X {
                        hadamard(&mut state, *dot, self.n_qubits);
                    }
                    let m = mask(*dot, self.n_qubits);
                    let p_plus: f64 = state
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| i & m == 0)
                        .map(|(_, a)| a.norm_sqr())
                        .sum();
                    let value = choose(p_plus);
                    let probability = if value == 1 { p_plus } else { 1.0 - p_plus };
                    outcomes.push(Outcome {
                        dot: *dot,
                        basis: *basis,
                        value,
                        probability,
                    });
                    if probability < 1e-14 {
                        return Ok((None, outcomes));
                    }
                    let keep = if value == 1 { 0 } else { m };
                    let norm = probability.sqrt();
                    for (i, a) in state.iter_mut().enumerate() {
                        *a = if i & m == keep {
                            *a / norm
                        } else {
                            Complex64::new(0.0, 0.0)
                        };
                    }
                    if *basis == MeasureBasis::X {
                        hadamard(&mut state, *dot, self.n_qubits);
                    }
                }
            }
        }
        Ok((Some(state), outcomes))
    }
}

/// Applies a Hadamard to `dot` in place.
pub fn hadamard(state: &mut State, dot: usize, n_qubits: usize) {
    let m = mask(dot, n_qubits);
    let r = std::f64::consts::FRAC_1_SQRT_2;
    for i in 0..state.len() {
        if i & m == 0 {
            let (a, b) = (state[i], state[i | m]);
            state[i] = (a + b) * r;
            state[i | m] = (a - b) * r;
        }
    }
}

/// Haar-random pure state.
pub fn random_state<R: Rng + ?Sized>(n_qubits: usize, rng: &mut R) -> State {
    let v = State::from_fn(dim(n_qubits), |_, _| {
        Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
    });
    let n = v.norm();
    v / Complex64::new(n, 0.0)
}

/// `|a>` for basis index `a`.
pub fn basis_state(n_qubits: usize, index: usize) -> State {
    let mut v = State::zeros(dim(n_qubits));
    v[index] = Complex64::new(1.0, 0.0);
    v
}

/// `|psi> (x) |0...0>` with `extra` fresh qubits appended.
pub fn append_zeros(psi: &State, extra: usize) -> State {
    let mut v = State::zeros(psi.len() << extra);
    for (i, a) in psi.iter().enumerate() {
        v[i << extra] = *a;
    }
    v
}

/// Expectation of a product of `Z` (or `X`) on `dots`.
pub fn pauli_string_expectation(
    state: &State,
    dots: &[usize],
    basis: MeasureBasis,
    n_qubits: usize,
) -> f64 {
    let mut s = state.clone();
    if basis == MeasureBasis::X {
        for &d in dots {
            hadamard(&mut s, d, n_qubits);
        }
    }
    let m: usize = dots.iter().map(|&d| mask(d, n_qubits)).sum();
    s.iter()
        .enumerate()
        .map(|(i, a)| {
            if (i & m).count_ones().is_multiple_of(2) {
                a.norm_sqr()
            } else {
                -a.norm_sqr()
            }
        })
        .sum()
}
