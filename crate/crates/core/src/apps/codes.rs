use std::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{GateSpec, MqcpFactor, PhaseVector};
use crate::apps::circuit::{
    append_zeros, pauli_string_expectation, random_state, Circuit, MeasureBasis, State,
};
use crate::basis::{dim, mask};
use crate::error::{Error, Result};

/// `(C1 Z2)(C2 Z3)(C3 Z1)` on a triangle: `-1` on the majority-down states.
pub fn logical_z_triangle() -> PhaseVector {
    GateSpec::Factors(vec![
        MqcpFactor::new(0, &[(1, PI)]),
        MqcpFactor::new(1, &[(2, PI)]),
        MqcpFactor::new(2, &[(0, PI)]),
    ])
    .phase_vector(3)
    .expect("three-qubit spec")
}

/// A stabilizer measurement built on one multi-target phase gate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParityCheck {
    pub circuit: Circuit,
    pub ancilla: usize,
    pub targets: Vec<usize>,
    pub basis: MeasureBasis,
}

/// Agreement between measured outcomes and post-measurement stabilizer values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub trials: usize,
    pub agreed: usize,
    /// Branches verified by forcing every outcome.
    pub branches: usize,
    /// Largest `|<P> - outcome|` seen.
    pub worst: f64,
}

impl CheckReport {
    pub fn all_agree(&self) -> bool {
        self.agreed == self.trials
    }
}

/// Ancilla on qubit 0 with `n_targets` data qubits after it. The ancilla is
/// prepared in `|+>`, the gate applies `pi` to every target conditioned on
/// it, and it is read out in the `+/-` basis. For an `X` check the targets are
/// sandwiched between Hadamards.
pub fn parity_check(n_targets: usize, basis: MeasureBasis) -> Result<ParityCheck> {
    if !(2..=4).contains(&n_targets) {
        return Err(Error::InvalidGate(format!(
            "parity check on {n_targets} targets (2 to 4 supported)"
        )));
    }
    let n = n_targets + 1;
    let targets: Vec<usize> = (1..n).collect();
    let gate =
        GateSpec::mqcp(0, &targets.iter().map(|&t| (t, PI)).collect::<Vec<_>>()).phase_vector(n)?;
    let mut c = Circuit::new(n).h(0);
    if basis == MeasureBasis::X {
        c = c.h_all(&targets);
    }
    c = c.phase(gate);
    if basis == MeasureBasis::X {
        c = c.h_all(&targets);
    }
    let circuit = c.measure(0, MeasureBasis::X);
    Ok(ParityCheck {
        circuit,
        ancilla: 0,
        targets,
        basis,
    })
}

impl ParityCheck {
    pub fn n_qubits(&self) -> usize {
        self.circuit.n_qubits
    }

    /// Fresh ancilla in front of the data register.
    pub fn prepare(&self, data: &State) -> State {
        embed_after_ancilla(data, self.n_qubits())
    }

    /// Stabilizer value of the data register in `state`.
    pub fn stabilizer(&self, state: &State) -> f64 {
        pauli_string_expectation(state, &self.targets, self.basis, self.n_qubits())
    }

    /// Random data states with a fresh ancilla; each trial is sampled once and
    /// both outcome branches are also forced.
    pub fn verify<R: Rng + ?Sized>(&self, trials: usize, rng: &mut R) -> Result<CheckReport> {
        let mut report = CheckReport {
            trials,
            agreed: 0,
            branches: 0,
            worst: 0.0,
        };
        for _ in 0..trials {
            let data = random_state(self.targets.len(), rng);
            let input = self.prepare(&data);
            let (out, o) = self.circuit.run(&input, rng)?;
            let err = (self.stabilizer(&out) - o[0].value as f64).abs();
            report.worst = report.worst.max(err);
            if err < 1e-9 {
                report.agreed += 1;
            }
            for forced in [1, -1] {
                if let Some((out, _)) = self.circuit.run_branch(&input, &[forced])? {
                    report.branches += 1;
                    report.worst = report
                        .worst
                        .max((self.stabilizer(&out) - forced as f64).abs());
                }
            }
        }
        Ok(report)
    }
}

/// `|0>_ancilla (x) data`, ancilla as qubit 0.
fn embed_after_ancilla(data: &State, n: usize) -> State {
    let mut v = State::zeros(dim(n));
    v.rows_mut(0, data.len()).copy_from(data);
    v
}

/// Two data qubits (0, 1) checked by a Z ancilla (2) and an X ancilla (3).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceUnit {
    pub circuit: Circuit,
}

/// Outcomes of one cycle and the data state left behind.
#[derive(Debug, Clone, PartialEq)]
pub struct CycleResult {
    pub z_outcome: i8,
    pub x_outcome: i8,
    pub data: State,
}

pub fn surface_code_cycle_unit() -> SurfaceUnit {
    let cz = |anc: usize| {
        GateSpec::mqcp(anc, &[(0, PI), (1, PI)])
            .phase_vector(4)
            .expect("four-qubit spec")
    };
    let circuit = Circuit::new(4)
        .h(2)
        .phase(cz(2))
        .h(2)
        .measure(2, MeasureBasis::Z)
        .h(3)
        .h_all(&[0, 1])
        .phase(cz(3))
        .h_all(&[0, 1])
        .h(3)
        .measure(3, MeasureBasis::Z);
    SurfaceUnit { circuit }
}

impl SurfaceUnit {
    /// One stabilizer cycle on a two-qubit data state with fresh ancillas.
    pub fn cycle<R: Rng + ?Sized>(&self, data: &State, rng: &mut R) -> Result<CycleResult> {
        let (out, o) = self.circuit.run(&append_zeros(data, 2), rng)?;
        Ok(CycleResult {
            z_outcome: o[0].value,
            x_outcome: o[1].value,
            data: extract_data(&out, &o.iter().map(|x| x.value).collect::<Vec<_>>()),
        })
    }

    /// Probability of each `(z, x)` outcome pair.
    pub fn outcome_probabilities(&self, data: &State) -> Result<Vec<((i8, i8), f64)>> {
        let input = append_zeros(data, 2);
        let mut out = Vec::new();
        for z in [1, -1] {
            for x in [1, -1] {
                let p = match self.circuit.run_branch(&input, &[z, x])? {
                    Some((_, o)) => o.iter().map(|o| o.probability).product(),
                    None => 0.0,
                };
                out.push(((z, x), p));
            }
        }
        Ok(out)
    }
}

/// Data amplitudes once the ancillas have collapsed onto `outcomes`.
fn extract_data(state: &State, outcomes: &[i8]) -> State {
    let anc: usize = outcomes
        .iter()
        .enumerate()
        .map(|(i, &v)| if v == 1 { 0 } else { mask(2 + i, 4) })
        .sum();
    State::from_fn(4, |d, _| state[(d << 2) | anc])
}
