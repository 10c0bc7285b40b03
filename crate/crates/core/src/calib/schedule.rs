use serde::{Deserialize, Serialize};

use crate::calib::pauli::{Pauli, PauliAssignment};
use crate::error::{Error, Result};
use crate::model::DotArray;

/// Instantaneous pulse on one dot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PulseOp {
    pub dot: usize,
    pub pauli: Pauli,
}

/// Free evolution for `tau`, then `pulse` applied at the end of the stage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Stage {
    pub tau: f64,
    #[serde(default)]
    pub pulse: Vec<PulseOp>,
}

impl Stage {
    pub fn free(tau: f64) -> Self {
        Stage {
            tau,
            pulse: Vec::new(),
        }
    }

    pub fn new(tau: f64, pulse: &[(usize, Pauli)]) -> Self {
        Stage {
            tau,
            pulse: pulse
                .iter()
                .map(|&(dot, pauli)| PulseOp { dot, pauli })
                .collect(),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScheduleWire {
    stages: Vec<Stage>,
}

/// Ordered stages of free evolution separated by instantaneous pulses.
#[derive(Debug, Clone, PartialEq)]
pub struct PulseSchedule {
    n_qubits: usize,
    stages: Vec<Stage>,
}

impl PulseSchedule {
    pub fn new(n_qubits: usize, stages: Vec<Stage>) -> Result<Self> {
        for (i, s) in stages.iter().enumerate() {
            if !(s.tau >= 0.0 && s.tau.is_finite()) {
                return Err(Error::InvalidSchedule(format!(
                    "stage {i} has duration {}",
                    s.tau
                )));
            }
            for (a, op) in s.pulse.iter().enumerate() {
                if op.dot >= n_qubits {
                    return Err(Error::InvalidSchedule(format!(
                        "stage {i} pulses dot {} of {n_qubits}",
                        op.dot
                    )));
                }
                if s.pulse[..a].iter().any(|o| o.dot == op.dot) {
                    return Err(Error::InvalidSchedule(format!(
                        "stage {i} pulses dot {} twice",
                        op.dot
                    )));
                }
            }
        }
        Ok(PulseSchedule { n_qubits, stages })
    }

    /// One pulse-free stage.
    pub fn free(n_qubits: usize, tau: f64) -> Result<Self> {
        Self::new(n_qubits, vec![Stage::free(tau)])
    }

    pub fn from_json(text: &str, n_qubits: usize) -> Result<Self> {
        let wire: ScheduleWire = serde_json::from_str(text)?;
        Self::new(n_qubits, wire.stages)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&ScheduleWire {
            stages: self.stages.clone(),
        })
        .expect("schedule serializes")
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn stages(&self) -> &[Stage] {
        &self.stages
    }

    pub fn total_time(&self) -> f64 {
        self.stages.iter().map(|s| s.tau).sum()
    }

    /// Pulse closing stage `i` as a Pauli string.
    pub fn pulse(&self, i: usize) -> PauliAssignment {
        let mut labels = vec![Pauli::I; self.n_qubits];
        for op in &self.stages[i].pulse {
            labels[op.dot] = op.pauli;
        }
        PauliAssignment::new(labels)
    }

    /// Frame `Q_n` seen during each stage: the product of all earlier pulses.
    pub fn frames(&self) -> Vec<PauliAssignment> {
        let mut q = PauliAssignment::identity(self.n_qubits);
        let mut out = Vec::with_capacity(self.stages.len());
        for i in 0..self.stages.len() {
            out.push(q.clone());
            q = self.pulse(i).compose(&q);
        }
        out
    }

    /// Product of every pulse in the schedule.
    pub fn net(&self) -> PauliAssignment {
        (0..self.stages.len()).fold(PauliAssignment::identity(self.n_qubits), |q, i| {
            self.pulse(i).compose(&q)
        })
    }

    /// Bond signs `a_w = sig(Q_n at j) sig(Q_n at k)` for each stage.
    pub fn stage_signs(&self, array: &DotArray) -> Vec<Vec<f64>> {
        self.frames()
            .iter()
            .map(|q| {
                array
                    .bonds()
                    .iter()
                    .map(|b| {
                        let (j, k) = b.endpoints();
                        q.sig(j) * q.sig(k)
                    })
                    .collect()
            })
            .collect()
    }

    /// Number of pulses on each dot.
    pub fn pulse_counts(&self) -> Vec<usize> {
        let mut c = vec![0; self.n_qubits];
        for s in &self.stages {
            for op in &s.pulse {
                if op.pauli != Pauli::I {
                    c[op.dot] += 1;
                }
            }
        }
        c
    }
}
