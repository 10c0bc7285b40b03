use serde::{Deserialize, Serialize};

use crate::algebra::phase::PhaseVector;
use crate::basis::{bit, dim, wrap_tau};
use crate::error::{Error, Result};

/// One target of a multi-qubit controlled-phase factor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Target {
    pub dot: usize,
    pub theta: f64,
}

/// Controlled phase from one control onto several targets: the target
/// `dot` picks up `theta` when both it and the control are down.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MqcpFactor {
    pub control: usize,
    pub targets: Vec<Target>,
}

impl MqcpFactor {
    pub fn new(control: usize, targets: &[(usize, f64)]) -> Self {
        MqcpFactor {
            control,
            targets: targets
                .iter()
                .map(|&(dot, theta)| Target {
                    dot,
                    theta: wrap_tau(theta),
                })
                .collect(),
        }
    }

    fn validate(&self, n_qubits: usize) -> Result<()> {
        if self.control >= n_qubits {
            return Err(Error::InvalidGate(format!(
                "control {} out of range for {n_qubits} qubits",
                self.control
            )));
        }
        if self.targets.is_empty() {
            return Err(Error::InvalidGate(format!(
                "factor on control {} has no targets",
                self.control
            )));
        }
        for (i, t) in self.targets.iter().enumerate() {
            if t.dot >= n_qubits || t.dot == self.control {
                return Err(Error::InvalidGate(format!(
                    "target {} invalid for control {}",
                    t.dot, self.control
                )));
            }
            if self.targets[..i].iter().any(|o| o.dot == t.dot) {
                return Err(Error::InvalidGate(format!("target {} repeated", t.dot)));
            }
            if !t.theta.is_finite() {
                return Err(Error::InvalidGate("non-finite angle".into()));
            }
        }
        Ok(())
    }

    /// Phase picked up by basis state `n`.
    fn phase_at(&self, n: usize, n_qubits: usize) -> f64 {
        if bit(n, self.control, n_qubits) == 0 {
            return 0.0;
        }
        self.targets
            .iter()
            .filter(|t| bit(n, t.dot, n_qubits) == 1)
            .map(|t| t.theta)
            .sum()
    }
}

/// A diagonal target gate, given either as a product of controlled-phase
/// factors or as its full phase vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum GateSpec {
    Factors(Vec<MqcpFactor>),
    Raw(Vec<f64>),
}

impl GateSpec {
    pub fn mqcp(control: usize, targets: &[(usize, f64)]) -> Self {
        GateSpec::Factors(vec![MqcpFactor::new(control, targets)])
    }

    /// Two-qubit controlled phase between `a` and `b`.
    pub fn cz(a: usize, b: usize, theta: f64) -> Self {
        GateSpec::mqcp(a, &[(b, theta)])
    }

    /// Doubly controlled Z on the last qubit of a three-qubit register.
    pub fn ccz() -> Self {
        let mut v = vec![0.0; 8];
        v[7] = std::f64::consts::PI;
        GateSpec::Raw(v)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("gate spec serializes")
    }

    /// Full phase vector on `n_qubits` qubits.
    pub fn phase_vector(&self, n_qubits: usize) -> Result<PhaseVector> {
        match self {
            GateSpec::Raw(v) => {
                if v.len() != dim(n_qubits) {
                    return Err(Error::DimensionMismatch {
                        expected: dim(n_qubits),
                        found: v.len(),
                    });
                }
                PhaseVector::new(v.clone())
            }
            GateSpec::Factors(factors) => {
                if n_qubits < 1 {
                    return Err(Error::InvalidGate("empty register".into()));
                }
                for f in factors {
                    f.validate(n_qubits)?;
                }
                Ok(PhaseVector::from_fn(n_qubits, |n| {
                    factors.iter().map(|f| f.phase_at(n, n_qubits)).sum()
                }))
            }
        }
    }

    /// Smallest register the spec fits on.
    pub fn min_qubits(&self) -> Result<usize> {
        match self {
            GateSpec::Raw(v) => {
                if v.len() < 2 || !v.len().is_power_of_two() {
                    return Err(Error::InvalidGate(format!(
                        "raw length {} is not a power of two",
                        v.len()
                    )));
                }
                Ok(v.len().trailing_zeros() as usize)
            }
            GateSpec::Factors(fs) => Ok(fs
                .iter()
                .flat_map(|f| std::iter::once(f.control).chain(f.targets.iter().map(|t| t.dot)))
                .max()
                .map_or(0, |m| m + 1)),
        }
    }
}
