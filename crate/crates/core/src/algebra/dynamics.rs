use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::algebra::phase::PhaseVector;
use crate::basis::{lattice_distance, mask, wrap_pi};
use crate::error::{Error, Result};
use crate::model::DotArray;

/// Upper bound on lattice points scanned by [`solve_dynamics`].
pub const MAX_SCAN_POINTS: usize = 1 << 20;
/// Inexact candidates kept when no time hits every bond.
const NEAR_MISSES: usize = 8;

/// Per-bond phase `phi_w` in `[0, pi)` that `tau * Delta_w` has to reach,
/// aligned with `array.bonds()`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BondTargets {
    pub phases: Vec<f64>,
}

impl BondTargets {
    /// Splits a diagonal gate into controlled phases `theta_jk` on pairs and
    /// assigns `phi_w = -theta_w/2 mod pi` to each bond.
    ///
    /// Fails when the gate needs a pair without a bond, or when it has terms
    /// of higher order than pairwise (a CCZ, say).
    pub fn from_gate(array: &DotArray, gate: &PhaseVector, tol: f64) -> Result<Self> {
        let n = array.n_qubits();
        if gate.n_qubits() != n {
            return Err(Error::DimensionMismatch {
                expected: 1 << n,
                found: gate.len(),
            });
        }
        let v = gate.values();
        let pair = |j: usize, k: usize| {
            wrap_pi(v[mask(j, n) | mask(k, n)] - v[mask(j, n)] - v[mask(k, n)] + v[0])
        };
        let mut theta = vec![vec![0.0; n]; n];
        for j in 0..n {
            for k in j + 1..n {
                theta[j][k] = pair(j, k);
            }
        }
        let rebuilt = PhaseVector::from_fn(n, |idx| {
            let down: Vec<usize> = (0..n).filter(|&q| idx & mask(q, n) != 0).collect();
            let mut p = v[0];
            for &j in &down {
                p += v[mask(j, n)] - v[0];
            }
            for (a, &j) in down.iter().enumerate() {
                for &k in &down[a + 1..] {
                    p += theta[j][k];
                }
            }
            p
        });
        let residual = rebuilt.max_deviation(gate);
        if residual > tol {
            return Err(Error::InvalidGate(format!(
                "gate is not a product of pairwise controlled phases (residual {residual:.3e})"
            )));
        }
        for j in 0..n {
            for k in j + 1..n {
                if theta[j][k].abs() > tol && array.bond_index(j, k).is_none() {
                    return Err(Error::InvalidGate(format!(
                        "qubits {j} and {k} need a controlled phase but share no bond"
                    )));
                }
            }
        }
        let phases = array
            .bonds()
            .iter()
            .map(|b| {
                let (j, k) = b.endpoints();
                (-theta[j][k] / 2.0).rem_euclid(PI)
            })
            .collect();
        Ok(BondTargets { phases })
    }
}

/// Which lattice of times counts as reaching a bond target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TimeLattice {
    /// `tau Delta = phi (mod pi)`.
    HalfTurn,
    /// `tau Delta = 2 phi (mod 2pi)`, the doubled reading.
    FullTurn,
}

impl TimeLattice {
    pub fn target(self, phi: f64) -> f64 {
        match self {
            TimeLattice::HalfTurn => phi,
            TimeLattice::FullTurn => 2.0 * phi,
        }
    }

    pub fn period(self) -> f64 {
        match self {
            TimeLattice::HalfTurn => PI,
            TimeLattice::FullTurn => 2.0 * PI,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeCandidate {
    pub tau: f64,
    pub residuals: Vec<f64>,
    pub max_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DynamicsSolution {
    pub half_turn: Vec<TimeCandidate>,
    pub full_turn: Vec<TimeCandidate>,
}

impl DynamicsSolution {
    pub fn lattice(&self, lattice: TimeLattice) -> &[TimeCandidate] {
        match lattice {
            TimeLattice::HalfTurn => &self.half_turn,
            TimeLattice::FullTurn => &self.full_turn,
        }
    }

    /// Earliest time on `lattice` hitting every bond within `tol`.
    pub fn first_exact(&self, lattice: TimeLattice, tol: f64) -> Option<f64> {
        self.lattice(lattice)
            .iter()
            .find(|c| c.max_residual <= tol)
            .map(|c| c.tau)
    }
}

fn is_still(delta: f64, exchange: f64) -> bool {
    delta.abs() <= 1e-12 * exchange.abs().max(f64::MIN_POSITIVE)
}

/// Scans the union of per-bond solution lattices in `(0, tau_max]`.
///
/// Exact hits come first in increasing time; when there are none the
/// closest misses are returned ordered by residual.
pub fn solve_dynamics(
    array: &DotArray,
    targets: &BondTargets,
    tau_max: f64,
    tol: f64,
) -> Result<DynamicsSolution> {
    let bonds = array.bonds();
    if targets.phases.len() != bonds.len() {
        return Err(Error::DimensionMismatch {
            expected: bonds.len(),
            found: targets.phases.len(),
        });
    }
    for (b, &phi) in bonds.iter().zip(&targets.phases) {
        if is_still(b.velocity(), b.exchange()) && lattice_distance(phi, PI) > tol {
            let (j, k) = b.endpoints();
            return Err(Error::NoBondVelocity { j, k, phase: phi });
        }
    }
    Ok(DynamicsSolution {
        half_turn: scan(array, targets, tau_max, tol, TimeLattice::HalfTurn)?,
        full_turn: scan(array, targets, tau_max, tol, TimeLattice::FullTurn)?,
    })
}

fn scan(
    array: &DotArray,
    targets: &BondTargets,
    tau_max: f64,
    tol: f64,
    lattice: TimeLattice,
) -> Result<Vec<TimeCandidate>> {
    let period = lattice.period();
    let moving: Vec<(f64, f64)> = array
        .bonds()
        .iter()
        .zip(&targets.phases)
        .filter(|(b, _)| !is_still(b.velocity(), b.exchange()))
        .map(|(b, &phi)| (b.velocity(), lattice.target(phi)))
        .collect();

    let mut times = Vec::new();
    for &(delta, target) in &moving {
        let speed = delta.abs();
        let step = period / speed;
        let first = (delta.signum() * target).rem_euclid(period) / speed;
        let count = if first > tau_max {
            0
        } else {
            ((tau_max - first) / step).floor() as usize + 1
        };
        if times.len() + count > MAX_SCAN_POINTS {
            return Err(Error::InvalidGate(format!(
                "time window {tau_max} spans more than {MAX_SCAN_POINTS} lattice points"
            )));
        }
        times.extend(
            (0..count)
                .map(|m| first + m as f64 * step)
                .filter(|&t| t > 0.0),
        );
    }
    times.sort_by(f64::total_cmp);
    times.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * b.abs());

    let mut cands: Vec<TimeCandidate> = times
        .into_iter()
        .map(|tau| {
            let residuals: Vec<f64> = array
                .bonds()
                .iter()
                .zip(&targets.phases)
                .map(|(b, &phi)| lattice_distance(tau * b.velocity() - lattice.target(phi), period))
                .collect();
            let max_residual = residuals.iter().copied().fold(0.0, f64::max);
            TimeCandidate {
                tau,
                residuals,
                max_residual,
            }
        })
        .collect();

    if cands.iter().any(|c| c.max_residual <= tol) {
        cands.retain(|c| c.max_residual <= tol);
    } else {
        cands.sort_by(|a, b| {
            a.max_residual
                .total_cmp(&b.max_residual)
                .then(a.tau.total_cmp(&b.tau))
        });
        cands.truncate(NEAR_MISSES);
    }
    Ok(cands)
}
