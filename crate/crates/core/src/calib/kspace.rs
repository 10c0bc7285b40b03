use std::io::Write;

use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use crate::calib::schedule::PulseSchedule;
use crate::calib::solve::CalibrationTarget;
use crate::error::{Error, Result};

/// Vertex of a bond's accumulated-phase path.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathPoint {
    pub time: f64,
    pub bond_id: usize,
    pub phase_over_pi: f64,
    pub folded_phase_over_pi: f64,
}

/// Piecewise-linear accumulated phase `sum a_w tau Delta_w / pi` of every
/// bond at each stage boundary, raw and folded into `[0, 1)`.
pub fn kspace_path(schedule: &PulseSchedule, target: &CalibrationTarget) -> Result<Vec<PathPoint>> {
    if schedule.n_qubits() != target.n_qubits {
        return Err(Error::DimensionMismatch {
            expected: target.n_qubits,
            found: schedule.n_qubits(),
        });
    }
    let frames = schedule.frames();
    let mut acc = vec![0.0; target.bonds.len()];
    let mut time = 0.0;
    let mut out = Vec::new();
    let emit = |time: f64, acc: &[f64], out: &mut Vec<PathPoint>| {
        for (w, &p) in acc.iter().enumerate() {
            out.push(PathPoint {
                time,
                bond_id: w,
                phase_over_pi: p,
                folded_phase_over_pi: p.rem_euclid(1.0),
            });
        }
    };
    emit(time, &acc, &mut out);
    for (stage, q) in schedule.stages().iter().zip(&frames) {
        for (w, &(j, k)) in target.bonds.iter().enumerate() {
            acc[w] += q.sig(j) * q.sig(k) * target.velocities[w] * stage.tau / std::f64::consts::PI;
        }
        time += stage.tau;
        emit(time, &acc, &mut out);
    }
    Ok(out)
}

pub fn write_path_csv<W: Write>(points: &[PathPoint], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for p in points {
        w.serialize(p)?;
    }
    w.flush()?;
    Ok(())
}

/// Smallest distance, over `samples` evenly spaced times in `(0, horizon]`,
/// between the free-evolution point `tau Delta / pi` and the target lattice
/// `phi / pi + Z^B` (max norm).
pub fn closest_free_approach(
    velocities: &[f64],
    phases: &[f64],
    horizon: f64,
    samples: usize,
) -> (f64, f64) {
    let mut best = (f64::INFINITY, 0.0);
    for i in 1..=samples {
        let t = horizon * i as f64 / samples as f64;
        let d = velocities
            .iter()
            .zip(phases)
            .map(|(v, p)| {
                let x = (t * v - p) / std::f64::consts::PI;
                (x - x.round()).abs()
            })
            .fold(0.0, f64::max);
        if d < best.0 {
            best = (d, t);
        }
    }
    best
}

/// Rough time for an uncalibrated array of `n` targets to come within
/// infidelity `epsilon` of a lattice point, given the slowest velocity `v_min`.
pub fn time_upper_bound(n: usize, epsilon: f64, v_min: f64) -> f64 {
    assert!(n >= 2 && epsilon > 0.0 && epsilon < 1.0 && v_min > 0.0);
    let m = (n - 1) as f64;
    gamma(n as f64 / 2.0) / (m.sqrt() * v_min)
        * ((8.0 / std::f64::consts::PI) / (epsilon * m)).powf((n as f64 - 2.0) / 2.0)
}

/// Slowest bond velocity in cycles per unit time, `min |Delta_w| / 2pi`.
pub fn slowest_velocity(velocities: &[f64]) -> f64 {
    velocities
        .iter()
        .map(|v| v.abs())
        .fold(f64::INFINITY, f64::min)
        / (2.0 * std::f64::consts::PI)
}
