use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{equiv_up_to_free_phase, Equivalence, FreePhase, PhaseVector};
use crate::calib::pauli::PauliAssignment;
use crate::calib::schedule::PulseSchedule;
use crate::error::{Error, Result};
use crate::model::DotArray;
use crate::sim::{ideal_pulsed_phases, Evolver};

/// Local phases picked up from the Zeeman terms in flipped frames.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtraPhases {
    /// `phi'_j` in `prod_j exp(-i phi'_j sigma^Z_j)`.
    pub angles: Vec<f64>,
    /// The same rotation as a free phase on basis states.
    pub free: FreePhase,
    /// Net Pauli left by the pulses.
    pub net: PauliAssignment,
}

/// `phi'_j = sum_n (sig(Q_nj) - sig(Q_Nj)) eps_j tau_n / 2`, so that the
/// pulsed evolution is `Q prod_j exp(-i phi'_j Z_j) exp(i sum_n tau_n Lambda^(n))`
/// to first order.
pub fn extra_local_phases(schedule: &PulseSchedule, array: &DotArray) -> Result<ExtraPhases> {
    let n = array.n_qubits();
    if schedule.n_qubits() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: schedule.n_qubits(),
        });
    }
    let net = schedule.net();
    let eps = array.zeeman();
    let mut angles = vec![0.0; n];
    for (stage, q) in schedule.stages().iter().zip(schedule.frames()) {
        for j in 0..n {
            angles[j] += 0.5 * (q.sig(j) - net.sig(j)) * eps[j] * stage.tau;
        }
    }
    let free = FreePhase::new(
        -angles.iter().sum::<f64>(),
        angles.iter().map(|a| 2.0 * a).collect(),
    );
    Ok(ExtraPhases { angles, free, net })
}

/// Exact check of a pulsed schedule against a diagonal target.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScheduleCheck {
    /// Free-phase equivalence of the stripped evolution with the target.
    pub target: Equivalence,
    /// Deviation of the stripped evolution from the first-order prediction,
    /// up to a global phase.
    pub first_order: f64,
    /// Weight outside the diagonal after undoing the net Pauli.
    pub off_diagonal: f64,
}

/// Undoes the net Pauli of `u`, leaving (approximately) a diagonal gate.
pub fn strip_net_pauli(u: &DMatrix<Complex64>, net: &PauliAssignment) -> DMatrix<Complex64> {
    net.apply_left(u)
}

pub fn verify_schedule(
    array: &DotArray,
    schedule: &PulseSchedule,
    gate: &PhaseVector,
    tol: f64,
) -> Result<ScheduleCheck> {
    let u = Evolver::new(array)?.pulsed(schedule)?;
    let extra = extra_local_phases(schedule, array)?;
    let stripped = strip_net_pauli(&u, &extra.net);
    let diag = PhaseVector::from_diagonal(&stripped);
    let off_diagonal = (0..stripped.ncols())
        .map(|c| 1.0 - stripped[(c, c)].norm_sqr())
        .fold(0.0, f64::max);
    let predicted = &ideal_pulsed_phases(array, schedule) + &extra.free.expand();
    let shift = &diag - &predicted;
    let global = PhaseVector::from_fn(array.n_qubits(), |_| shift.values()[0]);
    let first_order = shift.max_deviation(&global);
    let target = equiv_up_to_free_phase(&diag, gate, tol)?;
    Ok(ScheduleCheck {
        target,
        first_order,
        off_diagonal,
    })
}
