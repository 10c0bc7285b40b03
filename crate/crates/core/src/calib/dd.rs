use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::calib::pauli::{Pauli, PauliAssignment};
use crate::calib::schedule::{PulseOp, PulseSchedule, Stage};
use crate::error::{Error, Result};

/// Default cap on pulses per qubit for [`weave_dd`].
pub const DEFAULT_PULSE_BUDGET: usize = 64;

/// Interleaves decoupling into a schedule.
///
/// The stages are played four times at a quarter of their durations. Each
/// copy ends by undoing its net flips, or by the complement of those flips
/// (a global flip, invisible to every bond) when that is needed for every
/// qubit to be pulsed. Each qubit therefore sees a multiple of four pulses,
/// relabelled X, Y, X, Y in time order, so the net Pauli is the identity up
/// to phase and every stage keeps its bond signs.
pub fn weave_dd(schedule: &PulseSchedule, budget: usize) -> Result<PulseSchedule> {
    let n = schedule.n_qubits();
    let flips = schedule.net();
    let counts = schedule.pulse_counts();
    let all = PauliAssignment::on(n, &(0..n).collect::<Vec<_>>(), Pauli::X);
    let reset_only = PauliAssignment::new(
        (0..n)
            .map(|j| {
                if flips.get(j).flips() {
                    Pauli::X
                } else {
                    Pauli::I
                }
            })
            .collect(),
    );
    let idle = (0..n).any(|j| counts[j] == 0 && !flips.get(j).flips());
    let closing = if idle {
        reset_only.compose(&all)
    } else {
        reset_only
    };

    let mut base: Vec<Stage> = schedule
        .stages()
        .iter()
        .map(|s| Stage {
            tau: s.tau / 4.0,
            pulse: s
                .pulse
                .iter()
                .filter(|op| op.pauli.flips())
                .copied()
                .collect(),
        })
        .collect();
    if base.is_empty() {
        base.push(Stage::free(0.0));
    }
    // Merge the closing flips into the last pulse of the copy.
    let last = base.last_mut().expect("non-empty");
    let mut end = vec![false; n];
    for op in &last.pulse {
        end[op.dot] ^= true;
    }
    for (j, slot) in end.iter_mut().enumerate() {
        *slot ^= closing.get(j).flips();
    }
    last.pulse = (0..n)
        .filter(|&j| end[j])
        .map(|dot| PulseOp {
            dot,
            pauli: Pauli::X,
        })
        .collect();

    let mut stages: Vec<Stage> = (0..4).flat_map(|_| base.clone()).collect();
    let mut seen = vec![0usize; n];
    for s in &mut stages {
        for op in &mut s.pulse {
            op.pauli = if seen[op.dot].is_multiple_of(2) {
                Pauli::X
            } else {
                Pauli::Y
            };
            seen[op.dot] += 1;
        }
    }
    if let Some(qubit) = (0..n).find(|&j| seen[j] > budget) {
        return Err(Error::BudgetExceeded {
            qubit,
            pulses: seen[qubit],
            budget,
        });
    }
    PulseSchedule::new(n, stages)
}

/// `sum_a s_a M s_a` over `I, X, Y, Z` for a single-qubit operator. Equals
/// `2 tr(M) I`, so an XY cycle averages away any traceless coupling.
pub fn pauli_twirl(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z]
        .iter()
        .map(|p| {
            let s = p.matrix();
            &s * m * &s
        })
        .fold(DMatrix::zeros(2, 2), |acc, x| acc + x)
}
