//! Dynamical calibration: pulse frames, bond-sign patterns, interval solving,
//! decoupling and phase-space paths.

mod assign;
mod dd;
mod grid;
mod kspace;
pub mod lp;
mod pauli;
mod phases;
mod schedule;
mod solve;

pub use assign::{
    assignment_vectors, bond_signs, positively_spans, sign_matrix, AssignmentReport, SignPattern,
    MAX_ENUMERATED_DOTS,
};
pub use dd::{pauli_twirl, weave_dd, DEFAULT_PULSE_BUDGET};
pub use grid::conjugated_grid_vector;
pub use kspace::{
    closest_free_approach, kspace_path, slowest_velocity, time_upper_bound, write_path_csv,
    PathPoint,
};
pub use pauli::{Pauli, PauliAssignment};
pub use phases::{
    extra_local_phases, strip_net_pauli, verify_schedule, ExtraPhases, ScheduleCheck,
};
pub use schedule::{PulseOp, PulseSchedule, Stage};
pub use solve::{
    build_schedule, frame_sign_matrix, schedule_residual, solve_intervals, CalibrationSolution,
    CalibrationTarget, IntervalOptions,
};
