//! Diagonal gate algebra: phase vectors, free phases and the rules that decide
//! whether a target gate is reachable intrinsically.

mod decompose;
mod dynamics;
mod gate;
mod parity;
mod phase;

pub use decompose::{decompose_intrinsic, Decomposition};
pub use dynamics::{
    solve_dynamics, BondTargets, DynamicsSolution, TimeCandidate, TimeLattice, MAX_SCAN_POINTS,
};
pub use gate::{GateSpec, MqcpFactor, Target};
pub use parity::{
    assert_single_control, mqcp_phase_solution, parity_matrix, reduced_gate_vector, solve_parity,
    solve_parity_gate, ControlAnalysis, ParitySolution,
};
pub use phase::{equiv_up_to_free_phase, Equivalence, FreePhase, PhaseVector, PHASE_TOL};
