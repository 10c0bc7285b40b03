//! Circuits built from intrinsic gates: a triangle logical Z, parity checks,
//! a surface-code unit cell and fast array reversal.

mod circuit;
mod codes;
mod reversal;

pub use circuit::{
    append_zeros, basis_state, hadamard, pauli_string_expectation, random_state, Circuit,
    MeasureBasis, Op, Outcome, State, Transcript,
};
pub use codes::{
    logical_z_triangle, parity_check, surface_code_cycle_unit, CheckReport, CycleResult,
    ParityCheck, SurfaceUnit,
};
pub use reversal::{
    chain_gate, consecutive_ones_parity, hadamard_all, order_reversal, reversal_signs,
    reverse_index,
};
