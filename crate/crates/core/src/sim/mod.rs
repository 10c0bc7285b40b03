//! Exact and perturbative dynamics of the exchange-coupled register.

mod correction;
mod evolution;
mod fidelity;
mod hamiltonian;
mod perturbation;
mod report;

pub use correction::{free_phase_matrix, optimal_phase_correction, PhaseCorrection};
pub use evolution::{
    ideal_evolution, ideal_pulsed_phases, pulsed_evolution, qubit_frame_evolution, unitarity_error,
    Evolver,
};
pub use fidelity::{average_gate_fidelity, fidelity_lower_bound, residues};
pub use hamiltonian::{build_hamiltonian, zeeman_energies, HamiltonianPair, Spectrum};
pub use perturbation::{
    exact_level_shifts, match_eigenstates, perturbation_second_order, LevelShifts, Perturbation,
};
pub use report::{
    exchange_sweep, log_grid, log_log_slope, simulate, simulate_with, write_sweep_csv, SimReport,
    SweepRow,
};
