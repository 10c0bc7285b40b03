use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::algebra::PhaseVector;
use crate::calib::{conjugated_grid_vector, PulseSchedule};
use crate::error::{Error, Result};
use crate::model::{grid_vector, DotArray};
use crate::sim::hamiltonian::{build_hamiltonian, HamiltonianPair, Spectrum};

/// Cached eigendecomposition of one array's Hamiltonian.
#[derive(Debug, Clone)]
pub struct Evolver {
    hamiltonian: HamiltonianPair,
    spectrum: Spectrum,
}

impl Evolver {
    pub fn new(array: &DotArray) -> Result<Self> {
        let hamiltonian = build_hamiltonian(array);
        let spectrum = Spectrum::of(&hamiltonian.total())?;
        Ok(Evolver {
            hamiltonian,
            spectrum,
        })
    }

    pub fn hamiltonian(&self) -> &HamiltonianPair {
        &self.hamiltonian
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    /// Rotates the lab-frame propagator back by the dot Hamiltonian.
    fn to_qubit_frame(&self, mut u: DMatrix<Complex64>, tau: f64) -> DMatrix<Complex64> {
        for (n, mut row) in u.row_iter_mut().enumerate() {
            row *= Complex64::from_polar(1.0, tau * self.hamiltonian.h0[n]);
        }
        u
    }

    /// `exp(i tau H0) exp(-i tau (H0 + H_ex))`.
    pub fn qubit_frame(&self, tau: f64) -> Result<DMatrix<Complex64>> {
        check_time(tau)?;
        Ok(self.to_qubit_frame(self.spectrum.propagator(tau), tau))
    }

    /// Stage-by-stage evolution with each pulse applied after its stage.
    pub fn pulsed(&self, schedule: &PulseSchedule) -> Result<DMatrix<Complex64>> {
        let d = self.hamiltonian.h0.len();
        if 1 << schedule.n_qubits() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: 1 << schedule.n_qubits(),
            });
        }
        let mut u = DMatrix::identity(d, d);
        for (i, stage) in schedule.stages().iter().enumerate() {
            u = self.spectrum.propagator(stage.tau) * u;
            let p = schedule.pulse(i);
            if !p.is_identity() {
                u = p.apply_left(&u);
            }
        }
        Ok(self.to_qubit_frame(u, schedule.total_time()))
    }
}

fn check_time(tau: f64) -> Result<()> {
    if tau >= 0.0 && tau.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidSchedule(format!(
            "evolution time {tau} must be finite and non-negative"
        )))
    }
}

pub fn qubit_frame_evolution(array: &DotArray, tau: f64) -> Result<DMatrix<Complex64>> {
    Evolver::new(array)?.qubit_frame(tau)
}

pub fn pulsed_evolution(array: &DotArray, schedule: &PulseSchedule) -> Result<DMatrix<Complex64>> {
    Evolver::new(array)?.pulsed(schedule)
}

/// First-order evolution `exp(i tau Lambda)`.
pub fn ideal_evolution(array: &DotArray, tau: f64) -> PhaseVector {
    PhaseVector::from_rates(&grid_vector(array), tau)
}

/// First-order entangling part of a pulsed evolution, `exp(i sum_n tau_n Lambda^(n))`.
pub fn ideal_pulsed_phases(array: &DotArray, schedule: &PulseSchedule) -> PhaseVector {
    let mut total = PhaseVector::zeros(array.n_qubits());
    for (stage, q) in schedule.stages().iter().zip(schedule.frames()) {
        total = &total + &PhaseVector::from_rates(&conjugated_grid_vector(array, &q), stage.tau);
    }
    total
}

/// `max |U^dagger U - I|`.
pub fn unitarity_error(u: &DMatrix<Complex64>) -> f64 {
    (u.adjoint() * u - DMatrix::identity(u.nrows(), u.ncols())).camax()
}
