use thiserror::Error;

/// Errors raised by the device model, solvers and simulators.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dot array: {0}")]
    InvalidArray(String),

    #[error("bond ({j},{k}) is not normalized: |t|^2 + |s|^2 - 1 = {deviation:e}")]
    NotNormalized { j: usize, k: usize, deviation: f64 },

    #[error(
        "degenerate charge state: denominator {denominator:e} vanishes relative to U = {charging}"
    )]
    DegenerateChargeState { denominator: f64, charging: f64 },

    #[error("invalid gate: {0}")]
    InvalidGate(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("bond ({j},{k}) has zero velocity but needs phase {phase} (mod pi)")]
    NoBondVelocity { j: usize, k: usize, phase: f64 },

    #[error("degenerate spectrum: levels {n} and {m} are coupled with gap {gap:e} below threshold {threshold:e}")]
    DegenerateSpectrum {
        n: usize,
        m: usize,
        gap: f64,
        threshold: f64,
    },

    #[error("hermitian eigensolver did not converge")]
    EigensolverFailure,

    #[error(
        "non-perturbative regime: basis state {state} has best eigenvector overlap {overlap:.3}"
    )]
    NonPerturbative { state: usize, overlap: f64 },

    #[error("no non-negative interval solution within the offset bound (best residual {best_residual:e})")]
    Infeasible { best_residual: f64 },

    #[error("qubit {qubit} needs {pulses} pulses, budget is {budget}")]
    BudgetExceeded {
        qubit: usize,
        pulses: usize,
        budget: usize,
    },

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
