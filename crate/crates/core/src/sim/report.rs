use std::io::Write;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{FreePhase, PhaseVector};
use crate::error::Result;
use crate::model::DotArray;
use crate::sim::correction::optimal_phase_correction;
use crate::sim::evolution::{ideal_evolution, Evolver};
use crate::sim::fidelity::{average_gate_fidelity, fidelity_lower_bound, residues};
use crate::sim::perturbation::exact_level_shifts;

mod complex_rows {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(m: &DMatrix<Complex64>, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<[f64; 2]>> = m
            .row_iter()
            .map(|r| r.iter().map(|z| [z.re, z.im]).collect())
            .collect();
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<DMatrix<Complex64>, D::Error> {
        let rows: Vec<Vec<[f64; 2]>> = Vec::deserialize(d)?;
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != m) {
            return Err(serde::de::Error::custom("ragged matrix"));
        }
        Ok(DMatrix::from_fn(n, m, |i, j| {
            Complex64::new(rows[i][j][0], rows[i][j][1])
        }))
    }
}

/// Exact evolution compared against its first-order ideal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimReport {
    pub tau: f64,
    #[serde(with = "complex_rows")]
    pub u_exact: DMatrix<Complex64>,
    pub u_ideal: PhaseVector,
    pub fidelity: f64,
    pub bound: f64,
    pub residues: Vec<f64>,
    pub leak: f64,
    pub correction: FreePhase,
    pub post_residues: Vec<f64>,
}

impl SimReport {
    pub fn max_residue(&self) -> f64 {
        self.residues.iter().map(|r| r.abs()).fold(0.0, f64::max)
    }

    pub fn max_post_residue(&self) -> f64 {
        self.post_residues
            .iter()
            .map(|r| r.abs())
            .fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

pub fn simulate(array: &DotArray, tau: f64) -> Result<SimReport> {
    simulate_with(&Evolver::new(array)?, array, tau)
}

pub fn simulate_with(evolver: &Evolver, array: &DotArray, tau: f64) -> Result<SimReport> {
    let u_exact = evolver.qubit_frame(tau)?;
    let u_ideal = ideal_evolution(array, tau);
    let res = residues(&u_exact, &u_ideal);
    let leak = exact_level_shifts(evolver, tau)?.leak;
    let corr = optimal_phase_correction(&res, array.n_qubits())?;
    Ok(SimReport {
        tau,
        fidelity: average_gate_fidelity(&u_exact, &u_ideal),
        bound: fidelity_lower_bound(&res, leak),
        u_exact,
        u_ideal,
        residues: res,
        leak,
        correction: corr.y,
        post_residues: corr.post,
    })
}

/// One point of an exchange-strength sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub ratio: f64,
    pub tau: f64,
    pub infidelity: f64,
    pub bound: f64,
    pub max_residue: f64,
    pub leak: f64,
}

/// Log-spaced grid from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..steps)
            .map(|i| (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / (steps - 1) as f64).exp())
            .collect(),
    }
}

/// Rescales every exchange so that `max J / min eps` equals each ratio, and
/// the time so that `tau * max J` stays at its value for `array`.
pub fn exchange_sweep(array: &DotArray, tau: f64, ratios: &[f64]) -> Result<Vec<SweepRow>> {
    let eps_min = array.zeeman().into_iter().fold(f64::INFINITY, f64::min);
    let j0 = array.max_exchange();
    ratios
        .par_iter()
        .map(|&ratio| {
            let scale = if j0 > 0.0 { ratio * eps_min / j0 } else { 1.0 };
            let scaled = array.with_exchange_scaled(scale);
            let t = tau / scale;
            let r = simulate(&scaled, t)?;
            Ok(SweepRow {
                ratio,
                tau: t,
                infidelity: 1.0 - r.fidelity,
                bound: r.bound,
                max_residue: r.max_residue(),
                leak: r.leak,
            })
        })
        .collect()
}

pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let cov: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let var: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    cov / var
}
