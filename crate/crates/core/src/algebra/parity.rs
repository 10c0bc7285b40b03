use serde::{Deserialize, Serialize};

use crate::algebra::gate::MqcpFactor;
use crate::algebra::phase::{FreePhase, PhaseVector};
use crate::basis::{bit, dim, mask, wrap_pi, wrap_tau};
use crate::error::{Error, Result};

/// Sign matrix with one row per target bitstring `a` and columns
/// `(phi_c, phi_1, ..., phi_{N-1})`.
pub fn parity_matrix(n_qubits: usize) -> Vec<Vec<i8>> {
    assert!(n_qubits >= 2, "parity matrix needs at least two qubits");
    (0..dim(n_qubits - 1))
        .map(|a| {
            std::iter::once(-1)
                .chain((1..n_qubits).map(|j| if bit(a, j, n_qubits) == 1 { -1 } else { 1 }))
                .collect()
        })
        .collect()
}

/// Reduced gate vector `theta(a) = Theta[~a'] - Theta[a']` where `a'` is `a`
/// with qubit 0 down. Equals the upper half when the lower half vanishes.
pub fn reduced_gate_vector(gate: &PhaseVector) -> Vec<f64> {
    let half = gate.len() / 2;
    let v = gate.values();
    (0..half)
        .map(|a| wrap_tau(v[half + a] - v[half - 1 - a]))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParitySolution {
    pub feasible: bool,
    /// Local phases with qubit 0 as the control; the global part is left
    /// at zero since only the dynamics fix it.
    pub free: Option<FreePhase>,
    pub residual: f64,
}

fn apply_parity(phi: &[f64], a: usize, n_qubits: usize) -> f64 {
    -phi[0]
        + (1..n_qubits)
            .map(|j| {
                if bit(a, j, n_qubits) == 1 {
                    -phi[j]
                } else {
                    phi[j]
                }
            })
            .sum::<f64>()
}

/// Solves `L phi = theta_g (mod 2pi)` for a reduced gate vector.
///
/// Each `phi_j` is fixed modulo `pi` by rows `0` and `e_j`, and `phi_c` by row
/// `0`. Moving any `phi_j` by `pi` shifts every row by the same `pi`, which
/// row `0` absorbs into `phi_c`, so the single candidate decides feasibility.
pub fn solve_parity(theta_g: &[f64], n_qubits: usize, tol: f64) -> Result<ParitySolution> {
    if n_qubits < 2 {
        return Err(Error::InvalidGate(
            "parity rule needs at least two qubits".into(),
        ));
    }
    if theta_g.len() != dim(n_qubits - 1) {
        return Err(Error::DimensionMismatch {
            expected: dim(n_qubits - 1),
            found: theta_g.len(),
        });
    }
    let mut phi = vec![0.0; n_qubits];
    for j in 1..n_qubits {
        phi[j] = wrap_tau(wrap_tau(theta_g[0] - theta_g[mask(j, n_qubits)]) / 2.0);
    }
    phi[0] = wrap_tau(phi[1..].iter().sum::<f64>() - theta_g[0]);
    let residual = theta_g
        .iter()
        .enumerate()
        .map(|(a, &t)| wrap_pi(apply_parity(&phi, a, n_qubits) - t).abs())
        .fold(0.0, f64::max);
    let feasible = residual <= tol;
    Ok(ParitySolution {
        feasible,
        free: feasible.then(|| FreePhase::new(0.0, phi)),
        residual,
    })
}

/// Parity rule on a full gate vector with qubit 0 as control.
pub fn solve_parity_gate(gate: &PhaseVector, tol: f64) -> Result<ParitySolution> {
    solve_parity(&reduced_gate_vector(gate), gate.n_qubits(), tol)
}

/// Closed-form local phases for a single-control factor:
/// `phi_j = -theta_j/2 mod pi` and `phi_c = sum phi_j mod 2pi`.
pub fn mqcp_phase_solution(factor: &MqcpFactor, n_qubits: usize) -> FreePhase {
    let mut local = vec![0.0; n_qubits];
    for t in &factor.targets {
        local[t.dot] = (-t.theta / 2.0).rem_euclid(std::f64::consts::PI);
    }
    local[factor.control] = wrap_tau(factor.targets.iter().map(|t| local[t.dot]).sum());
    FreePhase::new(0.0, local)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ControlAnalysis {
    /// First target qubit that also acts as a control.
    pub second_control: Option<usize>,
    /// The gate collapses to a two-qubit controlled phase with that qubit.
    pub degenerate: bool,
}

impl ControlAnalysis {
    pub fn has_second_control(&self) -> bool {
        self.second_control.is_some()
    }
}

/// Looks for a target qubit `j` that also gates the phase, meaning `theta_g`
/// vanishes whenever `j` is up. The remaining half is then constant exactly
/// when the gate is a plain controlled phase between qubit 0 and `j`.
pub fn assert_single_control(theta_g: &[f64], n_qubits: usize, tol: f64) -> ControlAnalysis {
    let none = ControlAnalysis {
        second_control: None,
        degenerate: false,
    };
    if n_qubits < 2 || theta_g.len() != dim(n_qubits - 1) {
        return none;
    }
    let zero = |x: f64| wrap_pi(x).abs() <= tol;
    if theta_g.iter().all(|&t| zero(t)) {
        return none;
    }
    for j in 1..n_qubits {
        let (up, down): (Vec<_>, Vec<_>) =
            (0..theta_g.len()).partition(|&a| bit(a, j, n_qubits) == 0);
        if up.iter().all(|&a| zero(theta_g[a])) {
            let c = theta_g[down[0]];
            return ControlAnalysis {
                second_control: Some(j),
                degenerate: down.iter().all(|&a| zero(theta_g[a] - c)),
            };
        }
    }
    none
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::gate::GateSpec;
    use crate::algebra::PHASE_TOL;
    use std::f64::consts::PI;

    fn pv(v: &[f64]) -> PhaseVector {
        PhaseVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn matrices() {
        assert_eq!(parity_matrix(2), vec![vec![-1, 1], vec![-1, -1]]);
        assert_eq!(
            parity_matrix(3),
            vec![
                vec![-1, 1, 1],
                vec![-1, 1, -1],
                vec![-1, -1, 1],
                vec![-1, -1, -1]
            ]
        );
        let m = parity_matrix(4);
        assert_eq!(m.len(), 8);
        for row in &m {
            assert_eq!(row.len(), 4);
            assert_eq!(row[0], -1);
            let s: i32 = row.iter().map(|&x| x as i32).sum();
            assert_eq!((s - 4).rem_euclid(2), 0, "a sum of four signs is even");
        }
    }

    #[test]
    fn ccz_is_infeasible() {
        let s = solve_parity(&[0.0, 0.0, 0.0, PI], 3, PHASE_TOL).unwrap();
        assert!(!s.feasible);
        assert!(s.free.is_none());
        assert!((s.residual - PI).abs() < 1e-12);
        let full = solve_parity_gate(&GateSpec::ccz().phase_vector(3).unwrap(), PHASE_TOL).unwrap();
        assert!(!full.feasible);
    }

    #[test]
    fn controlled_phase_solutions() {
        for theta in [0.3, PI, 2.0, 5.9] {
            let s = solve_parity(&[0.0, theta], 2, PHASE_TOL).unwrap();
            assert!(s.feasible);
            let phi = s.free.unwrap().local;
            assert!(
                wrap_pi(2.0 * (phi[1] + theta / 2.0)).abs() < 1e-12,
                "phi_1 = -theta/2 mod pi"
            );
            assert!(
                wrap_pi(phi[0] - phi[1]).abs() < 1e-12,
                "phi_c = phi_1 mod 2pi"
            );
        }
        let (t1, t2) = (0.7, 2.9);
        let s = solve_parity(&[0.0, t2, t1, t1 + t2], 3, PHASE_TOL).unwrap();
        let phi = s.free.unwrap().local;
        assert!(wrap_pi(2.0 * phi[1] + t1).abs() < 1e-12);
        assert!(wrap_pi(2.0 * phi[2] + t2).abs() < 1e-12);
        assert!(wrap_pi(phi[0] - phi[1] - phi[2]).abs() < 1e-12);
    }

    #[test]
    fn closed_form_matches_solver() {
        let f = MqcpFactor::new(0, &[(1, PI), (2, PI)]);
        let free = mqcp_phase_solution(&f, 3);
        assert!((free.local[1] - PI / 2.0).abs() < 1e-15);
        assert!((free.local[2] - PI / 2.0).abs() < 1e-15);
        assert!((free.local[0] - PI).abs() < 1e-15);

        let f = MqcpFactor::new(0, &[(1, 0.0), (2, 0.0)]);
        assert_eq!(mqcp_phase_solution(&f, 3), FreePhase::zero(3));

        let f = MqcpFactor::new(0, &[(1, PI)]);
        assert_eq!(mqcp_phase_solution(&f, 2).local, vec![PI / 2.0, PI / 2.0]);

        let f = MqcpFactor::new(0, &[(1, 0.4), (2, 4.0), (3, 1.3)]);
        let gate = GateSpec::Factors(vec![f.clone()]).phase_vector(4).unwrap();
        let solved = solve_parity_gate(&gate, PHASE_TOL).unwrap().free.unwrap();
        let closed = mqcp_phase_solution(&f, 4);
        // Both make the gate plus free phase reflective.
        for free in [solved, closed] {
            let total = &gate + &free.expand();
            let v = total.values();
            for n in 0..v.len() {
                assert!(wrap_pi(v[n] - v[v.len() - 1 - n]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn general_lower_half() {
        // Any free phase added to a feasible gate stays feasible.
        let gate = GateSpec::cz(0, 2, 1.1).phase_vector(3).unwrap();
        let shifted = &gate + &FreePhase::new(0.4, vec![2.0, -1.0, 0.3]).expand();
        assert!(solve_parity_gate(&shifted, PHASE_TOL).unwrap().feasible);
    }

    #[test]
    fn control_analysis() {
        let a = assert_single_control(&[0.0, 0.0, 0.0, PI], 3, PHASE_TOL);
        assert_eq!(a.second_control, Some(1));
        assert!(!a.degenerate);
        let a = assert_single_control(&[0.0, 0.5, 1.2, 1.7], 3, PHASE_TOL);
        assert!(!a.has_second_control());
        let a = assert_single_control(&[0.0, 0.0, 0.9, 0.9], 3, PHASE_TOL);
        assert!(a.has_second_control() && a.degenerate);
        assert!(
            solve_parity(&[0.0, 0.0, 0.9, 0.9], 3, PHASE_TOL)
                .unwrap()
                .feasible
        );
        assert!(!assert_single_control(&[0.0; 4], 3, PHASE_TOL).has_second_control());
    }

    #[test]
    fn rows_one_to_three_fix_row_four() {
        // r0 - r1 - r2 + r3 = 0, so CCZ's pi on the last row can never be met.
        let m = parity_matrix(3);
        for c in 0..3 {
            assert_eq!(m[0][c] - m[1][c] - m[2][c] + m[3][c], 0);
        }
    }

    #[test]
    fn reduced_vector_of_controlled_gates() {
        let g = pv(&[0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 2.0, 3.0]);
        assert_eq!(reduced_gate_vector(&g), vec![0.0, 1.0, 2.0, 3.0]);
    }
}
