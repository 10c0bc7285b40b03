//! Calibrating a rectangle with unequal bonds: X pulses on two dots steer the
//! four bond phases onto a CZ on every bond.

use std::f64::consts::PI;

use intrinsic_gates::algebra::{BondTargets, GateSpec, MqcpFactor, PHASE_TOL};
use intrinsic_gates::calib::{
    frame_sign_matrix, kspace_path, solve_intervals, verify_schedule, CalibrationTarget,
    IntervalOptions, Pauli, PauliAssignment,
};
use intrinsic_gates::model::{Bond, DotArray};

fn main() -> intrinsic_gates::Result<()> {
    let bonds = vec![
        Bond::from_soi(0, 1, 1.0e-3, 0.3, 1.1)?,
        Bond::from_soi(1, 3, 1.2e-3, 0.2, 0.7)?,
        Bond::from_soi(2, 3, 0.9e-3, 0.4, 1.3)?,
        Bond::from_soi(0, 2, 1.1e-3, 0.25, 0.9)?,
    ];
    let array = DotArray::from_zeeman(&[1.0, 1.29, 1.63, 2.05], bonds)?;
    let gate = GateSpec::Factors(vec![
        MqcpFactor::new(0, &[(1, PI), (2, PI)]),
        MqcpFactor::new(3, &[(1, PI), (2, PI)]),
    ])
    .phase_vector(4)?;

    let frames = vec![
        PauliAssignment::identity(4),
        PauliAssignment::on(4, &[2], Pauli::X),
        PauliAssignment::on(4, &[2, 3], Pauli::X),
        PauliAssignment::on(4, &[3], Pauli::X),
    ];
    println!(
        "bond signs per frame (rows N, E, S, W):\n{}",
        frame_sign_matrix(&array, &frames)
    );

    let target =
        CalibrationTarget::new(&array, &BondTargets::from_gate(&array, &gate, PHASE_TOL)?)?;
    let sol = solve_intervals(&target, &frames, &IntervalOptions::default())?;
    println!("durations {:?}", sol.durations);
    println!(
        "offsets {:?}, total time {:.1}",
        sol.offsets, sol.total_time
    );
    println!("schedule {}", sol.schedule.to_json());

    let check = verify_schedule(&array, &sol.schedule, &gate, 1e-2)?;
    println!(
        "exact check: equivalent={} residual={:.2e} first-order gap={:.2e}",
        check.target.equivalent, check.target.residual, check.first_order
    );
    for p in kspace_path(&sol.schedule, &target)?.iter().rev().take(4) {
        println!("bond {} ends at {:.4} pi", p.bond_id, p.phase_over_pi);
    }
    Ok(())
}
