//! A six-dot tree at a quarter turn splits into controlled phases on its
//! bonds plus local corrections.

use std::f64::consts::PI;

use intrinsic_gates::algebra::{
    decompose_intrinsic, solve_dynamics, BondTargets, GateSpec, TimeLattice, PHASE_TOL,
};
use intrinsic_gates::model::{Bond, DotArray};

fn main() -> intrinsic_gates::Result<()> {
    let edges = [(0, 1), (0, 2), (0, 3), (1, 4), (1, 5)];
    let bonds = edges
        .iter()
        .map(|&(j, k)| Bond::spin_conserving(j, k, 1e-2))
        .collect::<Result<_, _>>()?;
    let array = DotArray::from_zeeman(&[1.0, 1.13, 1.29, 1.42, 1.61, 1.77], bonds)?;

    let gate = GateSpec::Factors(vec![
        intrinsic_gates::algebra::MqcpFactor::new(0, &[(1, PI), (2, PI), (3, PI)]),
        intrinsic_gates::algebra::MqcpFactor::new(1, &[(4, PI), (5, PI)]),
    ])
    .phase_vector(6)?;
    let targets = BondTargets::from_gate(&array, &gate, PHASE_TOL)?;
    let tau = solve_dynamics(&array, &targets, 1e4, PHASE_TOL)?
        .first_exact(TimeLattice::HalfTurn, PHASE_TOL)
        .expect("homogeneous bonds share a gate time");
    println!("bond phases {:?}", targets.phases);
    println!("first gate time {tau:.4}");

    let d = decompose_intrinsic(&array, tau)?;
    println!("factors {}", d.factors.to_json());
    let local: Vec<String> = d
        .corrections
        .local
        .iter()
        .map(|p| format!("{:.3}pi", p / PI))
        .collect();
    println!("local corrections [{}]", local.join(", "));
    Ok(())
}
