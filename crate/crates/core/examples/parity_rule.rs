//! Which diagonal gates can be reached with free local phases: CCZ cannot,
//! any single-control gate can.

use std::f64::consts::PI;

use intrinsic_gates::algebra::{
    assert_single_control, mqcp_phase_solution, reduced_gate_vector, solve_parity_gate, GateSpec,
    MqcpFactor, PHASE_TOL,
};

fn main() -> intrinsic_gates::Result<()> {
    let ccz = GateSpec::ccz().phase_vector(3)?;
    let s = solve_parity_gate(&ccz, PHASE_TOL)?;
    let c = assert_single_control(&reduced_gate_vector(&ccz), 3, PHASE_TOL);
    println!(
        "CCZ: feasible={} residual={:.4} second control={:?}",
        s.feasible, s.residual, c.second_control
    );

    let factor = MqcpFactor::new(0, &[(1, PI), (2, PI / 2.0), (3, 0.3)]);
    let gate = GateSpec::Factors(vec![factor.clone()]).phase_vector(4)?;
    let s = solve_parity_gate(&gate, PHASE_TOL)?;
    println!("MQCP(0 -> pi, pi/2, 0.3): feasible={}", s.feasible);
    println!("  solver local phases      {:?}", s.free.unwrap().local);
    println!(
        "  closed-form local phases {:?}",
        mqcp_phase_solution(&factor, 4).local
    );
    Ok(())
}
