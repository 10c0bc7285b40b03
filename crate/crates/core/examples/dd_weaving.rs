//! Interleaving XY decoupling into a calibrated schedule keeps every bond
//! phase and cancels the net flip.

use intrinsic_gates::calib::{
    extra_local_phases, pauli_twirl, weave_dd, Pauli, PulseSchedule, Stage, DEFAULT_PULSE_BUDGET,
};
use intrinsic_gates::model::{Bond, DotArray};
use nalgebra::DMatrix;
use num_complex::Complex64;

fn main() -> intrinsic_gates::Result<()> {
    let bonds = vec![
        Bond::spin_conserving(0, 1, 1e-3)?,
        Bond::spin_conserving(0, 2, 1.4e-3)?,
    ];
    let array = DotArray::from_zeeman(&[1.0, 1.37, 1.81], bonds)?;
    let plain = PulseSchedule::new(
        3,
        vec![Stage::new(900.0, &[(2, Pauli::X)]), Stage::free(1300.0)],
    )?;
    let woven = weave_dd(&plain, DEFAULT_PULSE_BUDGET)?;

    println!(
        "plain net {} pulses {:?}",
        plain.net(),
        plain.pulse_counts()
    );
    println!(
        "woven net {} pulses {:?}",
        woven.net(),
        woven.pulse_counts()
    );
    println!("woven {}", woven.to_json());
    let extra = extra_local_phases(&woven, &array)?;
    let wrapped: Vec<String> = extra
        .angles
        .iter()
        .map(|a| format!("{:.4}", a.rem_euclid(std::f64::consts::TAU)))
        .collect();
    println!("extra local phases (mod 2pi) [{}]", wrapped.join(", "));

    let m = DMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::new(0.4, 0.0),
            Complex64::new(0.2, -0.1),
            Complex64::new(0.2, 0.1),
            Complex64::new(-0.4, 0.0),
        ],
    );
    println!("twirl of a traceless coupling: {}", pauli_twirl(&m));
    Ok(())
}
