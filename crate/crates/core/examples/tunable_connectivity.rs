//! Spin-orbit rotation and field angle set each bond's velocity; at the off
//! point a bond stops entangling while still coupled.

use std::f64::consts::PI;

use intrinsic_gates::algebra::{equiv_up_to_free_phase, PHASE_TOL};
use intrinsic_gates::model::{off_point_gamma, Bond, DotArray};
use intrinsic_gates::sim::ideal_evolution;

fn main() -> intrinsic_gates::Result<()> {
    let theta_b = PI / 3.0;
    for gamma in [0.0, 0.3, 0.6, 0.9] {
        let b = Bond::from_soi(0, 1, 1.0, gamma, theta_b)?;
        println!(
            "gamma_so={gamma:.1}: T={:.3} S={:.3} velocity={:+.3}",
            b.spin_conserved_strength(),
            b.spin_flipped_strength(),
            b.velocity()
        );
    }
    let off = off_point_gamma(theta_b).expect("field angle admits an off point");
    let switched = Bond::from_soi(1, 2, 1.0, off, theta_b)?;
    println!(
        "off point gamma_so={off:.4}, velocity {:.1e}",
        switched.velocity()
    );

    // With the second bond off, the array acts like the first bond alone.
    let zeeman = [1.0, 1.4, 1.9];
    let first = Bond::spin_conserving(0, 1, 1.0)?;
    let both = DotArray::from_zeeman(&zeeman, vec![first, switched])?;
    let alone = DotArray::from_zeeman(&zeeman, vec![first])?;
    for tau in [1.0, 7.3, 20.0] {
        let eq = equiv_up_to_free_phase(
            &ideal_evolution(&both, tau),
            &ideal_evolution(&alone, tau),
            PHASE_TOL,
        )?;
        println!(
            "tau={tau}: matches single bond up to free phases: {}",
            eq.equivalent
        );
    }
    Ok(())
}
