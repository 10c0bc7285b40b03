//! One multi-target phase gate measures a four-qubit Z or X stabilizer.

use intrinsic_gates::apps::{
    parity_check, random_state, surface_code_cycle_unit, MeasureBasis, Transcript,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> intrinsic_gates::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for basis in [MeasureBasis::Z, MeasureBasis::X] {
        let pc = parity_check(4, basis)?;
        let report = pc.verify(200, &mut rng)?;
        println!(
            "{basis:?} check on 4 targets: {}/{} agree, worst {:.1e}",
            report.agreed, report.trials, report.worst
        );
    }

    let pc = parity_check(2, MeasureBasis::Z)?;
    let input = pc.prepare(&random_state(2, &mut rng));
    let (out, outcomes) = pc.circuit.run(&input, &mut rng)?;
    let t = Transcript {
        circuit: pc.circuit.clone(),
        seed: 42,
        input: input.iter().copied().collect(),
        outcomes,
        output: out.iter().copied().collect(),
    };
    println!("{}", t.to_json());

    let unit = surface_code_cycle_unit();
    let data = random_state(2, &mut rng);
    let a = unit.cycle(&data, &mut rng)?;
    let b = unit.cycle(&a.data, &mut rng)?;
    println!(
        "surface unit outcomes (Z, X): {:?} then {:?}",
        (a.z_outcome, a.x_outcome),
        (b.z_outcome, b.x_outcome)
    );
    Ok(())
}
