//! Exact evolution against the first-order gate while the exchange shrinks
//! relative to the Zeeman splitting. Writes the sweep as CSV to stdout.

use std::f64::consts::PI;

use intrinsic_gates::model::{Bond, DotArray};
use intrinsic_gates::sim::{exchange_sweep, log_grid, log_log_slope, simulate, write_sweep_csv};

fn main() -> intrinsic_gates::Result<()> {
    let bonds = vec![
        Bond::from_soi(0, 1, 1e-2, 0.3, 1.0)?,
        Bond::from_soi(0, 2, 1.3e-2, 0.2, 0.6)?,
    ];
    let array = DotArray::from_zeeman(&[1.0, 1.37, 1.81], bonds)?;
    let tau = PI / (2.0 * array.velocities()[0].abs());

    let r = simulate(&array, tau)?;
    eprintln!(
        "tau={tau:.2} F={:.6} bound={:.6} max residue={:.2e} after correction={:.2e}",
        r.fidelity,
        r.bound,
        r.max_residue(),
        r.max_post_residue()
    );

    let ratios = log_grid(1e-4, 1e-1, 7);
    let rows = exchange_sweep(&array, tau, &ratios)?;
    let residue: Vec<f64> = rows.iter().map(|r| r.max_residue).collect();
    let leak: Vec<f64> = rows.iter().map(|r| r.leak).collect();
    eprintln!(
        "slopes: residue {:.3}, leak {:.3}",
        log_log_slope(&ratios, &residue),
        log_log_slope(&ratios, &leak)
    );
    write_sweep_csv(&rows, std::io::stdout())
}
