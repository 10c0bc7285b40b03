//! `H (G H)^n` with a chain of controlled-Z gates reverses the register, with
//! signs set by the adjacent `11` pairs.

use intrinsic_gates::apps::{consecutive_ones_parity, order_reversal, reversal_signs};
use intrinsic_gates::basis::bitstring;

fn main() -> intrinsic_gates::Result<()> {
    let n = 4;
    let r = order_reversal(n)?;
    for row in 0..r.nrows() {
        let line: String = (0..r.ncols())
            .map(|c| match r[(row, c)].re.round() as i32 {
                1 => " +",
                -1 => " -",
                _ => " .",
            })
            .collect();
        println!("{}{line}", bitstring(row, n));
    }
    let signs = reversal_signs(&r, n, 1e-9).expect("signed reversal");
    let agree = (0..signs.len())
        .all(|a| Ok(signs[a]) == consecutive_ones_parity(&bitstring(a, n)).map_err(|_| ()));
    println!("sign rule matches: {agree}");
    for s in ["00010", "01110", "00110", "01111"] {
        println!("{s}: {:+}", consecutive_ones_parity(s)?);
    }
    Ok(())
}
