use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::algebra::GateSpec;
use crate::basis::{bit, dim};
use crate::error::{Error, Result};

/// Chain of `pi` controlled phases on neighbouring qubits.
pub fn chain_gate(n_qubits: usize) -> DMatrix<Complex64> {
    let spec = GateSpec::Factors(
        (0..n_qubits - 1)
            .map(|k| crate::algebra::MqcpFactor::new(k, &[(k + 1, PI)]))
            .collect(),
    );
    let d = spec
        .phase_vector(n_qubits)
        .expect("chain spec")
        .to_unitary_diagonal();
    DMatrix::from_diagonal(&nalgebra::DVector::from_vec(d))
}

/// `H` on every qubit.
pub fn hadamard_all(n_qubits: usize) -> DMatrix<Complex64> {
    let d = dim(n_qubits);
    let s = (d as f64).sqrt().recip();
    DMatrix::from_fn(d, d, |a, b| {
        let sign = if (a & b).count_ones() % 2 == 0 {
            1.0
        } else {
            -1.0
        };
        Complex64::new(sign * s, 0.0)
    })
}

/// `H (G H)^n`, which reverses the qubit order up to signs.
pub fn order_reversal(n_qubits: usize) -> Result<DMatrix<Complex64>> {
    if !(2..=8).contains(&n_qubits) {
        return Err(Error::InvalidGate(format!(
            "reversal on {n_qubits} qubits (2 to 8 supported)"
        )));
    }
    let h = hadamard_all(n_qubits);
    let gh = chain_gate(n_qubits) * &h;
    let mut r = h;
    for _ in 0..n_qubits {
        r *= &gh;
    }
    Ok(r)
}

/// Index of the bit-reversed basis state.
pub fn reverse_index(index: usize, n_qubits: usize) -> usize {
    (0..n_qubits).fold(0, |acc, q| acc | (bit(index, q, n_qubits) << q))
}

/// `(-1)^c` where `c` counts adjacent `11` pairs, so a run of `r` ones
/// contributes `r - 1`.
pub fn consecutive_ones_parity(bits: &str) -> Result<i8> {
    let b: Vec<bool> = bits
        .chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(Error::InvalidGate(format!("not a bit string: {bits:?}"))),
        })
        .collect::<Result<_>>()?;
    let pairs = b.windows(2).filter(|w| w[0] && w[1]).count();
    Ok(if pairs % 2 == 0 { 1 } else { -1 })
}

/// Signs `p(a)` read off `R|a> = p(a)|reverse(a)>`; `None` if `r` is not a
/// signed reversal.
pub fn reversal_signs(r: &DMatrix<Complex64>, n_qubits: usize, tol: f64) -> Option<Vec<i8>> {
    let d = dim(n_qubits);
    let mut signs = Vec::with_capacity(d);
    for a in 0..d {
        let ra = reverse_index(a, n_qubits);
        for row in 0..d {
            let z = r[(row, a)];
            let want = if row == ra { 1.0 } else { 0.0 };
            if (z.norm() - want).abs() > tol || z.im.abs() > tol {
                return None;
            }
        }
        signs.push(if r[(ra, a)].re > 0.0 { 1 } else { -1 });
    }
    Some(signs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::bitstring;

    #[test]
    fn examples() {
        for (s, p) in [("00010", 1), ("01110", 1), ("00110", -1), ("01111", -1)] {
            assert_eq!(consecutive_ones_parity(s).unwrap(), p, "{s}");
        }
        assert!(consecutive_ones_parity("01a").is_err());
    }

    #[test]
    fn brute_force_matches_rule() {
        for n in 2..=6 {
            let r = order_reversal(n).unwrap();
            let signs = reversal_signs(&r, n, 1e-9).expect("signed reversal");
            for (a, s) in signs.iter().enumerate() {
                assert_eq!(
                    *s,
                    consecutive_ones_parity(&bitstring(a, n)).unwrap(),
                    "n={n} a={a}"
                );
            }
        }
        assert_eq!(reverse_index(0b001, 3), 0b100);
    }
}
