use serde::{Deserialize, Serialize};

use crate::algebra::gate::{GateSpec, MqcpFactor};
use crate::algebra::phase::FreePhase;
use crate::basis::wrap_tau;
use crate::error::{Error, Result};
use crate::model::DotArray;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Decomposition {
    /// One controlled phase per bond, ordered by endpoints.
    pub factors: GateSpec,
    /// Free phase that, added to `factors`, gives the ideal evolution.
    pub corrections: FreePhase,
}

/// Splits the ideal evolution at `tau` into bond-wise controlled phases
/// `theta_w = -2 tau Delta_w` and a free phase with
/// `phi_j = sum_{w containing j} tau Delta_w` and `phi_g = tau sum_w S_w`.
pub fn decompose_intrinsic(array: &DotArray, tau: f64) -> Result<Decomposition> {
    if !(tau >= 0.0 && tau.is_finite()) {
        return Err(Error::InvalidGate(format!(
            "evolution time {tau} must be finite and non-negative"
        )));
    }
    let mut bonds: Vec<_> = array.bonds().iter().collect();
    bonds.sort_by_key(|b| b.endpoints());

    let mut local = vec![0.0; array.n_qubits()];
    let mut global = 0.0;
    let mut factors = Vec::with_capacity(bonds.len());
    for b in bonds {
        let (j, k) = b.endpoints();
        let phase = tau * b.velocity();
        factors.push(MqcpFactor::new(j, &[(k, -2.0 * phase)]));
        local[j] += phase;
        local[k] += phase;
        global += tau * b.spin_flipped_strength();
    }
    Ok(Decomposition {
        factors: GateSpec::Factors(factors),
        corrections: FreePhase::new(wrap_tau(global), local.into_iter().map(wrap_tau).collect()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::phase::PhaseVector;
    use crate::model::{grid_vector, Bond};
    use std::f64::consts::PI;

    fn ideal_matches(array: &DotArray, tau: f64) {
        let d = decompose_intrinsic(array, tau).unwrap();
        let n = array.n_qubits();
        let built = &d.factors.phase_vector(n).unwrap() + &d.corrections.expand();
        let ideal = PhaseVector::from_rates(&grid_vector(array), tau);
        assert!(
            built.approx_eq(&ideal, 1e-9),
            "deviation {}",
            built.max_deviation(&ideal)
        );
    }

    #[test]
    fn six_dot_example() {
        let edges = [(0, 1), (0, 2), (0, 3), (1, 4), (1, 5)];
        let bonds = edges
            .iter()
            .map(|&(j, k)| Bond::spin_conserving(j, k, 1.0).unwrap())
            .collect();
        let array = DotArray::from_zeeman(&[1.0, 1.1, 1.2, 1.3, 1.4, 1.5], bonds).unwrap();
        let tau = PI / 2.0 / 0.5;
        let d = decompose_intrinsic(&array, tau).unwrap();
        let expect = [1.5 * PI, 1.5 * PI, PI / 2.0, PI / 2.0, PI / 2.0, PI / 2.0];
        for (a, b) in d.corrections.local.iter().zip(expect) {
            assert!((a - b).abs() < 1e-12);
        }
        ideal_matches(&array, tau);
    }

    #[test]
    fn single_bond_factor() {
        let array = DotArray::from_zeeman(
            &[1.0, 1.3],
            vec![Bond::with_fraction(0, 1, 0.7, 0.9, 0.3).unwrap()],
        )
        .unwrap();
        let d = decompose_intrinsic(&array, 2.5).unwrap();
        let theta = -2.0 * 2.5 * array.bonds()[0].velocity();
        assert_eq!(d.factors, GateSpec::cz(0, 1, theta));
        ideal_matches(&array, 2.5);
        ideal_matches(&array, 0.0);
        assert!(decompose_intrinsic(&array, -1.0).is_err());
    }

    #[test]
    fn triangle_product() {
        let bonds = vec![
            Bond::spin_conserving(0, 1, 1.0).unwrap(),
            Bond::spin_conserving(1, 2, 1.0).unwrap(),
            Bond::spin_conserving(0, 2, 1.0).unwrap(),
        ];
        let array = DotArray::from_zeeman(&[1.0, 1.1, 1.2], bonds).unwrap();
        let d = decompose_intrinsic(&array, PI).unwrap();
        let v = d.factors.phase_vector(3).unwrap();
        let expect = PhaseVector::new([0.0, 0.0, 0.0, PI, 0.0, PI, PI, PI].to_vec()).unwrap();
        assert!(v.approx_eq(&expect, 1e-12));
        ideal_matches(&array, PI);
    }

    #[test]
    fn order_independent() {
        let bonds = vec![
            Bond::with_fraction(2, 3, 1.0, 0.9, 0.1).unwrap(),
            Bond::with_fraction(0, 1, 0.6, 0.7, 0.4).unwrap(),
            Bond::with_fraction(1, 2, 1.3, 0.2, 0.0).unwrap(),
        ];
        let mut rev = bonds.clone();
        rev.reverse();
        let a = DotArray::from_zeeman(&[1.0, 1.1, 1.2, 1.3], bonds).unwrap();
        let b = DotArray::from_zeeman(&[1.0, 1.1, 1.2, 1.3], rev).unwrap();
        assert_eq!(
            decompose_intrinsic(&a, 3.3).unwrap(),
            decompose_intrinsic(&b, 3.3).unwrap()
        );
        ideal_matches(&a, 3.3);
    }
}
