use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::DotArray;
use crate::sim::evolution::Evolver;
use crate::sim::hamiltonian::build_hamiltonian;

/// Second-order phase and leak estimates per basis state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Perturbation {
    /// `tau sum_m |V_nm|^2 / (E_n - E_m)`.
    pub phases: Vec<f64>,
    /// `sum_m |V_nm|^2 / (E_n - E_m)^2`, the weight leaving state `n`.
    pub leak_terms: Vec<f64>,
    pub leak: f64,
}

/// Non-degenerate perturbation theory in the exchange, with unperturbed
/// levels given by the Zeeman energies.
///
/// `gap_threshold` defaults to ten times the largest exchange energy; any
/// coupled pair closer than that is rejected.
pub fn perturbation_second_order(
    array: &DotArray,
    tau: f64,
    gap_threshold: Option<f64>,
) -> Result<Perturbation> {
    let h = build_hamiltonian(array);
    let threshold = gap_threshold.unwrap_or(10.0 * array.max_exchange());
    let floor = 1e-14 * array.max_exchange().max(f64::MIN_POSITIVE);
    let d = h.h0.len();
    let mut phases = vec![0.0; d];
    let mut leak_terms = vec![0.0; d];
    for n in 0..d {
        for m in (0..d).filter(|&m| m != n) {
            let v2 = h.h_ex[(n, m)].norm_sqr();
            if v2.sqrt() <= floor {
                continue;
            }
            let gap = h.h0[n] - h.h0[m];
            if gap.abs() < threshold {
                return Err(Error::DegenerateSpectrum {
                    n: n.min(m),
                    m: n.max(m),
                    gap: gap.abs(),
                    threshold,
                });
            }
            phases[n] += tau * v2 / gap;
            leak_terms[n] += v2 / (gap * gap);
        }
    }
    let leak = leak_terms.iter().sum();
    Ok(Perturbation {
        phases,
        leak_terms,
        leak,
    })
}

/// Exact counterparts of [`Perturbation`] from the eigendecomposition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelShifts {
    /// `tau (E'_n - E_n - V_nn)` for the eigenstate matched to `n`.
    pub shifts: Vec<f64>,
    /// `r_nn = |<n|n'>|^2`.
    pub overlaps: Vec<f64>,
    pub leak: f64,
}

/// Pairs each basis state with the unused eigenvector of largest overlap,
/// lowest index first on ties.
pub fn match_eigenstates(evolver: &Evolver) -> Result<Vec<(usize, f64)>> {
    let vecs = &evolver.spectrum().vectors;
    let d = vecs.nrows();
    let mut used = vec![false; d];
    let mut out = Vec::with_capacity(d);
    for n in 0..d {
        let mut best: Option<(usize, f64)> = None;
        for k in (0..d).filter(|&k| !used[k]) {
            let r = vecs[(n, k)].norm_sqr();
            if best.is_none_or(|(_, b)| r > b) {
                best = Some((k, r));
            }
        }
        let (k, r) = best.expect("square eigenvector matrix");
        if r < 0.5 {
            return Err(Error::NonPerturbative {
                state: n,
                overlap: r,
            });
        }
        used[k] = true;
        out.push((k, r));
    }
    Ok(out)
}

pub fn exact_level_shifts(evolver: &Evolver, tau: f64) -> Result<LevelShifts> {
    let h = evolver.hamiltonian();
    let matched = match_eigenstates(evolver)?;
    let shifts = matched
        .iter()
        .enumerate()
        .map(|(n, &(k, _))| tau * (evolver.spectrum().values[k] - h.h0[n] - h.h_ex[(n, n)].re))
        .collect();
    let overlaps: Vec<f64> = matched.iter().map(|&(_, r)| r).collect();
    let leak = overlaps.iter().map(|r| 1.0 - r).sum();
    Ok(LevelShifts {
        shifts,
        overlaps,
        leak,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Bond;

    fn pair(j: f64) -> DotArray {
        DotArray::from_zeeman(
            &[1.0, 1.5],
            vec![Bond::from_soi(0, 1, j, 0.6, 1.0).unwrap()],
        )
        .unwrap()
    }

    #[test]
    fn vanishes_without_exchange() {
        let p = perturbation_second_order(&pair(0.0), 10.0, None).unwrap();
        assert!(p.phases.iter().all(|&x| x == 0.0));
        assert_eq!(p.leak, 0.0);
    }

    #[test]
    fn agrees_with_exact_shifts() {
        let a = pair(1e-2);
        let tau = 100.0;
        let p = perturbation_second_order(&a, tau, None).unwrap();
        let e = exact_level_shifts(&Evolver::new(&a).unwrap(), tau).unwrap();
        for (x, y) in p.phases.iter().zip(&e.shifts) {
            assert!((x - y).abs() <= 0.05 * y.abs(), "{x} vs {y}");
        }
        assert!((p.leak - e.leak).abs() <= 0.05 * e.leak);
    }

    #[test]
    fn rejects_near_degenerate_levels() {
        let a = DotArray::from_zeeman(
            &[1.0, 1.01],
            vec![Bond::spin_conserving(0, 1, 0.01).unwrap()],
        )
        .unwrap();
        assert!(matches!(
            perturbation_second_order(&a, 1.0, None),
            Err(Error::DegenerateSpectrum { n: 1, m: 2, .. })
        ));
        assert!(perturbation_second_order(&a, 1.0, Some(1e-3)).is_ok());
    }

    #[test]
    fn non_perturbative_matching_fails() {
        // A strongly coupled triangle has an eigenvector spread evenly over
        // three single-flip states, so some basis state gets overlap 1/3.
        let bonds = vec![
            Bond::spin_conserving(0, 1, 1.0).unwrap(),
            Bond::spin_conserving(1, 2, 1.0).unwrap(),
            Bond::spin_conserving(0, 2, 1.0).unwrap(),
        ];
        let a = DotArray::from_zeeman(&[1.0, 1.001, 1.002], bonds).unwrap();
        assert!(matches!(
            exact_level_shifts(&Evolver::new(&a).unwrap(), 1.0),
            Err(Error::NonPerturbative { .. })
        ));
    }
}
