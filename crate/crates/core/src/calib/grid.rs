use crate::calib::pauli::PauliAssignment;
use crate::model::{bond_vector, embed_bond_quads, DotArray, PhaseRateVector};

/// Grid vector seen in the frame `Q`: bonds whose endpoints carry an odd
/// number of flipping labels have `S` and `T` exchanged.
pub fn conjugated_grid_vector(array: &DotArray, q: &PauliAssignment) -> PhaseRateVector {
    PhaseRateVector(embed_bond_quads(array.n_qubits(), array.bonds(), |b| {
        let [s, t, _, _] = bond_vector(b);
        let (j, k) = b.endpoints();
        if q.sig(j) * q.sig(k) < 0.0 {
            [t, s, s, t]
        } else {
            [s, t, t, s]
        }
    }))
}
