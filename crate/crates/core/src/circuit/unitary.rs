use super::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::scalar::Real;
use crate::sim::StateVector;

/// Largest circuit `unitary_of` will expand.
pub const MAX_UNITARY_QUBITS: usize = 12;

/// Full unitary of a measurement-free circuit in `f64`.
pub fn unitary_of(circuit: &Circuit) -> Result<CMatrix<f64>> {
    unitary_of_generic(circuit)
}

/// Full unitary of a measurement-free circuit. Column `j` is the image of
/// basis state `|j⟩`. Multi-controlled X is applied as its ideal permutation.
pub fn unitary_of_generic<T: Real>(circuit: &Circuit) -> Result<CMatrix<T>> {
    let n = circuit.num_qubits();
    if n > MAX_UNITARY_QUBITS {
        return Err(Error::TooLarge {
            qubits: n,
            limit: MAX_UNITARY_QUBITS,
        });
    }
    for inst in circuit.instructions() {
        if matches!(inst.gate, Gate::Measure | Gate::Reset) {
            return Err(Error::UnsupportedGate {
                gate: inst.gate.name().into(),
                reason: "unitary_of needs a measurement-free circuit".into(),
            });
        }
    }
    let columns = (0..1usize << n)
        .map(|j| {
            let mut s = StateVector::<T>::basis(n, j)?;
            for inst in circuit.instructions() {
                let qs: Vec<usize> = inst.qubits.iter().map(|q| q.0).collect();
                s.apply_gate(&inst.gate, &qs)?;
            }
            Ok(s.into_amplitudes())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CMatrix::from_columns(&columns))
}
