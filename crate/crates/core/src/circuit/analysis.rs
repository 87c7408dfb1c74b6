use serde::{Deserialize, Serialize};

use super::{Circuit, Gate};
use crate::error::{Error, Result};

/// Greedy left-to-right layering. Measure and Reset occupy a layer like any
/// gate; a barrier aligns its qubits (all qubits when it lists none) without
/// adding a layer of its own.
pub fn depth(circuit: &Circuit) -> usize {
    let mut level = vec![0usize; circuit.num_qubits()];
    for inst in circuit.instructions() {
        let qs: Vec<usize> = if inst.qubits.is_empty() {
            (0..circuit.num_qubits()).collect()
        } else {
            inst.qubits.iter().map(|q| q.0).collect()
        };
        let top = qs.iter().map(|&q| level[q]).max().unwrap_or(0);
        let next = if inst.gate == Gate::Barrier { top } else { top + 1 };
        for q in qs {
            level[q] = next;
        }
    }
    level.into_iter().max().unwrap_or(0)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateCounts {
    pub one_qubit_unitary: usize,
    pub two_qubit: usize,
    pub measure: usize,
    pub reset: usize,
}

/// Tallies a physical circuit. Multi-controlled gates must be synthesized
/// first.
pub fn count_gates(circuit: &Circuit) -> Result<GateCounts> {
    let mut counts = GateCounts::default();
    for (i, inst) in circuit.instructions().iter().enumerate() {
        match inst.gate {
            g if g.is_single_qubit_unitary() => counts.one_qubit_unitary += 1,
            g if g.is_two_qubit_unitary() => counts.two_qubit += 1,
            Gate::Measure => counts.measure += 1,
            Gate::Reset => counts.reset += 1,
            Gate::Barrier => {}
            g => {
                return Err(Error::UnsupportedGate {
                    gate: g.name().into(),
                    reason: format!("instruction {i} is not a physical gate; synthesize it first"),
                })
            }
        }
    }
    Ok(counts)
}
