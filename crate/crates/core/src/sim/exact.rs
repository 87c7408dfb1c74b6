//! Exact outcome distribution of a noiseless circuit by branching on every
//! random measurement or reset.

use super::statevector::StateVector;
use super::RegisterLayout;
use crate::circuit::{Circuit, Gate};
use crate::error::Result;

/// One leaf of the measurement tree.
#[derive(Debug, Clone, PartialEq)]
pub struct Branch {
    pub probability: f64,
    /// Flat classical bits in register declaration order.
    pub bits: Vec<u8>,
}

/// Enumerates all measurement branches of a noiseless run. Branches with
/// probability below `1e-14` are dropped.
pub fn exact_outcomes(circuit: &Circuit) -> Result<(RegisterLayout, Vec<Branch>)> {
    let layout = RegisterLayout::of(circuit);
    let offsets = circuit.register_offsets();
    let mut leaves = Vec::new();
    let mut stack = vec![(
        0usize,
        1.0f64,
        StateVector::<f64>::zero(circuit.num_qubits())?,
        vec![0u8; layout.total_bits()],
    )];
    let insts = circuit.instructions();
    while let Some((start, prob, mut state, mut bits)) = stack.pop() {
        let mut i = start;
        let mut split = false;
        while i < insts.len() {
            let inst = &insts[i];
            match inst.gate {
                Gate::Measure | Gate::Reset => {
                    let q = inst.qubits[0].0;
                    let p1 = state.prob_one(q);
                    let record = |bits: &mut Vec<u8>, one: bool| {
                        if let Some(cb) = inst.clbit {
                            bits[offsets[cb.register] + cb.bit] = u8::from(one);
                        }
                    };
                    let outcomes: Vec<(bool, f64)> = [(false, 1.0 - p1), (true, p1)]
                        .into_iter()
                        .filter(|&(_, p)| p > 1e-12)
                        .collect();
                    if outcomes.len() == 1 {
                        let (one, p) = outcomes[0];
                        state.collapse(q, one, p);
                        if inst.gate == Gate::Reset && one {
                            state.apply_x(q);
                        }
                        record(&mut bits, one);
                    } else {
                        for (one, p) in outcomes {
                            if prob * p < 1e-14 {
                                continue;
                            }
                            let mut s = state.clone();
                            s.collapse(q, one, p);
                            if inst.gate == Gate::Reset && one {
                                s.apply_x(q);
                            }
                            let mut b = bits.clone();
                            record(&mut b, one);
                            stack.push((i + 1, prob * p, s, b));
                        }
                        split = true;
                        break;
                    }
                }
                g => {
                    let qs: Vec<usize> = inst.qubits.iter().map(|q| q.0).collect();
                    state.apply_gate(&g, &qs)?;
                }
            }
            i += 1;
        }
        if !split {
            leaves.push(Branch {
                probability: prob,
                bits,
            });
        }
    }
    Ok((layout, leaves))
}
