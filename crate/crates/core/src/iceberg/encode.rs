//! Encoding of logical circuits into a single code block with scheduled
//! syndrome extraction.

use serde_json::Value;

use super::gadgets::{emit_destructive_measure, emit_prepare_zero, emit_syndrome_measure};
use super::logical::{emit_logical, LogicalGate};
use super::transpile::{squash_1q, transpile_to_native, TranspileOptions};
use super::{CodeLayout, CodeParams};
use crate::circuit::{json, Circuit, Gate, Instruction};
use crate::error::{Error, Result};

/// Where syndrome gadgets go. A placement value `p` inserts a gadget after
/// the first `p` logical operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SyndromeSchedule {
    /// `r` rounds spread evenly: after operation `⌈m·L/(r+1)⌉`, `m = 1..r`.
    Rounds(usize),
    /// Explicit, strictly increasing placement.
    At(Vec<usize>),
}

impl SyndromeSchedule {
    pub fn rounds(&self) -> usize {
        match self {
            SyndromeSchedule::Rounds(r) => *r,
            SyndromeSchedule::At(v) => v.len(),
        }
    }

    /// Placement over `ops` logical operations.
    pub fn placement(&self, ops: usize) -> Result<Vec<usize>> {
        match self {
            SyndromeSchedule::Rounds(r) => Ok((1..=*r).map(|m| (m * ops).div_ceil(r + 1)).collect()),
            SyndromeSchedule::At(v) => {
                if v.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(Error::Schedule(format!("placement {v:?} is not strictly increasing")));
                }
                if let Some(&p) = v.iter().find(|&&p| p > ops) {
                    return Err(Error::Schedule(format!(
                        "placement index {p} out of range for {ops} logical operations"
                    )));
                }
                Ok(v.clone())
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct EncodeOptions {
    /// Code to use; defaults to the smallest code holding the circuit.
    pub code: Option<CodeParams>,
    pub schedule: SyndromeSchedule,
    /// Track the swap of the transversal Hadamard as a relabeling.
    pub virtual_swap: bool,
    pub transpile: TranspileOptions,
}

impl Default for EncodeOptions {
    fn default() -> Self {
        Self {
            code: None,
            schedule: SyndromeSchedule::Rounds(0),
            virtual_swap: true,
            transpile: TranspileOptions::default(),
        }
    }
}

impl EncodeOptions {
    pub fn with_rounds(r: usize) -> Self {
        Self {
            schedule: SyndromeSchedule::Rounds(r),
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone)]
pub struct Encoded {
    pub circuit: Circuit,
    /// Layout for decoding; `data` is the assignment after the last
    /// logical operation.
    pub layout: CodeLayout,
    pub logical_ops: Vec<LogicalGate>,
    pub placement: Vec<usize>,
}

impl Encoded {
    /// Circuit JSON with the layout embedded under `layout`.
    pub fn to_value(&self) -> Value {
        let mut v = json::to_value(&self.circuit);
        v["layout"] = self.layout.to_value();
        v
    }

    pub fn serialize(&self) -> String {
        serde_json::to_string_pretty(&self.to_value()).expect("encoded JSON is always serializable")
    }
}

/// Parses a circuit file and its embedded layout, if any.
pub fn parse_encoded(text: &str) -> Result<(Circuit, Option<CodeLayout>)> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::Parse {
        location: format!("line {}, column {}", e.line(), e.column()),
        message: e.to_string(),
    })?;
    let circuit = json::from_value(&value)?;
    let layout = value.get("layout").map(CodeLayout::from_value).transpose()?;
    Ok((circuit, layout))
}

/// Appends the physical synthesis of `op` with every `RXX` rewritten as
/// `H⊗H · RZZ · H⊗H`.
fn emit_converted(c: &mut Circuit, op: &LogicalGate, perm: &mut [usize], virtual_swap: bool) -> Result<()> {
    let mut frag = Circuit::new(c.num_qubits());
    emit_logical(&mut frag, op, perm, virtual_swap)?;
    for inst in frag.instructions() {
        if let Gate::RXX(theta) = inst.gate {
            let (a, b) = (inst.qubit(0), inst.qubit(1));
            c.h(a).h(b).rzz(theta, a, b).h(a).h(b);
        } else {
            c.push(Instruction {
                gate: inst.gate,
                qubits: inst.qubits.clone(),
                clbit: None,
            })?;
        }
    }
    Ok(())
}

/// Physical operations of the logical part only, on the `n` data qubits,
/// before squashing. Returns the final code-position assignment.
#[cfg(test)]
pub(crate) fn encode_body(ops: &[LogicalGate], n: usize, virtual_swap: bool) -> Result<(Circuit, Vec<usize>)> {
    let mut c = Circuit::new(n);
    let mut perm: Vec<usize> = (0..n).collect();
    for op in ops {
        emit_converted(&mut c, op, &mut perm, virtual_swap)?;
    }
    Ok((c, perm))
}

/// Compiles `logical` into prep, logical operations with syndrome gadgets
/// at the scheduled points, and the destructive measurement.
pub fn encode(logical: &Circuit, opts: &EncodeOptions) -> Result<Encoded> {
    let code = opts
        .code
        .unwrap_or_else(|| CodeParams::for_logical(logical.num_qubits()));
    let code = CodeParams::new(code.n)?;
    let ops = transpile_to_native(logical, code.k(), opts.transpile)?;
    encode_ops(&ops, code, &opts.schedule, opts.virtual_swap)
}

/// Encodes an already lowered list of logical operations.
pub fn encode_ops(
    ops: &[LogicalGate],
    code: CodeParams,
    schedule: &SyndromeSchedule,
    virtual_swap: bool,
) -> Result<Encoded> {
    let placement = schedule.placement(ops.len())?;
    let mut layout = CodeLayout::standard(code, placement.len());
    let mut c = layout.empty_circuit();
    emit_prepare_zero(&mut c, &layout);
    let mut round = 0;
    for i in 0..=ops.len() {
        while round < placement.len() && placement[round] == i {
            emit_syndrome_measure(&mut c, &layout, round);
            round += 1;
        }
        if let Some(op) = ops.get(i) {
            emit_converted(&mut c, op, &mut layout.data, virtual_swap)?;
        }
    }
    emit_destructive_measure(&mut c, &layout);
    Ok(Encoded {
        circuit: squash_1q(&c),
        layout,
        logical_ops: ops.to_vec(),
        placement,
    })
}

/// `steps` rounds of noisy identities on every data qubit of a fresh block,
/// with a syndrome gadget after each step listed in `placement`.
pub fn noisy_identity_circuit(code: CodeParams, steps: usize, placement: &[usize]) -> Result<Encoded> {
    let placement = SyndromeSchedule::At(placement.to_vec()).placement(steps)?;
    let layout = CodeLayout::standard(code, placement.len());
    let mut c = layout.empty_circuit();
    emit_prepare_zero(&mut c, &layout);
    let mut round = 0;
    for i in 0..=steps {
        while round < placement.len() && placement[round] == i {
            emit_syndrome_measure(&mut c, &layout, round);
            round += 1;
        }
        if i < steps {
            for &q in &layout.data {
                c.id(q);
            }
        }
    }
    emit_destructive_measure(&mut c, &layout);
    Ok(Encoded {
        circuit: c,
        layout,
        logical_ops: Vec::new(),
        placement,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::count_gates;

    #[test]
    fn default_placement_spreads_evenly() {
        assert_eq!(SyndromeSchedule::Rounds(3).placement(8).unwrap(), vec![2, 4, 6]);
        assert_eq!(SyndromeSchedule::Rounds(1).placement(5).unwrap(), vec![3]);
        assert_eq!(SyndromeSchedule::Rounds(0).placement(5).unwrap(), Vec::<usize>::new());
        assert!(SyndromeSchedule::At(vec![2, 2]).placement(5).is_err());
        assert!(SyndromeSchedule::At(vec![6]).placement(5).is_err());
    }

    #[test]
    fn empty_circuit_is_prep_and_readout() {
        let e = encode(&Circuit::new(2), &EncodeOptions::default()).unwrap();
        let k = count_gates(&e.circuit).unwrap();
        assert_eq!(k.two_qubit, 5 + 6);
        assert_eq!(k.measure, 1 + 4 + 2);
    }

    #[test]
    fn gadget_count_matches_rounds() {
        let mut c = Circuit::new(4);
        c.h(0).cx(0, 1).rz(0.2, 2).cz(2, 3).rx(0.3, 1);
        for r in 0..5 {
            let e = encode(&c, &EncodeOptions::with_rounds(r)).unwrap();
            let syn = e
                .circuit
                .instructions()
                .iter()
                .filter(|i| {
                    i.clbit
                        .is_some_and(|b| e.circuit.registers()[b.register].name == super::super::SYNDROME_Z)
                })
                .count();
            assert_eq!(syn, r);
        }
    }

    #[test]
    fn json_embeds_layout() {
        let mut c = Circuit::new(2);
        c.h(0).h(1);
        let e = encode(&c, &EncodeOptions::with_rounds(1)).unwrap();
        let (circ, layout) = parse_encoded(&e.serialize()).unwrap();
        assert_eq!(circ, e.circuit);
        assert_eq!(layout.unwrap(), e.layout);
    }
}
