//! Exhaustive single-fault injection against the noiseless engine.

use super::{decode_shot, CodeLayout};
use crate::circuit::{Circuit, Gate, Instruction, Pauli, PauliString};
use crate::error::Result;
use crate::sim::{exact_outcomes, ShotRecord};
use std::sync::Arc;

/// A fault inserted before the first instruction (`after: None`) or right
/// after instruction `after`.
#[derive(Debug, Clone, PartialEq)]
pub struct FaultSite {
    pub after: Option<usize>,
    pub fault: PauliString,
}

/// Every weight-1 Pauli on every qubit at the start and after every
/// instruction it takes part in. With `correlated`, two-qubit gates also get
/// all 15 non-identity Paulis on their pair.
pub fn single_fault_sites(circuit: &Circuit, correlated: bool) -> Vec<FaultSite> {
    let mut sites = Vec::new();
    for q in 0..circuit.num_qubits() {
        for p in Pauli::ALL {
            sites.push(FaultSite {
                after: None,
                fault: PauliString::uniform(p, [q]),
            });
        }
    }
    for (i, inst) in circuit.instructions().iter().enumerate() {
        if inst.gate == Gate::Barrier {
            continue;
        }
        let qs: Vec<usize> = inst.qubits.iter().map(|q| q.0).collect();
        if correlated && qs.len() == 2 {
            for a in 0..4 {
                for b in 0..4 {
                    let pairs = [(qs[0], a), (qs[1], b)]
                        .into_iter()
                        .filter(|&(_, x)| x > 0)
                        .map(|(q, x)| (q, Pauli::ALL[x - 1]));
                    let fault = PauliString::from_pairs(pairs).expect("distinct qubits");
                    if !fault.is_identity() {
                        sites.push(FaultSite { after: Some(i), fault });
                    }
                }
            }
        } else {
            for &q in &qs {
                for p in Pauli::ALL {
                    sites.push(FaultSite {
                        after: Some(i),
                        fault: PauliString::uniform(p, [q]),
                    });
                }
            }
        }
    }
    sites
}

/// `circuit` with `site` inserted.
pub fn with_fault(circuit: &Circuit, site: &FaultSite) -> Result<Circuit> {
    let mut out = Circuit::new(circuit.num_qubits());
    for r in circuit.registers() {
        out.add_register(&r.name, r.size)?;
    }
    let fault = site.fault.to_circuit(circuit.num_qubits());
    if site.after.is_none() {
        out.append(&fault)?;
    }
    for (i, inst) in circuit.instructions().iter().enumerate() {
        out.push(Instruction {
            gate: inst.gate,
            qubits: inst.qubits.clone(),
            clbit: inst.clbit,
        })?;
        if site.after == Some(i) {
            out.append(&fault)?;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Default)]
pub struct InjectionReport {
    pub sites: usize,
    /// Sites with a nonzero chance of an accepted shot whose logical bits
    /// differ from the expected ones, with that chance.
    pub undetected: Vec<(FaultSite, f64)>,
}

/// Injects every site in turn and enumerates all measurement branches.
pub fn inject_single_faults(
    circuit: &Circuit,
    layout: &CodeLayout,
    expected: &[u8],
    correlated: bool,
) -> Result<InjectionReport> {
    let sites = single_fault_sites(circuit, correlated);
    let mut report = InjectionReport {
        sites: sites.len(),
        undetected: Vec::new(),
    };
    for site in sites {
        let (regs, branches) = exact_outcomes(&with_fault(circuit, &site)?)?;
        let regs = Arc::new(regs);
        let mut wrong = 0.0;
        for b in branches {
            let d = decode_shot(&ShotRecord::new(regs.clone(), b.bits)?, layout)?;
            if d.accepted && d.logical_bits != expected {
                wrong += b.probability;
            }
        }
        if wrong > 1e-12 {
            report.undetected.push((site, wrong));
        }
    }
    Ok(report)
}
