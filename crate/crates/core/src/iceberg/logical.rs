//! Logical operators and the catalog of logical gate syntheses.

use serde::{Deserialize, Serialize};

use super::CodeParams;
use crate::circuit::{Circuit, Gate, Pauli, PauliString};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PauliType {
    X,
    Z,
}

/// Physical support of the logical X or Z product over `targets`, reduced
/// to weight at most `n/2` by multiplying with the stabilizer.
pub fn logical_pauli(targets: &[usize], kind: PauliType, code: CodeParams) -> Result<PauliString> {
    let (n, k) = (code.n, code.k());
    let mut seen = vec![false; n];
    for &t in targets {
        if t >= k {
            return Err(Error::domain(format!("logical qubit {t} out of range for k = {k}")));
        }
        if seen[t + 1] {
            return Err(Error::domain(format!("logical qubit {t} listed twice")));
        }
        seen[t + 1] = true;
    }
    if targets.len() % 2 == 1 {
        match kind {
            PauliType::Z => seen[n - 1] = true,
            PauliType::X => seen[0] = true,
        }
    }
    let mut support: Vec<usize> = (0..n).filter(|&q| seen[q]).collect();
    if support.len() > n / 2 {
        support = (0..n).filter(|&q| !seen[q]).collect();
    }
    let p = match kind {
        PauliType::X => Pauli::X,
        PauliType::Z => Pauli::Z,
    };
    Ok(PauliString::uniform(p, support))
}

/// Logical gates with a dedicated synthesis. Indices are logical qubits;
/// angles use the half-turn convention of the circuit IR.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum LogicalGate {
    X(usize),
    Y(usize),
    Z(usize),
    S(usize),
    Sdg(usize),
    /// The same Pauli (X or Z) on every logical qubit.
    AllPauli(PauliType),
    /// The same Pauli on logical qubits `i` and `j`.
    PairPauli(Pauli, usize, usize),
    CZ(usize, usize),
    CX(usize, usize),
    /// Hadamard on every logical qubit.
    AllH,
    H(usize),
    RX(usize, f64),
    RZ(usize, f64),
    RZZ(usize, usize, f64),
}

impl LogicalGate {
    /// Logical qubits touched; empty for the transversal gates.
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            LogicalGate::X(i)
            | LogicalGate::Y(i)
            | LogicalGate::Z(i)
            | LogicalGate::S(i)
            | LogicalGate::Sdg(i)
            | LogicalGate::H(i)
            | LogicalGate::RX(i, _)
            | LogicalGate::RZ(i, _) => vec![i],
            LogicalGate::PairPauli(_, i, j)
            | LogicalGate::CZ(i, j)
            | LogicalGate::CX(i, j)
            | LogicalGate::RZZ(i, j, _) => vec![i, j],
            LogicalGate::AllPauli(_) | LogicalGate::AllH => Vec::new(),
        }
    }

    /// The same operation as a gate list on `k` unencoded qubits.
    pub fn to_circuit(&self, k: usize) -> Circuit {
        let mut c = Circuit::new(k);
        match *self {
            LogicalGate::X(i) => {
                c.x(i);
            }
            LogicalGate::Y(i) => {
                c.y(i);
            }
            LogicalGate::Z(i) => {
                c.z(i);
            }
            LogicalGate::S(i) => {
                c.s(i);
            }
            LogicalGate::Sdg(i) => {
                c.sdg(i);
            }
            LogicalGate::AllPauli(p) => {
                for i in 0..k {
                    c.gate(if p == PauliType::X { Gate::X } else { Gate::Z }, &[i]);
                }
            }
            LogicalGate::PairPauli(p, i, j) => {
                c.gate(p.gate(), &[i]).gate(p.gate(), &[j]);
            }
            LogicalGate::CZ(i, j) => {
                c.cz(i, j);
            }
            LogicalGate::CX(i, j) => {
                c.cx(i, j);
            }
            LogicalGate::AllH => {
                for i in 0..k {
                    c.h(i);
                }
            }
            LogicalGate::H(i) => {
                c.h(i);
            }
            LogicalGate::RX(i, a) => {
                c.rx(a, i);
            }
            LogicalGate::RZ(i, a) => {
                c.rz(a, i);
            }
            LogicalGate::RZZ(i, j, a) => {
                c.rzz(a, i, j);
            }
        }
        c
    }

    fn validate(&self, k: usize) -> Result<()> {
        let qs = self.qubits();
        for &q in &qs {
            if q >= k {
                return Err(Error::domain(format!("logical qubit {q} out of range for k = {k}")));
            }
        }
        if qs.len() == 2 && qs[0] == qs[1] {
            return Err(Error::domain("two-qubit logical gate on a single qubit"));
        }
        Ok(())
    }
}

/// Appends the physical synthesis of `gate`. `perm[j]` is the physical
/// qubit currently holding code position `j`; with `virtual_swap` the swap
/// that completes the transversal Hadamard is applied to `perm` instead of
/// being emitted.
pub(crate) fn emit_logical(c: &mut Circuit, gate: &LogicalGate, perm: &mut [usize], virtual_swap: bool) -> Result<()> {
    let n = perm.len();
    gate.validate(n - 2)?;
    let p = |j: usize| perm[j];
    let last = n - 1;
    match *gate {
        LogicalGate::X(i) => {
            c.x(p(0)).x(p(i + 1));
        }
        LogicalGate::Y(i) => {
            c.x(p(0)).y(p(i + 1)).z(p(last));
        }
        LogicalGate::Z(i) => {
            c.z(p(i + 1)).z(p(last));
        }
        LogicalGate::S(i) => {
            c.s(p(last)).cz(p(i + 1), p(last)).s(p(i + 1));
        }
        LogicalGate::Sdg(i) => {
            c.sdg(p(last)).cz(p(i + 1), p(last)).sdg(p(i + 1));
        }
        LogicalGate::AllPauli(t) => {
            let g = if t == PauliType::X { Gate::X } else { Gate::Z };
            c.gate(g, &[p(0)]).gate(g, &[p(last)]);
        }
        LogicalGate::PairPauli(pauli, i, j) => {
            c.gate(pauli.gate(), &[p(i + 1)]).gate(pauli.gate(), &[p(j + 1)]);
        }
        LogicalGate::CZ(i, j) => {
            c.cz(p(i + 1), p(j + 1))
                .z(p(last))
                .cz(p(i + 1), p(last))
                .cz(p(j + 1), p(last));
        }
        LogicalGate::CX(i, j) => {
            c.cx(p(i + 1), p(0))
                .cx(p(last), p(0))
                .cx(p(last), p(j + 1))
                .cx(p(i + 1), p(j + 1));
        }
        LogicalGate::AllH => {
            for j in 0..n {
                c.h(p(j));
            }
            if virtual_swap {
                perm.swap(0, last);
            } else {
                c.swap(p(0), p(last));
            }
        }
        LogicalGate::H(i) => {
            let (a, b, z) = (p(0), p(i + 1), p(last));
            c.cz(b, z).h(a).h(b).cz(a, b).h(b).cz(a, b).h(a).h(b).cz(b, z).x(a).z(z);
        }
        LogicalGate::RX(i, a) => {
            c.rxx(a, p(0), p(i + 1));
        }
        LogicalGate::RZ(i, a) => {
            c.rzz(a, p(i + 1), p(last));
        }
        LogicalGate::RZZ(i, j, a) => {
            c.rzz(a, p(i + 1), p(j + 1));
        }
    }
    Ok(())
}

/// Physical fragment on the `n` data qubits of `code` implementing `gate`.
/// The transversal Hadamard includes its explicit swap.
pub fn synth_logical_gate(gate: &LogicalGate, code: CodeParams) -> Result<Circuit> {
    let mut c = Circuit::new(code.n);
    let mut perm: Vec<usize> = (0..code.n).collect();
    emit_logical(&mut c, gate, &mut perm, false)?;
    Ok(c)
}
