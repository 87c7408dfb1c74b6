//! Lowering of logical circuits to `{RX, RZ, RZZ}` plus the gates that have
//! a direct logical synthesis, and the physical single-qubit squash pass.

use std::collections::BTreeSet;

use super::logical::{LogicalGate, PauliType};
use crate::circuit::{Circuit, Gate, Instruction};
use crate::error::{Error, Result};
use crate::linalg::{mat2_identity, mat2_is_diagonal, mat2_is_identity_up_to_phase, mat2_mul, zyz_decompose, Mat2};
use crate::mcx::{emit_mcx, emit_mcx_no_ancilla, McxSpec};

const TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TranspileOptions {
    /// Route Paulis, S, S†, CX, CZ and transversal H/X/Z layers to their
    /// direct syntheses instead of the rotation recipe.
    pub prefer_direct: bool,
}

impl Default for TranspileOptions {
    fn default() -> Self {
        Self { prefer_direct: true }
    }
}

/// Reduces an angle in half turns to `(−1, 1]`; the discarded multiples of
/// two only change the global phase.
fn wrap(a: f64) -> f64 {
    let r = a - 2.0 * (a / 2.0).round();
    if r <= -1.0 {
        r + 2.0
    } else {
        r
    }
}

fn is_zero_angle(a: f64) -> bool {
    wrap(a).abs() < TOL
}

fn rz_angle(m: &Mat2<f64>) -> f64 {
    wrap((m[1][1] / m[0][0]).arg() / std::f64::consts::PI)
}

/// `RZ·RX·RZ` angles `(first, middle, last)` in time order.
fn zxz_angles(m: &Mat2<f64>) -> (f64, f64, f64) {
    let pi = std::f64::consts::PI;
    let e = zyz_decompose(m);
    (
        wrap((e.delta - pi / 2.0) / pi),
        wrap(e.gamma / pi),
        wrap((e.beta + pi / 2.0) / pi),
    )
}

struct Lowering {
    k: usize,
    out: Vec<LogicalGate>,
    pending: Vec<Option<Mat2<f64>>>,
}

impl Lowering {
    fn flush(&mut self, q: usize) {
        let Some(m) = self.pending[q].take() else { return };
        if mat2_is_identity_up_to_phase(&m, TOL) {
            return;
        }
        if mat2_is_diagonal(&m, TOL) {
            self.out.push(LogicalGate::RZ(q, rz_angle(&m)));
            return;
        }
        let (a, b, c) = zxz_angles(&m);
        if !is_zero_angle(a) {
            self.out.push(LogicalGate::RZ(q, a));
        }
        self.out.push(LogicalGate::RX(q, b));
        if !is_zero_angle(c) {
            self.out.push(LogicalGate::RZ(q, c));
        }
    }

    fn flush_all(&mut self) {
        for q in 0..self.k {
            self.flush(q);
        }
    }

    fn absorb(&mut self, q: usize, m: &Mat2<f64>) {
        let prev = self.pending[q].unwrap_or_else(mat2_identity);
        self.pending[q] = Some(mat2_mul(m, &prev));
    }

    fn emit(&mut self, g: LogicalGate) {
        for q in g.qubits() {
            self.flush(q);
        }
        self.out.push(g);
    }

    fn rzz(&mut self, a: usize, b: usize, theta: f64) {
        if !is_zero_angle(theta) {
            self.emit(LogicalGate::RZZ(a, b, wrap(theta)));
        }
    }

    /// CZ through the rotation recipe: `RZZ(−1/2)` and `RZ(1/2)` on both.
    fn cz_native(&mut self, a: usize, b: usize) {
        self.rzz(a, b, -0.5);
        let rz = Gate::RZ(0.5).matrix1().unwrap();
        self.absorb(a, &rz);
        self.absorb(b, &rz);
    }

    fn cx_native(&mut self, c: usize, t: usize) {
        let h = Gate::H.matrix1().unwrap();
        self.absorb(t, &h);
        self.cz_native(c, t);
        self.absorb(t, &h);
    }
}

/// Declared qubits of a logical circuit, less those that only ever serve as
/// the borrowed helper of a multi-controlled gate.
fn active_qubits(circuit: &Circuit) -> BTreeSet<usize> {
    let mut helpers = BTreeSet::new();
    let mut used = BTreeSet::new();
    for inst in circuit.instructions() {
        match inst.gate {
            Gate::Barrier => {}
            Gate::Mcx { controls, borrowed } => {
                used.extend(inst.qubits[..=controls].iter().map(|q| q.0));
                if borrowed {
                    helpers.insert(inst.qubits[controls + 1].0);
                }
            }
            _ => used.extend(inst.qubits.iter().map(|q| q.0)),
        }
    }
    (0..circuit.num_qubits())
        .filter(|q| used.contains(q) || !helpers.contains(q))
        .collect()
}

/// Replaces multi-controlled gates by their synthesis.
fn expand_mcx(circuit: &Circuit) -> Result<Vec<Instruction>> {
    let mut out = Circuit::new(circuit.num_qubits());
    for inst in circuit.instructions() {
        match inst.gate {
            Gate::Mcx { controls, borrowed } => {
                let ctl: Vec<usize> = inst.qubits[..controls].iter().map(|q| q.0).collect();
                let t = inst.qubits[controls].0;
                if borrowed {
                    emit_mcx(&mut out, &McxSpec::new(ctl, t, inst.qubits[controls + 1].0)?)?;
                } else {
                    emit_mcx_no_ancilla(&mut out, &ctl, t)?;
                }
            }
            Gate::Measure | Gate::Reset => {
                return Err(Error::UnsupportedGate {
                    gate: inst.gate.name().into(),
                    reason: "logical circuits end in the destructive measurement; remove it".into(),
                })
            }
            _ => out.push(Instruction {
                gate: inst.gate,
                qubits: inst.qubits.clone(),
                clbit: None,
            })?,
        }
    }
    Ok(out.instructions().to_vec())
}

/// Lowers a logical circuit on `k` logical qubits (`k` even, at least the
/// circuit width) to rotations and directly synthesizable gates.
pub fn transpile_to_native(logical: &Circuit, k: usize, opts: TranspileOptions) -> Result<Vec<LogicalGate>> {
    if logical.num_qubits() > k {
        return Err(Error::domain(format!(
            "{} logical qubits do not fit in a block with k = {k}",
            logical.num_qubits()
        )));
    }
    let active = active_qubits(logical);
    let insts = expand_mcx(logical)?;
    let mut low = Lowering {
        k,
        out: Vec::new(),
        pending: vec![None; k],
    };
    let mut i = 0;
    while i < insts.len() {
        let inst = &insts[i];
        let q0 = inst.qubits.first().map(|q| q.0);

        if opts.prefer_direct && matches!(inst.gate, Gate::H | Gate::X | Gate::Z) && !active.is_empty() {
            let mut j = i;
            let mut covered = BTreeSet::new();
            while j < insts.len() && insts[j].gate == inst.gate && covered.insert(insts[j].qubit(0)) {
                j += 1;
            }
            if active.is_subset(&covered) {
                low.flush_all();
                low.out.push(match inst.gate {
                    Gate::H => LogicalGate::AllH,
                    Gate::X => LogicalGate::AllPauli(PauliType::X),
                    _ => LogicalGate::AllPauli(PauliType::Z),
                });
                i = j;
                continue;
            }
        }

        match inst.gate {
            Gate::Barrier | Gate::I => {}
            Gate::X if opts.prefer_direct => low.emit(LogicalGate::X(q0.unwrap())),
            Gate::Y if opts.prefer_direct => low.emit(LogicalGate::Y(q0.unwrap())),
            Gate::Z if opts.prefer_direct => low.emit(LogicalGate::Z(q0.unwrap())),
            Gate::S if opts.prefer_direct => low.emit(LogicalGate::S(q0.unwrap())),
            Gate::Sdg if opts.prefer_direct => low.emit(LogicalGate::Sdg(q0.unwrap())),
            g if g.is_single_qubit_unitary() => low.absorb(q0.unwrap(), &g.matrix1().unwrap()),
            Gate::CX if opts.prefer_direct => low.emit(LogicalGate::CX(inst.qubit(0), inst.qubit(1))),
            Gate::CZ if opts.prefer_direct => low.emit(LogicalGate::CZ(inst.qubit(0), inst.qubit(1))),
            Gate::CX => low.cx_native(inst.qubit(0), inst.qubit(1)),
            Gate::CZ => low.cz_native(inst.qubit(0), inst.qubit(1)),
            Gate::Swap => {
                let (a, b) = (inst.qubit(0), inst.qubit(1));
                for (c, t) in [(a, b), (b, a), (a, b)] {
                    if opts.prefer_direct {
                        low.emit(LogicalGate::CX(c, t));
                    } else {
                        low.cx_native(c, t);
                    }
                }
            }
            Gate::RZZ(theta) => low.rzz(inst.qubit(0), inst.qubit(1), theta),
            Gate::RXX(theta) => {
                let h = Gate::H.matrix1().unwrap();
                let (a, b) = (inst.qubit(0), inst.qubit(1));
                low.absorb(a, &h);
                low.absorb(b, &h);
                low.rzz(a, b, theta);
                low.absorb(a, &h);
                low.absorb(b, &h);
            }
            g => {
                return Err(Error::UnsupportedGate {
                    gate: g.name().into(),
                    reason: "cannot be lowered to logical rotations".into(),
                })
            }
        }
        i += 1;
    }
    low.flush_all();
    Ok(low.out)
}

/// Merges every maximal run of single-qubit gates on one qubit into one
/// gate: removed if it is the identity up to phase, `RZ` if diagonal,
/// otherwise `U`. Runs of a single gate are kept as written. Noisy
/// identities are never merged.
pub fn squash_1q(circuit: &Circuit) -> Circuit {
    struct Run {
        m: Mat2<f64>,
        first: Instruction,
        len: usize,
    }
    let mut out = Circuit::new(circuit.num_qubits());
    for r in circuit.registers() {
        out.add_register(&r.name, r.size)
            .expect("source registers are distinct");
    }
    let mut runs: Vec<Option<Run>> = (0..circuit.num_qubits()).map(|_| None).collect();
    let flush = |out: &mut Circuit, runs: &mut Vec<Option<Run>>, q: usize| {
        let Some(run) = runs[q].take() else { return };
        if run.len == 1 {
            out.push(run.first).expect("copied instruction is valid");
            return;
        }
        if mat2_is_identity_up_to_phase(&run.m, TOL) {
            return;
        }
        if mat2_is_diagonal(&run.m, TOL) {
            out.rz(rz_angle(&run.m), q);
            return;
        }
        let pi = std::f64::consts::PI;
        let e = zyz_decompose(&run.m);
        out.u(wrap(e.gamma / pi), wrap(e.beta / pi), wrap(e.delta / pi), q);
    };
    for inst in circuit.instructions() {
        if inst.gate.is_single_qubit_unitary() && inst.gate != Gate::I {
            let q = inst.qubit(0);
            let m = inst.gate.matrix1().unwrap();
            match runs[q].as_mut() {
                Some(run) => {
                    run.m = mat2_mul(&m, &run.m);
                    run.len += 1;
                }
                None => {
                    runs[q] = Some(Run {
                        m,
                        first: inst.clone(),
                        len: 1,
                    })
                }
            }
            continue;
        }
        if inst.gate == Gate::Barrier && inst.qubits.is_empty() {
            for q in 0..circuit.num_qubits() {
                flush(&mut out, &mut runs, q);
            }
        }
        for q in &inst.qubits {
            flush(&mut out, &mut runs, q.0);
        }
        out.push(inst.clone()).expect("copied instruction is valid");
    }
    for q in 0..circuit.num_qubits() {
        flush(&mut out, &mut runs, q);
    }
    out
}
