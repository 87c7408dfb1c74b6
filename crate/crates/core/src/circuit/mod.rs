//! Circuit intermediate representation.
//!
//! Angles are in half-turn units: `RZZ(θ) = exp(-i·π·θ/2 · Z⊗Z)`, and every
//! other rotation follows the same convention. Qubits are 0-based.

mod analysis;
pub mod json;
mod unitary;

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, mat2_mul, Mat2};

pub use analysis::{count_gates, depth, GateCounts};
pub use unitary::{unitary_of, unitary_of_generic, MAX_UNITARY_QUBITS};

/// Index of a qubit inside a circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Qubit(pub usize);

impl fmt::Display for Qubit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    X,
    Y,
    Z,
    H,
    S,
    Sdg,
    /// Ideal identity that still counts as a noisy single-qubit location.
    I,
    CX,
    CZ,
    Swap,
    RX(f64),
    RZ(f64),
    RZZ(f64),
    RXX(f64),
    /// `RZ(phi) · RY(theta) · RZ(lambda)`.
    U {
        theta: f64,
        phi: f64,
        lambda: f64,
    },
    /// Multi-controlled X. Qubit order: controls, target, then the borrowed
    /// qubit when `borrowed` is set.
    Mcx {
        controls: usize,
        borrowed: bool,
    },
    Measure,
    Reset,
    Barrier,
}

impl Gate {
    pub fn name(&self) -> &'static str {
        match self {
            Gate::X => "x",
            Gate::Y => "y",
            Gate::Z => "z",
            Gate::H => "h",
            Gate::S => "s",
            Gate::Sdg => "sdg",
            Gate::I => "id",
            Gate::CX => "cx",
            Gate::CZ => "cz",
            Gate::Swap => "swap",
            Gate::RX(_) => "rx",
            Gate::RZ(_) => "rz",
            Gate::RZZ(_) => "rzz",
            Gate::RXX(_) => "rxx",
            Gate::U { .. } => "u",
            Gate::Mcx { .. } => "mcx",
            Gate::Measure => "measure",
            Gate::Reset => "reset",
            Gate::Barrier => "barrier",
        }
    }

    /// Number of qubits the gate acts on; `None` for barriers (any number).
    pub fn arity(&self) -> Option<usize> {
        match self {
            Gate::X
            | Gate::Y
            | Gate::Z
            | Gate::H
            | Gate::S
            | Gate::Sdg
            | Gate::I
            | Gate::RX(_)
            | Gate::RZ(_)
            | Gate::U { .. }
            | Gate::Measure
            | Gate::Reset => Some(1),
            Gate::CX | Gate::CZ | Gate::Swap | Gate::RZZ(_) | Gate::RXX(_) => Some(2),
            Gate::Mcx { controls, borrowed } => Some(controls + 1 + usize::from(*borrowed)),
            Gate::Barrier => None,
        }
    }

    pub fn params(&self) -> Vec<f64> {
        match *self {
            Gate::RX(a) | Gate::RZ(a) | Gate::RZZ(a) | Gate::RXX(a) => vec![a],
            Gate::U { theta, phi, lambda } => vec![theta, phi, lambda],
            _ => Vec::new(),
        }
    }

    pub fn is_single_qubit_unitary(&self) -> bool {
        matches!(
            self,
            Gate::X
                | Gate::Y
                | Gate::Z
                | Gate::H
                | Gate::S
                | Gate::Sdg
                | Gate::I
                | Gate::RX(_)
                | Gate::RZ(_)
                | Gate::U { .. }
        )
    }

    pub fn is_two_qubit_unitary(&self) -> bool {
        matches!(self, Gate::CX | Gate::CZ | Gate::Swap | Gate::RZZ(_) | Gate::RXX(_))
    }

    /// 2x2 matrix of a single-qubit unitary gate.
    pub fn matrix1(&self) -> Option<Mat2<f64>> {
        let z = c(0.0, 0.0);
        let one = c(1.0, 0.0);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Some(match *self {
            Gate::X => [[z, one], [one, z]],
            Gate::Y => [[z, c(0.0, -1.0)], [c(0.0, 1.0), z]],
            Gate::Z => [[one, z], [z, c(-1.0, 0.0)]],
            Gate::H => [[c(h, 0.0), c(h, 0.0)], [c(h, 0.0), c(-h, 0.0)]],
            Gate::S => [[one, z], [z, c(0.0, 1.0)]],
            Gate::Sdg => [[one, z], [z, c(0.0, -1.0)]],
            Gate::I => [[one, z], [z, one]],
            Gate::RX(a) => rx_matrix(a),
            Gate::RZ(a) => rz_matrix(a),
            Gate::U { theta, phi, lambda } => {
                mat2_mul(&mat2_mul(&rz_matrix(phi), &ry_matrix(theta)), &rz_matrix(lambda))
            }
            _ => return None,
        })
    }

    /// 4x4 matrix of a two-qubit unitary gate. Basis index is
    /// `b0 + 2·b1` where `b0` is the first listed qubit.
    pub fn matrix2(&self) -> Option<[[Complex<f64>; 4]; 4]> {
        let z = c(0.0, 0.0);
        let mut m = [[z; 4]; 4];
        match *self {
            Gate::CX => {
                // control = first qubit (bit 0), target = bit 1
                m[0][0] = c(1.0, 0.0);
                m[2][2] = c(1.0, 0.0);
                m[3][1] = c(1.0, 0.0);
                m[1][3] = c(1.0, 0.0);
            }
            Gate::CZ => {
                for (i, row) in m.iter_mut().enumerate() {
                    row[i] = c(if i == 3 { -1.0 } else { 1.0 }, 0.0);
                }
            }
            Gate::Swap => {
                m[0][0] = c(1.0, 0.0);
                m[1][2] = c(1.0, 0.0);
                m[2][1] = c(1.0, 0.0);
                m[3][3] = c(1.0, 0.0);
            }
            Gate::RZZ(a) => {
                let half = std::f64::consts::PI * a / 2.0;
                for (i, row) in m.iter_mut().enumerate() {
                    let parity = (i & 1) ^ (i >> 1);
                    let sign = if parity == 0 { -1.0 } else { 1.0 };
                    row[i] = Complex::from_polar(1.0, sign * half);
                }
            }
            Gate::RXX(a) => {
                let half = std::f64::consts::PI * a / 2.0;
                let (s, co) = half.sin_cos();
                for (i, row) in m.iter_mut().enumerate() {
                    row[i] = c(co, 0.0);
                    row[3 - i] = c(0.0, -s);
                }
            }
            _ => return None,
        }
        Some(m)
    }
}

pub fn rz_matrix(a: f64) -> Mat2<f64> {
    let half = std::f64::consts::PI * a / 2.0;
    [
        [Complex::from_polar(1.0, -half), c(0.0, 0.0)],
        [c(0.0, 0.0), Complex::from_polar(1.0, half)],
    ]
}

pub fn rx_matrix(a: f64) -> Mat2<f64> {
    let (s, co) = (std::f64::consts::PI * a / 2.0).sin_cos();
    [[c(co, 0.0), c(0.0, -s)], [c(0.0, -s), c(co, 0.0)]]
}

pub fn ry_matrix(a: f64) -> Mat2<f64> {
    let (s, co) = (std::f64::consts::PI * a / 2.0).sin_cos();
    [[c(co, 0.0), c(-s, 0.0)], [c(s, 0.0), c(co, 0.0)]]
}

/// Classical bit addressed by register index and bit offset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Clbit {
    pub register: usize,
    pub bit: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instruction {
    pub gate: Gate,
    pub qubits: Vec<Qubit>,
    /// Destination of a `Measure`.
    pub clbit: Option<Clbit>,
}

impl Instruction {
    pub fn new(gate: Gate, qubits: &[usize]) -> Self {
        Self {
            gate,
            qubits: qubits.iter().map(|&q| Qubit(q)).collect(),
            clbit: None,
        }
    }

    pub fn qubit(&self, i: usize) -> usize {
        self.qubits[i].0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassicalRegister {
    pub name: String,
    pub size: usize,
}

/// Ordered instruction list over `num_qubits` qubits and named classical
/// registers.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    num_qubits: usize,
    registers: Vec<ClassicalRegister>,
    instructions: Vec<Instruction>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Self {
        Self {
            num_qubits,
            registers: Vec::new(),
            instructions: Vec::new(),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn instructions(&self) -> &[Instruction] {
        &self.instructions
    }

    pub fn registers(&self) -> &[ClassicalRegister] {
        &self.registers
    }

    pub fn len(&self) -> usize {
        self.instructions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instructions.is_empty()
    }

    pub fn num_clbits(&self) -> usize {
        self.registers.iter().map(|r| r.size).sum()
    }

    pub fn register_index(&self, name: &str) -> Option<usize> {
        self.registers.iter().position(|r| r.name == name)
    }

    /// Flat offset of each register's first bit, in declaration order.
    pub fn register_offsets(&self) -> Vec<usize> {
        let mut acc = 0;
        self.registers
            .iter()
            .map(|r| {
                let o = acc;
                acc += r.size;
                o
            })
            .collect()
    }

    /// Declares a register and returns its index.
    pub fn add_register(&mut self, name: &str, size: usize) -> Result<usize> {
        if self.register_index(name).is_some() {
            return Err(Error::invalid(format!("duplicate classical register `{name}`")));
        }
        self.registers.push(ClassicalRegister {
            name: name.to_string(),
            size,
        });
        Ok(self.registers.len() - 1)
    }

    /// Validates and appends an instruction.
    pub fn push(&mut self, inst: Instruction) -> Result<()> {
        self.validate(&inst)?;
        self.instructions.push(inst);
        Ok(())
    }

    fn validate(&self, inst: &Instruction) -> Result<()> {
        let name = inst.gate.name();
        if let Some(arity) = inst.gate.arity() {
            if inst.qubits.len() != arity {
                return Err(Error::invalid(format!(
                    "`{name}` expects {arity} qubits, got {}",
                    inst.qubits.len()
                )));
            }
        }
        if let Gate::Mcx { controls: 0, .. } = inst.gate {
            return Err(Error::invalid("mcx needs at least one control"));
        }
        for p in inst.gate.params() {
            if !p.is_finite() {
                return Err(Error::invalid(format!("`{name}` has a non-finite angle")));
            }
        }
        for (i, q) in inst.qubits.iter().enumerate() {
            if q.0 >= self.num_qubits {
                return Err(Error::invalid(format!(
                    "`{name}` references {q} but the circuit has {} qubits",
                    self.num_qubits
                )));
            }
            if inst.qubits[..i].contains(q) {
                return Err(Error::invalid(format!("`{name}` repeats {q}")));
            }
        }
        match (inst.gate, inst.clbit) {
            (Gate::Measure, Some(cb)) => {
                let reg = self
                    .registers
                    .get(cb.register)
                    .ok_or_else(|| Error::invalid(format!("measure targets unknown register #{}", cb.register)))?;
                if cb.bit >= reg.size {
                    return Err(Error::invalid(format!(
                        "measure targets bit {} of `{}` (size {})",
                        cb.bit, reg.name, reg.size
                    )));
                }
            }
            (Gate::Measure, None) => return Err(Error::invalid("measure without a classical target")),
            (_, Some(_)) => return Err(Error::invalid(format!("`{name}` cannot write a classical bit"))),
            _ => {}
        }
        Ok(())
    }

    /// Appends a gate; panics on an invalid instruction, which is a bug in
    /// the caller rather than a data error.
    pub fn gate(&mut self, gate: Gate, qubits: &[usize]) -> &mut Self {
        self.push(Instruction::new(gate, qubits))
            .unwrap_or_else(|e| panic!("{e}"));
        self
    }

    pub fn x(&mut self, q: usize) -> &mut Self {
        self.gate(Gate::X, &[q])
    }
    pub fn y(&mut self, q: usize) -> &mut Self {
        self.gate(Gate::Y, &[q])
    }
    pub fn z(&mut self, q: usize) -> &mut Self {
        self.gate(Gate::Z, &[q])
    }
    pub fn h(&mut self, q: usize) -> &mut Self {
        self.gate(Gate::H, &[q])
    }
    pub fn s(&mut self, q: usize) -> &mut Self {
        self.gate(Gate::S, &[q])
    }
    pub fn sdg(&mut self, q: usize) -> &mut Self {
        self.gate(Gate::Sdg, &[q])
    }
    pub fn t(&mut self, q: usize) -> &mut Self {
        self.gate(Gate::RZ(0.25), &[q])
    }
    pub fn tdg(&mut self, q: usize) -> &mut Self {
        self.gate(Gate::RZ(-0.25), &[q])
    }
    pub fn id(&mut self, q: usize) -> &mut Self {
        self.gate(Gate::I, &[q])
    }
    pub fn rx(&mut self, theta: f64, q: usize) -> &mut Self {
        self.gate(Gate::RX(theta), &[q])
    }
    pub fn rz(&mut self, theta: f64, q: usize) -> &mut Self {
        self.gate(Gate::RZ(theta), &[q])
    }
    pub fn u(&mut self, theta: f64, phi: f64, lambda: f64, q: usize) -> &mut Self {
        self.gate(Gate::U { theta, phi, lambda }, &[q])
    }
    pub fn cx(&mut self, control: usize, target: usize) -> &mut Self {
        self.gate(Gate::CX, &[control, target])
    }
    pub fn cz(&mut self, a: usize, b: usize) -> &mut Self {
        self.gate(Gate::CZ, &[a, b])
    }
    pub fn swap(&mut self, a: usize, b: usize) -> &mut Self {
        self.gate(Gate::Swap, &[a, b])
    }
    pub fn rzz(&mut self, theta: f64, a: usize, b: usize) -> &mut Self {
        self.gate(Gate::RZZ(theta), &[a, b])
    }
    pub fn rxx(&mut self, theta: f64, a: usize, b: usize) -> &mut Self {
        self.gate(Gate::RXX(theta), &[a, b])
    }
    pub fn reset(&mut self, q: usize) -> &mut Self {
        self.gate(Gate::Reset, &[q])
    }

    /// Multi-controlled X, optionally annotated with a borrowed qubit.
    pub fn mcx(&mut self, controls: &[usize], target: usize, borrowed: Option<usize>) -> &mut Self {
        let mut qs = controls.to_vec();
        qs.push(target);
        if let Some(b) = borrowed {
            qs.push(b);
        }
        self.gate(
            Gate::Mcx {
                controls: controls.len(),
                borrowed: borrowed.is_some(),
            },
            &qs,
        )
    }

    pub fn barrier(&mut self, qubits: &[usize]) -> &mut Self {
        self.gate(Gate::Barrier, qubits)
    }

    /// Measures `q` into bit `bit` of the register named `register`.
    pub fn measure(&mut self, q: usize, register: &str, bit: usize) -> &mut Self {
        let reg = self
            .register_index(register)
            .unwrap_or_else(|| panic!("unknown classical register `{register}`"));
        let inst = Instruction {
            gate: Gate::Measure,
            qubits: vec![Qubit(q)],
            clbit: Some(Clbit { register: reg, bit }),
        };
        self.push(inst).unwrap_or_else(|e| panic!("{e}"));
        self
    }

    /// Appends every instruction of `other`, matching classical registers by
    /// name and declaring any that are missing.
    pub fn append(&mut self, other: &Circuit) -> Result<()> {
        if other.num_qubits > self.num_qubits {
            return Err(Error::invalid(format!(
                "cannot append a {}-qubit circuit onto {} qubits",
                other.num_qubits, self.num_qubits
            )));
        }
        let mut map = Vec::with_capacity(other.registers.len());
        for reg in &other.registers {
            let idx = match self.register_index(&reg.name) {
                Some(i) if self.registers[i].size == reg.size => i,
                Some(_) => {
                    return Err(Error::invalid(format!(
                        "register `{}` declared with different sizes",
                        reg.name
                    )))
                }
                None => self.add_register(&reg.name, reg.size)?,
            };
            map.push(idx);
        }
        for inst in &other.instructions {
            let mut inst = inst.clone();
            if let Some(cb) = inst.clbit.as_mut() {
                cb.register = map[cb.register];
            }
            self.instructions.push(inst);
        }
        Ok(())
    }

    /// Copy of the circuit with qubit `q` renamed to `perm[q]`.
    pub fn relabeled(&self, perm: &[usize], num_qubits: usize) -> Result<Circuit> {
        let mut out = Circuit {
            num_qubits,
            registers: self.registers.clone(),
            instructions: Vec::new(),
        };
        for inst in &self.instructions {
            let mut inst = inst.clone();
            for q in inst.qubits.iter_mut() {
                q.0 = *perm.get(q.0).ok_or_else(|| Error::invalid("permutation too short"))?;
            }
            out.push(inst)?;
        }
        Ok(out)
    }

    /// Inverse circuit. Only defined for unitary instructions.
    pub fn inverse(&self) -> Result<Circuit> {
        let mut out = Circuit::new(self.num_qubits);
        out.registers = self.registers.clone();
        for inst in self.instructions.iter().rev() {
            let gate = match inst.gate {
                Gate::S => Gate::Sdg,
                Gate::Sdg => Gate::S,
                Gate::RX(a) => Gate::RX(-a),
                Gate::RZ(a) => Gate::RZ(-a),
                Gate::RZZ(a) => Gate::RZZ(-a),
                Gate::RXX(a) => Gate::RXX(-a),
                Gate::U { theta, phi, lambda } => Gate::U {
                    theta: -theta,
                    phi: -lambda,
                    lambda: -phi,
                },
                Gate::Measure | Gate::Reset => {
                    return Err(Error::UnsupportedGate {
                        gate: inst.gate.name().into(),
                        reason: "not invertible".into(),
                    })
                }
                g => g,
            };
            out.instructions.push(Instruction {
                gate,
                qubits: inst.qubits.clone(),
                clbit: None,
            });
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn gate(self) -> Gate {
        match self {
            Pauli::X => Gate::X,
            Pauli::Y => Gate::Y,
            Pauli::Z => Gate::Z,
        }
    }

    pub const ALL: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];
}

/// Tensor product of single-qubit Paulis; the empty string is the identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct PauliString {
    support: BTreeMap<usize, Pauli>,
}

impl PauliString {
    pub fn identity() -> Self {
        Self::default()
    }

    /// Same Pauli on every listed qubit.
    pub fn uniform(pauli: Pauli, qubits: impl IntoIterator<Item = usize>) -> Self {
        Self {
            support: qubits.into_iter().map(|q| (q, pauli)).collect(),
        }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, Pauli)>) -> Result<Self> {
        let mut support = BTreeMap::new();
        for (q, p) in pairs {
            if support.insert(q, p).is_some() {
                return Err(Error::invalid(format!("qubit {q} appears twice in Pauli string")));
            }
        }
        Ok(Self { support })
    }

    pub fn weight(&self) -> usize {
        self.support.len()
    }

    pub fn is_identity(&self) -> bool {
        self.support.is_empty()
    }

    pub fn get(&self, q: usize) -> Option<Pauli> {
        self.support.get(&q).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, Pauli)> + '_ {
        self.support.iter().map(|(&q, &p)| (q, p))
    }

    pub fn qubits(&self) -> Vec<usize> {
        self.support.keys().copied().collect()
    }

    /// Circuit applying the string on `num_qubits` qubits.
    pub fn to_circuit(&self, num_qubits: usize) -> Circuit {
        let mut c = Circuit::new(num_qubits);
        for (q, p) in self.iter() {
            c.gate(p.gate(), &[q]);
        }
        c
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.support.is_empty() {
            return write!(f, "I");
        }
        for (i, (q, p)) in self.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{p:?}{q}")?;
        }
        Ok(())
    }
}
