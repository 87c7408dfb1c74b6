//! Monte Carlo trajectory simulation under circuit-level Pauli noise.
//!
//! Every single-qubit gate is followed by X, Y or Z with probability `p1/3`
//! each, every two-qubit gate by one of the 15 non-identity two-qubit Paulis
//! with probability `p2/15` each. Initial preparation and recorded
//! measurements suffer bit flips with probability `p_spam`. Resets and idle
//! qubits are noiseless.
//!
//! Shot `i` of a run seeded with `s` draws its noise from ChaCha stream
//! `2i` and its Born-rule samples from stream `2i + 1` of key `s`, so a shot
//! does not depend on which thread ran it or on any other shot. Noise is
//! state independent and is sampled up front; the state evolution is then
//! resumed from a cached noiseless snapshot taken just before the first
//! fault, which gives the same result as simulating from the start.

mod exact;
mod statevector;

use std::collections::HashMap;
use std::io::Write;
use std::sync::Arc;

use num_complex::Complex;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, Gate, Pauli, PauliString};
use crate::error::{Error, Result};
use crate::linalg::Mat2;
use crate::scalar::Real;

pub use exact::{exact_outcomes, Branch};
use statevector::mat2_to;
pub use statevector::{StateVector, MAX_QUBITS};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub p1: f64,
    pub p2: f64,
    pub p_spam: f64,
}

impl NoiseModel {
    pub fn new(p1: f64, p2: f64, p_spam: f64) -> Result<Self> {
        for (name, p) in [("p1", p1), ("p2", p2), ("p_spam", p_spam)] {
            if !(0.0..1.0).contains(&p) {
                return Err(Error::domain(format!("{name} = {p} is outside [0, 1)")));
            }
        }
        Ok(Self { p1, p2, p_spam })
    }

    /// The single-parameter model: `p1 = p2 = p_spam = p`.
    pub fn uniform(p: f64) -> Result<Self> {
        Self::new(p, p, p)
    }

    pub fn noiseless() -> Self {
        Self {
            p1: 0.0,
            p2: 0.0,
            p_spam: 0.0,
        }
    }

    pub fn is_noiseless(&self) -> bool {
        self.p1 == 0.0 && self.p2 == 0.0 && self.p_spam == 0.0
    }
}

/// Maps a uniform draw to a fault on a gate of the given arity, using one
/// draw for both the occurrence and the Pauli type.
fn fault_from_uniform(u: f64, p: f64, qubits: &[usize]) -> Option<PauliString> {
    if u >= p {
        return None;
    }
    let pauli = |k: usize| match k {
        1 => Some(Pauli::X),
        2 => Some(Pauli::Y),
        3 => Some(Pauli::Z),
        _ => None,
    };
    match qubits.len() {
        1 => {
            let k = ((u / p * 3.0) as usize).min(2) + 1;
            Some(PauliString::uniform(pauli(k).unwrap(), [qubits[0]]))
        }
        2 => {
            let k = ((u / p * 15.0) as usize).min(14) + 1;
            let pairs = [(qubits[0], pauli(k % 4)), (qubits[1], pauli(k / 4))];
            Some(
                PauliString::from_pairs(pairs.into_iter().filter_map(|(q, p)| p.map(|p| (q, p))))
                    .expect("distinct gate qubits"),
            )
        }
        _ => None,
    }
}

/// Samples the fault that follows `gate` on `qubits`, if any.
pub fn sample_gate_fault<R: Rng + ?Sized>(
    gate: &Gate,
    qubits: &[usize],
    noise: &NoiseModel,
    rng: &mut R,
) -> Option<PauliString> {
    let p = if gate.is_single_qubit_unitary() {
        noise.p1
    } else if gate.is_two_qubit_unitary() {
        noise.p2
    } else {
        return None;
    };
    let u: f64 = rng.random();
    fault_from_uniform(u, p, qubits)
}

/// Per-shot random streams derived from `(seed, shot)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShotStream {
    pub seed: u64,
    pub shot: u64,
}

impl ShotStream {
    pub fn new(seed: u64, shot: u64) -> Self {
        Self { seed, shot }
    }

    fn noise_rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.shot.wrapping_mul(2));
        rng
    }

    fn born_rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.shot.wrapping_mul(2).wrapping_add(1));
        rng
    }
}

fn born_uniform(rng: &mut ChaCha8Rng, measurement: usize) -> f64 {
    rng.set_word_pos(measurement as u128 * 2);
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Register names, sizes and flat offsets shared by the records of one run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegisterLayout {
    pub names: Vec<String>,
    pub sizes: Vec<usize>,
    pub offsets: Vec<usize>,
}

impl RegisterLayout {
    pub fn of(circuit: &Circuit) -> Self {
        Self {
            names: circuit.registers().iter().map(|r| r.name.clone()).collect(),
            sizes: circuit.registers().iter().map(|r| r.size).collect(),
            offsets: circuit.register_offsets(),
        }
    }

    pub fn total_bits(&self) -> usize {
        self.sizes.iter().sum()
    }
}

/// Classical outcomes of one trajectory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShotRecord {
    layout: Arc<RegisterLayout>,
    bits: Vec<u8>,
}

impl ShotRecord {
    pub fn new(layout: Arc<RegisterLayout>, bits: Vec<u8>) -> Result<Self> {
        if bits.len() != layout.total_bits() {
            return Err(Error::domain(format!(
                "record has {} bits, layout expects {}",
                bits.len(),
                layout.total_bits()
            )));
        }
        Ok(Self { layout, bits })
    }

    /// Builds a record from `(name, bits)` pairs.
    pub fn from_registers(regs: &[(&str, Vec<u8>)]) -> Self {
        let mut layout = RegisterLayout {
            names: vec![],
            sizes: vec![],
            offsets: vec![],
        };
        let mut bits = Vec::new();
        for (name, b) in regs {
            layout.names.push(name.to_string());
            layout.sizes.push(b.len());
            layout.offsets.push(bits.len());
            bits.extend_from_slice(b);
        }
        Self {
            layout: Arc::new(layout),
            bits,
        }
    }

    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn register(&self, name: &str) -> Option<&[u8]> {
        let i = self.layout.names.iter().position(|n| n == name)?;
        let o = self.layout.offsets[i];
        Some(&self.bits[o..o + self.layout.sizes[i]])
    }

    pub fn registers(&self) -> impl Iterator<Item = (&str, &[u8])> {
        (0..self.layout.names.len()).map(move |i| {
            let o = self.layout.offsets[i];
            (self.layout.names[i].as_str(), &self.bits[o..o + self.layout.sizes[i]])
        })
    }
}

/// Writes records as CSV: one row per shot, one `register.bit` column per
/// classical bit.
pub fn write_records_csv<W: Write>(records: &[ShotRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    if let Some(first) = records.first() {
        let l = first.layout();
        let header: Vec<String> = l
            .names
            .iter()
            .zip(&l.sizes)
            .flat_map(|(n, &s)| (0..s).map(move |i| format!("{n}.{i}")))
            .collect();
        w.write_record(&header)?;
        for r in records {
            w.write_record(r.bits().iter().map(|b| b.to_string()))?;
        }
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Copy)]
enum Op<T> {
    Noop,
    X(usize),
    Y(usize),
    Z(usize),
    Mat1(usize, Mat2<T>),
    Diag1(usize, Complex<T>, Complex<T>),
    Cx(usize, usize),
    Cz(usize, usize),
    Swap(usize, usize),
    Parity(usize, usize, Complex<T>, Complex<T>),
    Xx(usize, usize, T, T),
    Measure { qubit: usize, clbit: usize, index: usize },
    Reset { qubit: usize, index: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Site {
    None,
    One(usize),
    Two(usize, usize),
    Flip,
}

/// One sampled noise event of a shot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NoiseEvent {
    /// X on `qubit` before the first instruction.
    Prep { qubit: usize },
    /// Pauli fault after instruction `op`.
    Gate { op: usize, fault: PauliString },
    /// Recorded outcome of measurement instruction `op` is flipped.
    Flip { op: usize },
}

impl NoiseEvent {
    /// Instruction index from which the event changes the quantum state.
    fn state_index(&self) -> Option<usize> {
        match self {
            NoiseEvent::Prep { .. } => Some(0),
            NoiseEvent::Gate { op, .. } => Some(*op),
            NoiseEvent::Flip { .. } => None,
        }
    }
}

struct Snapshot<T> {
    index: usize,
    state: StateVector<T>,
    bits: Vec<u8>,
}

/// Budget for cached prefix states.
const SNAPSHOT_BYTES: usize = 32 << 20;

/// Callback given the instruction index and the state right after it.
pub type Observer<'a, T> = &'a mut dyn FnMut(usize, &StateVector<T>);

/// Precompiled trajectory simulator for one circuit and noise model.
pub struct Simulator<T: Real = f64> {
    num_qubits: usize,
    ops: Vec<Op<T>>,
    sites: Vec<Site>,
    /// For a measurement, the next instruction overwriting the same bit.
    next_write: Vec<usize>,
    noise: NoiseModel,
    layout: Arc<RegisterLayout>,
    snapshots: Vec<Snapshot<T>>,
    snap_tol: T,
}

impl<T: Real> Simulator<T> {
    pub fn new(circuit: &Circuit, noise: NoiseModel) -> Result<Self> {
        Self::build(circuit, noise, true)
    }

    /// Simulator that always starts from `|0…0⟩`; used to cross-check the
    /// snapshot cache.
    pub fn without_prefix_cache(circuit: &Circuit, noise: NoiseModel) -> Result<Self> {
        Self::build(circuit, noise, false)
    }

    fn build(circuit: &Circuit, noise: NoiseModel, cache: bool) -> Result<Self> {
        NoiseModel::new(noise.p1, noise.p2, noise.p_spam)?;
        let n = circuit.num_qubits();
        if n > MAX_QUBITS {
            return Err(Error::TooLarge {
                qubits: n,
                limit: MAX_QUBITS,
            });
        }
        let offsets = circuit.register_offsets();
        let mut ops = Vec::with_capacity(circuit.len());
        let mut sites = Vec::with_capacity(circuit.len());
        let mut readouts = 0;
        let pi = std::f64::consts::PI;
        let ct = |z: Complex<f64>| Complex::new(T::of(z.re), T::of(z.im));
        for inst in circuit.instructions() {
            let q = |i: usize| inst.qubits[i].0;
            let (op, site) = match inst.gate {
                Gate::X => (Op::X(q(0)), Site::One(q(0))),
                Gate::Y => (Op::Y(q(0)), Site::One(q(0))),
                Gate::Z => (Op::Z(q(0)), Site::One(q(0))),
                Gate::I => (Op::Noop, Site::One(q(0))),
                Gate::RZ(a) => {
                    let d = Complex::from_polar(1.0, pi * a / 2.0);
                    (Op::Diag1(q(0), ct(d.conj()), ct(d)), Site::One(q(0)))
                }
                g @ (Gate::H | Gate::S | Gate::Sdg | Gate::RX(_) | Gate::U { .. }) => {
                    (Op::Mat1(q(0), mat2_to(&g.matrix1().unwrap())), Site::One(q(0)))
                }
                Gate::CX => (Op::Cx(q(0), q(1)), Site::Two(q(0), q(1))),
                Gate::CZ => (Op::Cz(q(0), q(1)), Site::Two(q(0), q(1))),
                Gate::Swap => (Op::Swap(q(0), q(1)), Site::Two(q(0), q(1))),
                Gate::RZZ(a) => {
                    let same = Complex::from_polar(1.0, -pi * a / 2.0);
                    (Op::Parity(q(0), q(1), ct(same), ct(same.conj())), Site::Two(q(0), q(1)))
                }
                Gate::RXX(a) => {
                    let (s, c) = (pi * a / 2.0).sin_cos();
                    (Op::Xx(q(0), q(1), T::of(c), T::of(s)), Site::Two(q(0), q(1)))
                }
                Gate::Measure => {
                    let cb = inst.clbit.expect("validated measure has a target");
                    readouts += 1;
                    (
                        Op::Measure {
                            qubit: q(0),
                            clbit: offsets[cb.register] + cb.bit,
                            index: readouts - 1,
                        },
                        Site::Flip,
                    )
                }
                Gate::Reset => {
                    readouts += 1;
                    (
                        Op::Reset {
                            qubit: q(0),
                            index: readouts - 1,
                        },
                        Site::None,
                    )
                }
                Gate::Barrier => (Op::Noop, Site::None),
                Gate::Mcx { .. } => {
                    return Err(Error::UnsupportedGate {
                        gate: "mcx".into(),
                        reason: "synthesize multi-controlled gates before simulation".into(),
                    })
                }
            };
            ops.push(op);
            sites.push(site);
        }
        let mut next_write = vec![usize::MAX; ops.len()];
        let mut last: HashMap<usize, usize> = HashMap::new();
        for (i, op) in ops.iter().enumerate().rev() {
            if let Op::Measure { clbit, .. } = op {
                if let Some(&j) = last.get(clbit) {
                    next_write[i] = j;
                }
                last.insert(*clbit, i);
            }
        }
        let eps = T::epsilon().as_f64();
        let mut sim = Self {
            num_qubits: n,
            ops,
            sites,
            next_write,
            noise,
            layout: Arc::new(RegisterLayout::of(circuit)),
            snapshots: Vec::new(),
            snap_tol: T::of((64.0 * eps).max(1e-12)),
        };
        if cache {
            sim.build_snapshots()?;
        } else {
            sim.snapshots.push(Snapshot {
                index: 0,
                state: StateVector::zero(n)?,
                bits: vec![0; sim.layout.total_bits()],
            });
        }
        Ok(sim)
    }

    /// Runs the noiseless trajectory until its first random measurement,
    /// keeping evenly spaced copies of the state.
    fn build_snapshots(&mut self) -> Result<()> {
        let mut state = StateVector::<T>::zero(self.num_qubits)?;
        let mut bits = vec![0u8; self.layout.total_bits()];
        let bytes = (1usize << self.num_qubits) * std::mem::size_of::<Complex<T>>();
        let stride = ((self.ops.len() + 1) * bytes).div_ceil(SNAPSHOT_BYTES).max(1);
        self.snapshots.push(Snapshot {
            index: 0,
            state: state.clone(),
            bits: bits.clone(),
        });
        for i in 0..self.ops.len() {
            let deterministic = match self.ops[i] {
                Op::Measure { qubit, .. } | Op::Reset { qubit, .. } => {
                    let p = state.prob_one(qubit);
                    p <= self.snap_tol || p >= T::one() - self.snap_tol
                }
                _ => true,
            };
            if !deterministic {
                break;
            }
            // The Born draw is never consulted for a deterministic outcome.
            self.apply_op(i, &mut state, &mut bits, &mut |_| 0.0);
            if (i + 1) % stride == 0 {
                self.snapshots.push(Snapshot {
                    index: i + 1,
                    state: state.clone(),
                    bits: bits.clone(),
                });
            }
        }
        Ok(())
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn noise(&self) -> &NoiseModel {
        &self.noise
    }

    pub fn register_layout(&self) -> &Arc<RegisterLayout> {
        &self.layout
    }

    /// Noise events of one shot, in program order.
    pub fn sample_events(&self, stream: ShotStream) -> Vec<NoiseEvent> {
        let mut events = Vec::new();
        if self.noise.is_noiseless() {
            return events;
        }
        let mut rng = stream.noise_rng();
        for qubit in 0..self.num_qubits {
            if rng.random::<f64>() < self.noise.p_spam {
                events.push(NoiseEvent::Prep { qubit });
            }
        }
        for (op, site) in self.sites.iter().enumerate() {
            match *site {
                Site::None => {}
                Site::One(q) => {
                    if let Some(fault) = fault_from_uniform(rng.random(), self.noise.p1, &[q]) {
                        events.push(NoiseEvent::Gate { op, fault });
                    }
                }
                Site::Two(a, b) => {
                    if let Some(fault) = fault_from_uniform(rng.random(), self.noise.p2, &[a, b]) {
                        events.push(NoiseEvent::Gate { op, fault });
                    }
                }
                Site::Flip => {
                    if rng.random::<f64>() < self.noise.p_spam {
                        events.push(NoiseEvent::Flip { op });
                    }
                }
            }
        }
        events
    }

    fn measure_outcome(&self, p_one: T, u: &mut dyn FnMut() -> f64) -> bool {
        if p_one <= self.snap_tol {
            false
        } else if p_one >= T::one() - self.snap_tol {
            true
        } else {
            u() < p_one.as_f64()
        }
    }

    fn apply_op(&self, i: usize, state: &mut StateVector<T>, bits: &mut [u8], born: &mut dyn FnMut(usize) -> f64) {
        match self.ops[i] {
            Op::Noop => {}
            Op::X(q) => state.apply_x(q),
            Op::Y(q) => state.apply_y(q),
            Op::Z(q) => state.apply_z(q),
            Op::Mat1(q, m) => state.apply_mat1(q, &m),
            Op::Diag1(q, d0, d1) => state.apply_diag1(q, d0, d1),
            Op::Cx(c, t) => state.apply_controlled_x(1 << c, t),
            Op::Cz(a, b) => state.apply_cz(a, b),
            Op::Swap(a, b) => state.apply_swap(a, b),
            Op::Parity(a, b, s, d) => state.apply_parity_phase(a, b, s, d),
            Op::Xx(a, b, c, s) => state.apply_xx_rotation(a, b, c, s),
            Op::Measure { qubit, clbit, index } => {
                let p1 = state.prob_one(qubit);
                let one = self.measure_outcome(p1, &mut || born(index));
                state.collapse(qubit, one, if one { p1 } else { T::one() - p1 });
                bits[clbit] = u8::from(one);
            }
            Op::Reset { qubit, index } => {
                let p1 = state.prob_one(qubit);
                let one = self.measure_outcome(p1, &mut || born(index));
                state.collapse(qubit, one, if one { p1 } else { T::one() - p1 });
                if one {
                    state.apply_x(qubit);
                }
            }
        }
    }

    fn apply_fault(state: &mut StateVector<T>, fault: &PauliString) {
        for (q, p) in fault.iter() {
            match p {
                Pauli::X => state.apply_x(q),
                Pauli::Y => state.apply_y(q),
                Pauli::Z => state.apply_z(q),
            }
        }
    }

    /// Simulates one trajectory with the given noise events. The observer
    /// sees the state after every instruction.
    pub fn run_with_events(
        &self,
        events: &[NoiseEvent],
        stream: ShotStream,
        mut observer: Option<Observer<'_, T>>,
    ) -> ShotRecord {
        let first = events
            .iter()
            .filter_map(|e| e.state_index())
            .min()
            .unwrap_or(usize::MAX);
        let snap = if observer.is_some() {
            &self.snapshots[0]
        } else {
            let pos = self.snapshots.partition_point(|s| s.index <= first);
            &self.snapshots[pos.saturating_sub(1)]
        };
        let mut state = snap.state.clone();
        let mut bits = snap.bits.clone();
        let mut born_rng = stream.born_rng();
        let mut born = |m: usize| born_uniform(&mut born_rng, m);

        let mut ev = 0;
        while ev < events.len() {
            match &events[ev] {
                NoiseEvent::Prep { qubit } => {
                    if snap.index == 0 {
                        state.apply_x(*qubit);
                    }
                }
                NoiseEvent::Flip { op } if *op < snap.index => {
                    if self.next_write[*op] >= snap.index {
                        if let Op::Measure { clbit, .. } = self.ops[*op] {
                            bits[clbit] ^= 1;
                        }
                    }
                }
                _ => break,
            }
            ev += 1;
        }
        for i in snap.index..self.ops.len() {
            self.apply_op(i, &mut state, &mut bits, &mut born);
            while ev < events.len() {
                match &events[ev] {
                    NoiseEvent::Gate { op, fault } if *op == i => Self::apply_fault(&mut state, fault),
                    NoiseEvent::Flip { op } if *op == i => {
                        if let Op::Measure { clbit, .. } = self.ops[i] {
                            bits[clbit] ^= 1;
                        }
                    }
                    _ => break,
                }
                ev += 1;
            }
            if let Some(obs) = observer.as_mut() {
                obs(i, &state);
            }
        }
        ShotRecord {
            layout: self.layout.clone(),
            bits,
        }
    }

    pub fn run_shot(&self, stream: ShotStream) -> ShotRecord {
        let events = self.sample_events(stream);
        self.run_with_events(&events, stream, None)
    }

    /// Runs one shot calling `observer(instruction_index, state)` after
    /// every instruction.
    pub fn run_shot_observed(
        &self,
        stream: ShotStream,
        observer: &mut dyn FnMut(usize, &StateVector<T>),
    ) -> ShotRecord {
        let events = self.sample_events(stream);
        self.run_with_events(&events, stream, Some(observer))
    }

    /// Shots `0..n_shots`, in parallel, mapped through `f` in shot order.
    pub fn run_shots_map<R: Send>(&self, n_shots: usize, seed: u64, f: impl Fn(ShotRecord) -> R + Sync) -> Vec<R> {
        (0..n_shots as u64)
            .into_par_iter()
            .map(|i| f(self.run_shot(ShotStream::new(seed, i))))
            .collect()
    }

    pub fn run_shots(&self, n_shots: usize, seed: u64) -> Result<Vec<ShotRecord>> {
        if n_shots == 0 {
            return Err(Error::domain("n_shots must be at least 1"));
        }
        Ok(self.run_shots_map(n_shots, seed, |r| r))
    }
}

/// One trajectory of `circuit` with the given stream.
pub fn run_shot(circuit: &Circuit, noise: &NoiseModel, stream: ShotStream) -> Result<ShotRecord> {
    Ok(Simulator::<f64>::new(circuit, *noise)?.run_shot(stream))
}

/// `n_shots` trajectories; shot `i` uses `ShotStream::new(seed, i)`.
pub fn run_shots(circuit: &Circuit, noise: &NoiseModel, n_shots: usize, seed: u64) -> Result<Vec<ShotRecord>> {
    Simulator::<f64>::new(circuit, *noise)?.run_shots(n_shots, seed)
}
