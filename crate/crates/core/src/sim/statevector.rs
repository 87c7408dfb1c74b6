//! Dense statevector with in-place gate kernels. Qubit `q` is bit `q` of the
//! amplitude index.

use num_complex::Complex;

use crate::circuit::Gate;
use crate::error::{Error, Result};
use crate::linalg::Mat2;
use crate::scalar::Real;

/// Largest register the engine will allocate.
pub const MAX_QUBITS: usize = 24;

pub(crate) fn to_t<T: Real>(v: Complex<f64>) -> Complex<T> {
    Complex::new(T::of(v.re), T::of(v.im))
}

pub(crate) fn mat2_to<T: Real>(m: &Mat2<f64>) -> Mat2<T> {
    [[to_t(m[0][0]), to_t(m[0][1])], [to_t(m[1][0]), to_t(m[1][1])]]
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<T> {
    num_qubits: usize,
    amps: Vec<Complex<T>>,
}

impl<T: Real> StateVector<T> {
    /// `|0…0⟩` on `num_qubits` qubits.
    pub fn zero(num_qubits: usize) -> Result<Self> {
        if num_qubits > MAX_QUBITS {
            return Err(Error::TooLarge {
                qubits: num_qubits,
                limit: MAX_QUBITS,
            });
        }
        let mut amps = vec![Complex::new(T::zero(), T::zero()); 1 << num_qubits];
        amps[0] = Complex::new(T::one(), T::zero());
        Ok(Self { num_qubits, amps })
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        let mut s = Self::zero(num_qubits)?;
        s.amps[0] = Complex::new(T::zero(), T::zero());
        s.amps[index] = Complex::new(T::one(), T::zero());
        Ok(s)
    }

    pub fn from_amplitudes(amps: Vec<Complex<T>>) -> Result<Self> {
        let n = amps.len().trailing_zeros() as usize;
        if amps.len() != 1 << n {
            return Err(Error::domain("amplitude count must be a power of two"));
        }
        Ok(Self { num_qubits: n, amps })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex<T>> {
        self.amps
    }

    pub fn norm_sqr(&self) -> T {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Applies a 2x2 matrix to qubit `q`.
    pub fn apply_mat1(&mut self, q: usize, m: &Mat2<T>) {
        let bit = 1usize << q;
        let len = self.amps.len();
        let mut base = 0;
        while base < len {
            for i in base..base + bit {
                let a0 = self.amps[i];
                let a1 = self.amps[i | bit];
                self.amps[i] = m[0][0] * a0 + m[0][1] * a1;
                self.amps[i | bit] = m[1][0] * a0 + m[1][1] * a1;
            }
            base += bit << 1;
        }
    }

    /// Multiplies amplitudes with qubit `q` = 0 by `d0` and = 1 by `d1`.
    pub fn apply_diag1(&mut self, q: usize, d0: Complex<T>, d1: Complex<T>) {
        let bit = 1usize << q;
        for (i, a) in self.amps.iter_mut().enumerate() {
            *a *= if i & bit == 0 { d0 } else { d1 };
        }
    }

    pub fn apply_x(&mut self, q: usize) {
        let bit = 1usize << q;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                self.amps.swap(i, i | bit);
            }
        }
    }

    pub fn apply_y(&mut self, q: usize) {
        let bit = 1usize << q;
        let i_unit = Complex::new(T::zero(), T::one());
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let a0 = self.amps[i];
                let a1 = self.amps[i | bit];
                self.amps[i] = -i_unit * a1;
                self.amps[i | bit] = i_unit * a0;
            }
        }
    }

    pub fn apply_z(&mut self, q: usize) {
        let bit = 1usize << q;
        for (i, a) in self.amps.iter_mut().enumerate() {
            if i & bit != 0 {
                *a = -*a;
            }
        }
    }

    /// X on `target` wherever every bit of `control_mask` is set.
    pub fn apply_controlled_x(&mut self, control_mask: usize, target: usize) {
        let bit = 1usize << target;
        for i in 0..self.amps.len() {
            if i & bit == 0 && i & control_mask == control_mask {
                self.amps.swap(i, i | bit);
            }
        }
    }

    pub fn apply_cz(&mut self, a: usize, b: usize) {
        let mask = (1usize << a) | (1usize << b);
        for (i, amp) in self.amps.iter_mut().enumerate() {
            if i & mask == mask {
                *amp = -*amp;
            }
        }
    }

    pub fn apply_swap(&mut self, a: usize, b: usize) {
        let (ba, bb) = (1usize << a, 1usize << b);
        for i in 0..self.amps.len() {
            if i & ba != 0 && i & bb == 0 {
                self.amps.swap(i, (i & !ba) | bb);
            }
        }
    }

    /// Phase `same` where qubits `a`, `b` agree and `diff` where they differ.
    pub fn apply_parity_phase(&mut self, a: usize, b: usize, same: Complex<T>, diff: Complex<T>) {
        for (i, amp) in self.amps.iter_mut().enumerate() {
            let parity = ((i >> a) ^ (i >> b)) & 1;
            *amp *= if parity == 0 { same } else { diff };
        }
    }

    /// `cos·I − i·sin·X⊗X` on qubits `a`, `b`.
    pub fn apply_xx_rotation(&mut self, a: usize, b: usize, cos: T, sin: T) {
        let mask = (1usize << a) | (1usize << b);
        let ms = Complex::new(T::zero(), -sin);
        let co = Complex::new(cos, T::zero());
        for i in 0..self.amps.len() {
            let j = i ^ mask;
            if i < j {
                let (x, y) = (self.amps[i], self.amps[j]);
                self.amps[i] = co * x + ms * y;
                self.amps[j] = ms * x + co * y;
            }
        }
    }

    /// Applies a unitary gate from the IR. Measurement, reset and barrier
    /// instructions are rejected except barrier, which is a no-op.
    pub fn apply_gate(&mut self, gate: &Gate, qubits: &[usize]) -> Result<()> {
        match *gate {
            Gate::X => self.apply_x(qubits[0]),
            Gate::Y => self.apply_y(qubits[0]),
            Gate::Z => self.apply_z(qubits[0]),
            Gate::I | Gate::Barrier => {}
            Gate::CX => self.apply_controlled_x(1 << qubits[0], qubits[1]),
            Gate::CZ => self.apply_cz(qubits[0], qubits[1]),
            Gate::Swap => self.apply_swap(qubits[0], qubits[1]),
            Gate::RZZ(theta) => {
                let half = T::of(std::f64::consts::PI * theta / 2.0);
                let same = Complex::new(half.cos(), -half.sin());
                self.apply_parity_phase(qubits[0], qubits[1], same, same.conj());
            }
            Gate::RXX(theta) => {
                let half = T::of(std::f64::consts::PI * theta / 2.0);
                self.apply_xx_rotation(qubits[0], qubits[1], half.cos(), half.sin());
            }
            Gate::Mcx { controls, .. } => {
                let mask = qubits[..controls].iter().fold(0usize, |m, &q| m | (1 << q));
                self.apply_controlled_x(mask, qubits[controls]);
            }
            g if g.is_single_qubit_unitary() => {
                let m = g.matrix1().expect("single-qubit gate has a matrix");
                self.apply_mat1(qubits[0], &mat2_to(&m));
            }
            g => {
                return Err(Error::UnsupportedGate {
                    gate: g.name().into(),
                    reason: "not a unitary gate".into(),
                })
            }
        }
        Ok(())
    }

    /// Probability that measuring `q` yields 1.
    pub fn prob_one(&self, q: usize) -> T {
        let bit = 1usize << q;
        self.amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & bit != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// Projects qubit `q` onto `outcome` given that outcome's probability.
    pub fn collapse(&mut self, q: usize, outcome: bool, prob: T) {
        let bit = 1usize << q;
        let scale = T::one() / prob.sqrt();
        for (i, a) in self.amps.iter_mut().enumerate() {
            if ((i & bit) != 0) == outcome {
                *a *= scale;
            } else {
                *a = Complex::new(T::zero(), T::zero());
            }
        }
    }

    /// Born probability of every basis index.
    pub fn probabilities(&self) -> Vec<T> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }
}
