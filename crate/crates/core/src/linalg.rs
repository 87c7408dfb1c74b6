//! Dense complex matrices for the unitary oracle and single-qubit algebra.

use num_complex::Complex;

use crate::scalar::Real;

/// A 2x2 complex matrix, row-major.
pub type Mat2<T> = [[Complex<T>; 2]; 2];

#[inline]
pub fn c<T: Real>(re: f64, im: f64) -> Complex<T> {
    Complex::new(T::of(re), T::of(im))
}

pub fn mat2_mul<T: Real>(a: &Mat2<T>, b: &Mat2<T>) -> Mat2<T> {
    let mut out = [[Complex::new(T::zero(), T::zero()); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

pub fn mat2_identity<T: Real>() -> Mat2<T> {
    [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]]
}

/// Whether `m` is a scalar multiple of the identity to within `tol`.
pub fn mat2_is_identity_up_to_phase<T: Real>(m: &Mat2<T>, tol: f64) -> bool {
    let off = m[0][1].norm().as_f64().max(m[1][0].norm().as_f64());
    off <= tol && (m[0][0] - m[1][1]).norm().as_f64() <= tol
}

/// Whether `m` is diagonal to within `tol`.
pub fn mat2_is_diagonal<T: Real>(m: &Mat2<T>, tol: f64) -> bool {
    m[0][1].norm().as_f64() <= tol && m[1][0].norm().as_f64() <= tol
}

/// `U = e^{i phase} Rz(beta) Ry(gamma) Rz(delta)`, all angles in radians with
/// `Rz(a) = diag(e^{-ia/2}, e^{ia/2})` and `Ry(a) = exp(-i a Y / 2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Zyz {
    pub phase: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
}

impl Zyz {
    pub fn matrix(&self) -> Mat2<f64> {
        let rz = |a: f64| -> Mat2<f64> {
            [
                [Complex::from_polar(1.0, -a / 2.0), c(0.0, 0.0)],
                [c(0.0, 0.0), Complex::from_polar(1.0, a / 2.0)],
            ]
        };
        let (s, co) = (self.gamma / 2.0).sin_cos();
        let ry: Mat2<f64> = [[c(co, 0.0), c(-s, 0.0)], [c(s, 0.0), c(co, 0.0)]];
        let m = mat2_mul(&mat2_mul(&rz(self.beta), &ry), &rz(self.delta));
        let ph = Complex::from_polar(1.0, self.phase);
        [[m[0][0] * ph, m[0][1] * ph], [m[1][0] * ph, m[1][1] * ph]]
    }
}

/// Euler decomposition of a 2x2 unitary, exact including the global phase.
pub fn zyz_decompose(u: &Mat2<f64>) -> Zyz {
    let det = u[0][0] * u[1][1] - u[0][1] * u[1][0];
    let half = det.arg() / 2.0;
    let v = {
        let f = Complex::from_polar(1.0, -half);
        [[u[0][0] * f, u[0][1] * f], [u[1][0] * f, u[1][1] * f]]
    };
    let gamma = 2.0 * v[1][0].norm().atan2(v[0][0].norm());
    let sum = if v[1][1].norm() > 1e-14 {
        2.0 * v[1][1].arg()
    } else {
        0.0
    };
    let diff = if v[1][0].norm() > 1e-14 {
        2.0 * v[1][0].arg()
    } else {
        0.0
    };
    let beta = (sum + diff) / 2.0;
    let delta = (sum - diff) / 2.0;
    let mut out = Zyz {
        phase: 0.0,
        beta,
        gamma,
        delta,
    };
    let w = out.matrix();
    let mut overlap = Complex::new(0.0, 0.0);
    for i in 0..2 {
        for j in 0..2 {
            overlap += u[i][j] * w[i][j].conj();
        }
    }
    out.phase = overlap.arg();
    out
}

/// Square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix<T> {
    dim: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> CMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex::new(T::zero(), T::zero()); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = Complex::new(T::one(), T::zero());
        }
        m
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[Vec<Complex<T>>]) -> Self {
        let dim = columns.len();
        let mut m = Self::zeros(dim);
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), dim, "column length must match dimension");
            for (i, v) in col.iter().enumerate() {
                m.data[i * dim + j] = *v;
            }
        }
        m
    }

    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> Complex<T>) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m.data[i * dim + j] = f(i, j);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex<T> {
        self.data[row * self.dim + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, v: Complex<T>) {
        self.data[row * self.dim + col] = v;
    }

    pub fn column(&self, col: usize) -> Vec<Complex<T>> {
        (0..self.dim).map(|r| self.get(r, col)).collect()
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.norm_sqr() == T::zero() {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(j, i).conj())
    }

    pub fn kron(&self, other: &Self) -> Self {
        let (a, b) = (self.dim, other.dim);
        Self::from_fn(a * b, |i, j| self.get(i / b, j / b) * other.get(i % b, j % b))
    }

    /// Max-norm of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (*a - *b).norm().as_f64())
            .fold(0.0, f64::max)
    }

    /// Max-norm distance after removing the best-aligned global phase.
    pub fn distance_up_to_phase(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        let mut overlap = Complex::new(T::zero(), T::zero());
        for (a, b) in self.data.iter().zip(&other.data) {
            overlap += *a * b.conj();
        }
        if overlap.norm() == T::zero() {
            return self.max_abs_diff(other);
        }
        let phase = overlap / Complex::new(overlap.norm(), T::zero());
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (*a - *b * phase).norm().as_f64())
            .fold(0.0, f64::max)
    }

    /// Max-norm of `U^dagger U - I`.
    pub fn unitarity_defect(&self) -> f64 {
        self.adjoint().mul(self).max_abs_diff(&Self::identity(self.dim))
    }
}
