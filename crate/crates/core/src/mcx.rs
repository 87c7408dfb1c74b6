//! Multi-controlled X synthesis.
//!
//! With a borrowed qubit `b`, `C^cX` for `c ≥ 4` is split into two
//! multi-controlled gates that share one control:
//! `A = C^{m1}X(first m1 controls → b)` and
//! `B = C^{m2}X(last m2 − 1 controls, b → t)` with `m1 = ⌈(c+2)/2⌉`,
//! `m2 = ⌊(c+2)/2⌋`, applied as `A B A B`. Each half is a dirty-ancilla
//! ladder that borrows the qubits the other half does not use, so the
//! whole construction needs only `b` and costs `16c + 8` CX.
//!
//! Up to three controls need no helper at all: CX, the 6-CX Toffoli and
//! the 14-CX Gray-code `C³X`. Beyond that, [`emit_mcx_no_ancilla`] falls
//! back to the recursive square-root construction, quadratic in `c`.

use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::linalg::{zyz_decompose, Mat2};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct McxSpec {
    pub controls: Vec<usize>,
    pub target: usize,
    pub borrowed: usize,
}

impl McxSpec {
    pub fn new(controls: Vec<usize>, target: usize, borrowed: usize) -> Result<Self> {
        let spec = Self {
            controls,
            target,
            borrowed,
        };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<()> {
        if self.controls.is_empty() {
            return Err(Error::domain("mcx needs at least one control"));
        }
        let mut all = self.controls.clone();
        all.push(self.target);
        all.push(self.borrowed);
        let mut sorted = all.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != all.len() {
            return Err(Error::domain("mcx qubits overlap"));
        }
        Ok(())
    }

    fn max_qubit(&self) -> usize {
        self.controls
            .iter()
            .copied()
            .chain([self.target, self.borrowed])
            .max()
            .unwrap_or(0)
    }
}

/// Toffoli with six CX, exact.
pub fn emit_ccx(circ: &mut Circuit, c0: usize, c1: usize, t: usize) {
    circ.h(t).cx(c1, t).tdg(t).cx(c0, t).t(t).cx(c1, t).tdg(t).cx(c0, t);
    circ.t(c1).t(t).h(t).cx(c0, c1).t(c0).tdg(c1).cx(c0, c1);
}

/// `C³X` without ancilla: the `C³Z` phase polynomial walked in Gray-code
/// order, fourteen CX.
pub fn emit_c3x(circ: &mut Circuit, a: usize, b: usize, c: usize, d: usize) {
    let e = 0.125;
    circ.h(d).rz(e, a).rz(e, b).rz(e, c).rz(e, d);
    circ.cx(a, b).rz(-e, b).cx(a, b);
    circ.cx(b, c).rz(-e, c).cx(a, c).rz(e, c).cx(b, c).rz(-e, c).cx(a, c);
    circ.cx(c, d).rz(-e, d).cx(b, d).rz(e, d).cx(c, d).rz(-e, d).cx(a, d);
    circ.rz(e, d)
        .cx(c, d)
        .rz(-e, d)
        .cx(b, d)
        .rz(e, d)
        .cx(c, d)
        .rz(-e, d)
        .cx(a, d);
    circ.h(d);
}

/// Toffoli up to a diagonal relative phase, three CX. Self-inverse.
fn emit_rccx(circ: &mut Circuit, c0: usize, c1: usize, t: usize) {
    circ.h(t).t(t).cx(c1, t).tdg(t).cx(c0, t).t(t).cx(c1, t).tdg(t).h(t);
}

fn action(circ: &mut Circuit, q0: usize, q1: usize, q2: usize) {
    circ.h(q2).t(q2).cx(q0, q2).tdg(q2).cx(q1, q2);
}

fn reset(circ: &mut Circuit, q0: usize, q1: usize, q2: usize) {
    circ.cx(q1, q2).t(q2).cx(q0, q2).tdg(q2).h(q2);
}

/// `C^mX` using `m − 2` dirty ancillas, `8m − 6` CX for `m ≥ 3`.
fn emit_mcx_dirty(circ: &mut Circuit, controls: &[usize], target: usize, dirty: &[usize]) {
    let m = controls.len();
    match m {
        1 => {
            circ.cx(controls[0], target);
        }
        2 => emit_ccx(circ, controls[0], controls[1], target),
        _ => {
            let anc = &dirty[..m - 2];
            for _ in 0..2 {
                emit_ccx(circ, controls[m - 1], anc[m - 3], target);
                for i in (0..m - 3).rev() {
                    action(circ, controls[i + 2], anc[i], anc[i + 1]);
                }
                emit_rccx(circ, controls[0], controls[1], anc[0]);
                for i in 0..m - 3 {
                    reset(circ, controls[i + 2], anc[i], anc[i + 1]);
                }
            }
        }
    }
}

/// Appends `C^cX(controls → target)` that works for any state of the
/// borrowed qubit and leaves it unchanged.
pub fn emit_mcx(circ: &mut Circuit, spec: &McxSpec) -> Result<()> {
    spec.validate()?;
    if spec.max_qubit() >= circ.num_qubits() {
        return Err(Error::invalid("mcx qubit outside the circuit"));
    }
    let (ctl, t, b) = (&spec.controls[..], spec.target, spec.borrowed);
    let c = ctl.len();
    if c == 3 {
        emit_c3x(circ, ctl[0], ctl[1], ctl[2], t);
        return Ok(());
    }
    if c < 3 {
        emit_mcx_dirty(circ, ctl, t, &[b]);
        return Ok(());
    }
    let m1 = (c + 3) / 2;
    let m2 = (c + 2) / 2;
    let s1: Vec<usize> = ctl[..m1].to_vec();
    let mut s2: Vec<usize> = ctl[c - (m2 - 1)..].to_vec();
    s2.push(b);
    let dirty1: Vec<usize> = ctl[m1..].iter().copied().chain([t]).collect();
    let dirty2: Vec<usize> = ctl[..c - (m2 - 1)].to_vec();
    debug_assert!(dirty1.len() + 2 >= m1 && dirty2.len() + 2 >= m2);
    let mut all = ctl.to_vec();
    all.extend([t, b]);
    for _ in 0..2 {
        emit_mcx_dirty(circ, &s1, b, &dirty1);
        circ.barrier(&all);
        emit_mcx_dirty(circ, &s2, t, &dirty2);
        circ.barrier(&all);
    }
    Ok(())
}

/// Fragment holding just the synthesized gate, sized to its largest qubit.
pub fn synth_mcx(spec: &McxSpec) -> Result<Circuit> {
    spec.validate()?;
    let mut circ = Circuit::new(spec.max_qubit() + 1);
    emit_mcx(&mut circ, spec)?;
    Ok(circ)
}

/// `C^cX` without any helper qubit.
pub fn emit_mcx_no_ancilla(circ: &mut Circuit, controls: &[usize], target: usize) -> Result<()> {
    if controls.is_empty() {
        return Err(Error::domain("mcx needs at least one control"));
    }
    if controls.contains(&target) {
        return Err(Error::domain("mcx qubits overlap"));
    }
    match controls.len() {
        1 => {
            circ.cx(controls[0], target);
        }
        2 => emit_ccx(circ, controls[0], controls[1], target),
        3 => emit_c3x(circ, controls[0], controls[1], controls[2], target),
        _ => {
            let x = Gate::X.matrix1().expect("X has a matrix");
            emit_multi_controlled_u(circ, controls, target, &x)?;
        }
    }
    Ok(())
}

fn adjoint(m: &Mat2<f64>) -> Mat2<f64> {
    [[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]]
}

/// Principal square root of a 2x2 unitary.
fn sqrt_unitary(w: &Mat2<f64>) -> Mat2<f64> {
    let det = w[0][0] * w[1][1] - w[0][1] * w[1][0];
    let tr = w[0][0] + w[1][1];
    let s = det.sqrt();
    let s = if (tr + s * 2.0).norm() >= (tr - s * 2.0).norm() {
        s
    } else {
        -s
    };
    let t = (tr + s * 2.0).sqrt();
    [[(w[0][0] + s) / t, w[0][1] / t], [w[1][0] / t, (w[1][1] + s) / t]]
}

/// Exact controlled-`w`, including the phase of `w`.
pub fn emit_controlled_u(circ: &mut Circuit, control: usize, target: usize, w: &Mat2<f64>) {
    let pi = std::f64::consts::PI;
    let e = zyz_decompose(w);
    // A·X·B·X·C = e^{-i phase} w and A·B·C = I.
    circ.rz((e.delta - e.beta) / 2.0 / pi, target);
    circ.cx(control, target);
    circ.u(-e.gamma / 2.0 / pi, 0.0, -(e.delta + e.beta) / 2.0 / pi, target);
    circ.cx(control, target);
    circ.u(e.gamma / 2.0 / pi, e.beta / pi, 0.0, target);
    circ.rz(e.phase / pi, control);
}

fn emit_multi_controlled_u(circ: &mut Circuit, controls: &[usize], target: usize, w: &Mat2<f64>) -> Result<()> {
    let (last, rest) = controls.split_last().expect("at least one control");
    if rest.is_empty() {
        emit_controlled_u(circ, *last, target, w);
        return Ok(());
    }
    let v = sqrt_unitary(w);
    let vd = adjoint(&v);
    emit_controlled_u(circ, *last, target, &v);
    let inner = McxSpec::new(rest.to_vec(), *last, target)?;
    emit_mcx(circ, &inner)?;
    emit_controlled_u(circ, *last, target, &vd);
    emit_mcx(circ, &inner)?;
    emit_multi_controlled_u(circ, rest, target, &v)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct McxCounts {
    pub u: i64,
    pub cx: i64,
    pub depth: i64,
}

fn require_three(c: usize) -> Result<i64> {
    if c < 3 {
        return Err(Error::domain(format!(
            "reference counts are defined for c >= 3, got {c}"
        )));
    }
    Ok(c as i64)
}

/// Published linear-depth counts: `U = 16c − 18`, `CX = 16c − 24`,
/// `depth = 32c − 83`.
pub fn mcx_reference_counts(c: usize) -> Result<McxCounts> {
    let c = require_three(c)?;
    Ok(McxCounts {
        u: 16 * c - 18,
        cx: 16 * c - 24,
        depth: 32 * c - 83,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CompiledMcxCounts {
    pub cx: i64,
    pub depth: f64,
}

/// Asymptotic compiled/uncompiled CX ratio.
pub const COMPILED_CX_RATIO: f64 = 2.0;
/// Asymptotic compiled/uncompiled depth ratio.
pub const COMPILED_DEPTH_RATIO: f64 = 1.703125;

/// Counts of the fault-tolerantly compiled gate:
/// `CX = 32c − 44 − (−1)^c`, `depth = (−5(31 + (−1)^c) + 218c)/4`.
pub fn compiled_mcx_reference_counts(c: usize) -> Result<CompiledMcxCounts> {
    let c = require_three(c)?;
    let sign = if c % 2 == 0 { 1 } else { -1 };
    Ok(CompiledMcxCounts {
        cx: 32 * c - 44 - sign,
        depth: (-5.0 * (31 + sign) as f64 + 218.0 * c as f64) / 4.0,
    })
}
