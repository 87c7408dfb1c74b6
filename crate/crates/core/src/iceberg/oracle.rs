//! Codespace oracle: the action of a physical fragment on the span of the
//! encoded computational basis states.

use num_complex::Complex;

use super::logical::{emit_logical, LogicalGate};
use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::sim::StateVector;

/// Encoded `|x⟩` for every `x < 2^k`, with logical qubit `i` as bit `i` of
/// `x`. Each state is the GHZ state with `X̄_i` applied for every set bit.
pub fn codespace_basis(n: usize) -> Result<Vec<StateVector<f64>>> {
    if n < 4 || !n.is_multiple_of(2) {
        return Err(Error::domain("code length must be even and at least 4"));
    }
    let k = n - 2;
    let mut ghz = Circuit::new(n);
    ghz.h(0);
    for i in 1..n {
        ghz.cx(i - 1, i);
    }
    (0..1usize << k)
        .map(|x| {
            let mut s = StateVector::<f64>::zero(n)?;
            for inst in ghz.instructions() {
                let qs: Vec<usize> = inst.qubits.iter().map(|q| q.0).collect();
                s.apply_gate(&inst.gate, &qs)?;
            }
            let mut perm = (0..n).collect::<Vec<_>>();
            let mut c = Circuit::new(n);
            for i in 0..k {
                if x >> i & 1 == 1 {
                    emit_logical(&mut c, &LogicalGate::X(i), &mut perm, false)?;
                }
            }
            for inst in c.instructions() {
                s.apply_gate(&inst.gate, &[inst.qubit(0)])?;
            }
            Ok(s)
        })
        .collect()
}

fn inner(a: &[Complex<f64>], b: &[Complex<f64>]) -> Complex<f64> {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Moves amplitudes so that bit `perm[j]` of the source index becomes bit
/// `j` of the result.
fn unpermute(amps: &[Complex<f64>], perm: &[usize]) -> Vec<Complex<f64>> {
    let mut out = vec![Complex::new(0.0, 0.0); amps.len()];
    for (src, a) in amps.iter().enumerate() {
        let mut dst = 0;
        for (j, &pj) in perm.iter().enumerate() {
            dst |= (src >> pj & 1) << j;
        }
        out[dst] = *a;
    }
    out
}

/// Logical matrix `⟨x̄|U|ȳ⟩` of a measurement-free fragment on the data
/// qubits, together with the largest probability any encoded basis state
/// leaks out of the codespace. `final_perm` gives the physical qubit that
/// holds each code position after the fragment.
pub fn logical_action(fragment: &Circuit, final_perm: Option<&[usize]>) -> Result<(CMatrix<f64>, f64)> {
    let n = fragment.num_qubits();
    let basis = codespace_basis(n)?;
    let dim = basis.len();
    let mut m = CMatrix::zeros(dim);
    let mut leak: f64 = 0.0;
    for (j, b) in basis.iter().enumerate() {
        let mut s = b.clone();
        for inst in fragment.instructions() {
            let qs: Vec<usize> = inst.qubits.iter().map(|q| q.0).collect();
            s.apply_gate(&inst.gate, &qs)?;
        }
        let out = match final_perm {
            Some(p) => unpermute(s.amplitudes(), p),
            None => s.amplitudes().to_vec(),
        };
        let mut kept = 0.0;
        for (i, bi) in basis.iter().enumerate() {
            let v = inner(bi.amplitudes(), &out);
            kept += v.norm_sqr();
            m.set(i, j, v);
        }
        leak = leak.max(1.0 - kept);
    }
    Ok((m, leak))
}
