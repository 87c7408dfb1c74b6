//! Fault-tolerant state preparation, syndrome extraction and destructive
//! readout.

use super::{CodeLayout, DATA, FINAL_FLAG, FINAL_X, PREP_FLAG, SYNDROME_X, SYNDROME_Z};
use crate::circuit::Circuit;
use crate::error::{Error, Result};

/// GHZ preparation of the data block with one flag check of the chain ends.
pub(crate) fn emit_prepare_zero(c: &mut Circuit, l: &CodeLayout) {
    let q = &l.data;
    let a0 = l.ancillas[0];
    c.h(q[0]);
    for i in 1..q.len() {
        c.cx(q[i - 1], q[i]);
    }
    c.cx(q[0], a0).cx(q[q.len() - 1], a0);
    c.measure(a0, PREP_FLAG, 0).reset(a0);
}

/// Measures `Z⊗n` onto ancilla 0 and `X⊗n` onto ancilla 1 with interleaved
/// couplings, `2n` CX in total.
pub(crate) fn emit_syndrome_measure(c: &mut Circuit, l: &CodeLayout, round: usize) {
    let q = &l.data;
    let n = q.len();
    let (a0, a1) = (l.ancillas[0], l.ancillas[1]);
    c.h(a1);
    c.cx(a1, q[0]).cx(q[0], a0).cx(q[1], a0).cx(a1, q[1]);
    for i in (2..n - 2).step_by(2) {
        c.cx(a1, q[i]).cx(q[i], a0).cx(a1, q[i + 1]).cx(q[i + 1], a0);
    }
    c.cx(a1, q[n - 2]).cx(q[n - 2], a0).cx(q[n - 1], a0).cx(a1, q[n - 1]);
    c.h(a1);
    c.measure(a0, SYNDROME_Z, round).measure(a1, SYNDROME_X, round);
    c.reset(a0).reset(a1);
}

/// Final `X⊗n` check with a flag on the syndrome ancilla, then Z-basis
/// readout of every data qubit.
pub(crate) fn emit_destructive_measure(c: &mut Circuit, l: &CodeLayout) {
    let q = &l.data;
    let n = q.len();
    let (a0, a1) = (l.ancillas[0], l.ancillas[1]);
    c.h(a0);
    c.cx(a0, q[n - 1]).cx(a0, a1);
    for &qi in &q[1..n - 1] {
        c.cx(a0, qi);
    }
    c.cx(a0, a1).cx(a0, q[0]);
    c.h(a0);
    for (j, &qj) in q.iter().enumerate() {
        c.measure(qj, DATA, j);
    }
    c.measure(a0, FINAL_X, 0).measure(a1, FINAL_FLAG, 0);
}

pub fn prepare_zero(layout: &CodeLayout) -> Result<Circuit> {
    layout.validate()?;
    let mut c = layout.empty_circuit();
    emit_prepare_zero(&mut c, layout);
    Ok(c)
}

pub fn syndrome_measure(layout: &CodeLayout, round: usize) -> Result<Circuit> {
    layout.validate()?;
    if round >= layout.rounds {
        return Err(Error::Schedule(format!(
            "round {round} outside the {} rounds declared by the layout",
            layout.rounds
        )));
    }
    let mut c = layout.empty_circuit();
    emit_syndrome_measure(&mut c, layout, round);
    Ok(c)
}

pub fn destructive_measure(layout: &CodeLayout) -> Result<Circuit> {
    layout.validate()?;
    let mut c = layout.empty_circuit();
    emit_destructive_measure(&mut c, layout);
    Ok(c)
}
