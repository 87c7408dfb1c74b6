//! Random circuit generation shared by the property tests.

#![allow(dead_code)]

use proptest::prelude::*;
use qed_core::circuit::Circuit;

/// Unitary gate kinds with an angle and two qubit picks.
pub fn unitary_op(n: usize) -> impl Strategy<Value = (u8, usize, usize, f64)> {
    (0u8..16, 0..n, 0..n, -2.0..2.0f64)
}

pub fn push_unitary(c: &mut Circuit, (kind, a, b, theta): (u8, usize, usize, f64)) {
    let n = c.num_qubits();
    let b = if n > 1 && a == b { (a + 1) % n } else { b };
    let two = n > 1;
    match kind {
        0 => c.x(a),
        1 => c.y(a),
        2 => c.z(a),
        3 => c.h(a),
        4 => c.s(a),
        5 => c.sdg(a),
        6 => c.rx(theta, a),
        7 => c.rz(theta, a),
        8 => c.u(theta, 0.5 * theta, -theta, a),
        9 => c.id(a),
        10 if two => c.cx(a, b),
        11 if two => c.cz(a, b),
        12 if two => c.swap(a, b),
        13 if two => c.rzz(theta, a, b),
        14 if two => c.rxx(theta, a, b),
        _ => c.t(a),
    };
}

pub fn unitary_circuit(max_qubits: usize, max_len: usize) -> impl Strategy<Value = Circuit> {
    (1..=max_qubits).prop_flat_map(move |n| {
        prop::collection::vec(unitary_op(n), 0..max_len).prop_map(move |ops| {
            let mut c = Circuit::new(n);
            for op in ops {
                push_unitary(&mut c, op);
            }
            c
        })
    })
}

/// Circuits with every instruction kind, including measurement, reset,
/// barriers and multi-controlled X.
pub fn any_circuit() -> impl Strategy<Value = Circuit> {
    (3usize..=6).prop_flat_map(|n| {
        prop::collection::vec((0u8..5, unitary_op(n)), 0..30).prop_map(move |ops| {
            let mut c = Circuit::new(n);
            c.add_register("m", n).unwrap();
            for (extra, op) in ops {
                let (_, a, b, _) = op;
                match extra {
                    0 => {
                        c.measure(a, "m", b);
                    }
                    1 => {
                        c.reset(a);
                    }
                    2 => {
                        c.barrier(&[a]);
                    }
                    3 => {
                        let t = (a + 1) % n;
                        let borrowed = (a + 2) % n;
                        c.mcx(&[a], t, (b % 2 == 0).then_some(borrowed));
                    }
                    _ => push_unitary(&mut c, op),
                }
            }
            c
        })
    })
}
