use std::sync::Arc;

use qed_core::circuit::Circuit;
use qed_core::iceberg::{
    decode_shot, encode, encode_ops, inject_single_faults, CodeParams, EncodeOptions, LogicalGate, RejectionCause,
    SyndromeSchedule,
};
use qed_core::sim::{exact_outcomes, ShotRecord};

fn memory(n: usize, rounds: usize, ops: &[LogicalGate]) -> qed_core::iceberg::Encoded {
    let code = CodeParams::new(n).unwrap();
    let at = (0..rounds).map(|_| ops.len()).collect::<Vec<_>>();
    let schedule = if rounds <= 1 {
        SyndromeSchedule::At(at)
    } else {
        SyndromeSchedule::Rounds(rounds)
    };
    encode_ops(ops, code, &schedule, true).unwrap()
}

/// All branches of a noiseless run, decoded.
fn decoded(e: &qed_core::iceberg::Encoded) -> Vec<(f64, qed_core::iceberg::DecodedShot)> {
    let (regs, branches) = exact_outcomes(&e.circuit).unwrap();
    let regs = Arc::new(regs);
    branches
        .into_iter()
        .map(|b| {
            (
                b.probability,
                decode_shot(&ShotRecord::new(regs.clone(), b.bits).unwrap(), &e.layout).unwrap(),
            )
        })
        .collect()
}

#[test]
fn single_faults_never_pass_undetected_in_memory() {
    for n in [4, 6] {
        let e = memory(n, 1, &[]);
        let r = inject_single_faults(&e.circuit, &e.layout, &vec![0; n - 2], false).unwrap();
        assert!(r.sites > 0);
        assert!(r.undetected.is_empty(), "n={n}: {:?}", r.undetected);
    }
}

#[test]
fn correlated_gate_faults_are_also_caught() {
    let e = memory(6, 1, &[]);
    let r = inject_single_faults(&e.circuit, &e.layout, &[0; 4], true).unwrap();
    assert!(r.undetected.is_empty(), "{:?}", r.undetected);
}

#[test]
fn faults_are_caught_around_single_qubit_logical_gates() {
    let ops = [
        LogicalGate::X(1),
        LogicalGate::S(3),
        LogicalGate::AllH,
        LogicalGate::Z(2),
        LogicalGate::AllH,
        LogicalGate::Z(3),
    ];
    let e = memory(6, 2, &ops);
    let r = inject_single_faults(&e.circuit, &e.layout, &[0, 1, 1, 0], false).unwrap();
    assert!(r.undetected.is_empty(), "{:?}", r.undetected);
}

/// A fault between the CX gates of the logical CNOT spreads to two data
/// qubits, and some weight-two data errors are logical operators.
#[test]
fn logical_cnot_can_spread_a_single_fault() {
    let e = memory(6, 0, &[LogicalGate::CX(1, 3)]);
    let r = inject_single_faults(&e.circuit, &e.layout, &[0; 4], false).unwrap();
    assert!(!r.undetected.is_empty());
}

#[test]
fn noiseless_memory_is_always_accepted_with_zero_bits() {
    for n in [4, 6, 8] {
        for (p, d) in decoded(&memory(n, 3, &[])) {
            assert!(p > 0.0);
            assert!(d.accepted);
            assert!(d.logical_bits.iter().all(|&b| b == 0));
        }
    }
}

#[test]
fn logical_x_on_qubit_two_reads_0010() {
    let mut c = Circuit::new(4);
    c.x(2);
    let e = encode(&c, &EncodeOptions::with_rounds(1)).unwrap();
    for (_, d) in decoded(&e) {
        assert!(d.accepted);
        assert_eq!(d.logical_bits, vec![0, 0, 1, 0]);
    }
}

#[test]
fn logical_circuit_distribution_survives_encoding() {
    let mut c = Circuit::new(3);
    c.h(0).cx(0, 1).rx(0.3, 2).cz(1, 2).h(2).t(0).h(0);
    let want = {
        let sv = qed_core::circuit::unitary_of(&c).unwrap();
        (0..8).map(|x| sv.get(x, 0).norm_sqr()).collect::<Vec<_>>()
    };
    for r in [0, 1, 3] {
        let e = encode(&c, &EncodeOptions::with_rounds(r)).unwrap();
        let mut got = [0.0; 8];
        for (p, d) in decoded(&e) {
            assert!(d.accepted);
            got[(d.value() & 7) as usize] += p;
            assert_eq!(d.logical_bits[3], 0, "idle padding qubit stays zero");
        }
        for x in 0..8 {
            assert!(
                (got[x] - want[x]).abs() < 1e-9,
                "r={r} x={x}: {} vs {}",
                got[x],
                want[x]
            );
        }
    }
}

#[test]
fn odd_parity_is_a_z_parity_rejection() {
    let e = memory(4, 0, &[]);
    let mut bits = vec![0u8; 4];
    bits[0] = 1;
    let rec = ShotRecord::from_registers(&[
        ("prep_flag", vec![0]),
        ("syn_z", vec![]),
        ("syn_x", vec![]),
        ("final_x", vec![0]),
        ("final_flag", vec![0]),
        ("data", bits),
    ]);
    assert_eq!(
        decode_shot(&rec, &e.layout).unwrap().rejection_cause,
        Some(RejectionCause::ZParity)
    );
}
