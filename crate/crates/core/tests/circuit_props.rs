mod common;

use common::{any_circuit, unitary_circuit};
use proptest::prelude::*;
use qed_core::circuit::{count_gates, depth, json, unitary_of, Circuit};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn json_round_trip(c in any_circuit()) {
        let text = json::serialize(&c);
        prop_assert_eq!(json::parse(&text).unwrap(), c);
    }

    #[test]
    fn disjoint_depth_is_max(a in unitary_circuit(3, 20), b in unitary_circuit(3, 20)) {
        let n = a.num_qubits() + b.num_qubits();
        let mut both = a.relabeled(&(0..a.num_qubits()).collect::<Vec<_>>(), n).unwrap();
        let shifted: Vec<usize> = (a.num_qubits()..n).collect();
        both.append(&b.relabeled(&shifted, n).unwrap()).unwrap();
        prop_assert_eq!(depth(&both), depth(&a).max(depth(&b)));
    }

    #[test]
    fn unitary_of_composition(a in unitary_circuit(4, 15), tail in prop::collection::vec(common::unitary_op(4), 0..15)) {
        let mut b = Circuit::new(a.num_qubits());
        for op in tail {
            let (k, x, y, t) = op;
            common::push_unitary(&mut b, (k, x % a.num_qubits(), y % a.num_qubits(), t));
        }
        let mut ab = a.clone();
        ab.append(&b).unwrap();
        let composed = unitary_of(&b).unwrap().mul(&unitary_of(&a).unwrap());
        prop_assert!(unitary_of(&ab).unwrap().max_abs_diff(&composed) < 1e-10);
    }

    #[test]
    fn counts_survive_relabeling(c in unitary_circuit(5, 30), seed in any::<u64>()) {
        let n = c.num_qubits();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        let moved = c.relabeled(&perm, n).unwrap();
        prop_assert_eq!(count_gates(&moved).unwrap(), count_gates(&c).unwrap());
        prop_assert_eq!(depth(&moved), depth(&c));
    }
}
