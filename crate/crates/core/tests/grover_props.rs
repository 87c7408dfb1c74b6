use qed_core::grover::{
    build_grover_bare, build_grover_encoded, grover_reference_resources, ideal_success, measured_resources,
    optimal_iterations, GroverLayout, GroverSpec, BARE_REGISTER,
};
use qed_core::iceberg::{decode_shot, SyndromeSchedule};
use qed_core::sim::NoiseModel;
use qed_core::Simulator;

fn value(bits: &[u8], width: usize) -> u64 {
    bits[..width]
        .iter()
        .enumerate()
        .fold(0, |acc, (i, &b)| acc | (u64::from(b) << i))
}

/// Marked-state count and shot count of a noiseless bare run.
fn bare_hits(spec: &GroverSpec, layout: GroverLayout, shots: usize, seed: u64) -> usize {
    let sim = Simulator::new(&build_grover_bare(spec, layout).unwrap(), NoiseModel::noiseless()).unwrap();
    let target = spec.marked_value();
    sim.run_shots_map(shots, seed, |r| {
        value(r.register(BARE_REGISTER).unwrap(), spec.s) == target
    })
    .into_iter()
    .filter(|&hit| hit)
    .count()
}

/// Marked-state count and accepted count of a noiseless encoded run.
fn encoded_hits(spec: &GroverSpec, layout: GroverLayout, rounds: usize, shots: usize, seed: u64) -> (usize, usize) {
    let enc = build_grover_encoded(spec, layout, SyndromeSchedule::Rounds(rounds)).unwrap();
    let sim = Simulator::new(&enc.circuit, NoiseModel::noiseless()).unwrap();
    let target = spec.marked_value();
    let decoded = sim.run_shots_map(shots, seed, |r| decode_shot(&r, &enc.layout).unwrap());
    let accepted = decoded.iter().filter(|d| d.accepted).count();
    let hits = decoded
        .iter()
        .filter(|d| d.accepted && value(&d.logical_bits, spec.s) == target)
        .count();
    (hits, accepted)
}

fn assert_binomial(hits: usize, shots: usize, p: f64, what: &str) {
    let f = hits as f64 / shots as f64;
    let sigma = (p * (1.0 - p) / shots as f64).sqrt();
    assert!((f - p).abs() <= 3.0 * sigma + 1e-12, "{what}: {f} vs {p} (σ = {sigma})");
}

#[test]
fn floor_rule_is_within_one_iteration_of_best() {
    // Beyond M/N = 1/4 one iteration already overshoots and the rotation
    // wraps, so only the small-fraction regime is swept.
    for bits in 2..=12 {
        let n = 1u64 << bits;
        for m in 1..=(n / 4).min(7) {
            let opt = optimal_iterations(n, m).unwrap();
            let p = |j| ideal_success(n, m, j).unwrap();
            for j in 0..opt {
                assert!(p(j) <= p(j + 1) + 1e-12, "N={n} M={m}: not rising at j={j}");
            }
            let best = (0..=opt + 2).fold(0, |b, j| if p(j) > p(b) + 1e-12 { j } else { b });
            assert!(
                best == opt || best == opt + 1,
                "N={n} M={m}: floor gives {opt}, best is {best}"
            );
        }
    }
}

#[test]
fn floor_rule_can_stop_one_iteration_early() {
    // ⌊π/4·√8 − 1/2⌋ = 1, yet a second iteration raises the success.
    assert_eq!(optimal_iterations(8, 1).unwrap(), 1);
    assert!(ideal_success(8, 1, 2).unwrap() > ideal_success(8, 1, 1).unwrap());
}

#[test]
fn noiseless_bare_search_matches_ideal() {
    let shots = 100_000;
    for s in [2, 4] {
        for d in 1..=3 {
            let spec = GroverSpec::new(s, d).unwrap();
            let hits = bare_hits(&spec, GroverLayout::Compact, shots, 17);
            assert_binomial(hits, shots, spec.ideal_success(), &format!("bare s={s} d={d}"));
        }
    }
}

#[test]
fn noiseless_encoded_search_matches_ideal() {
    let shots = 100_000;
    for s in [2, 4] {
        for d in 1..=3 {
            let spec = GroverSpec::new(s, d).unwrap();
            let (hits, accepted) = encoded_hits(&spec, GroverLayout::Compact, 2, shots, 23);
            assert_eq!(accepted, shots, "s={s} d={d}: noiseless shots must all be accepted");
            assert_binomial(hits, shots, spec.ideal_success(), &format!("encoded s={s} d={d}"));
        }
    }
}

#[test]
fn success_does_not_depend_on_the_marked_state() {
    let shots = 20_000;
    for layout in [GroverLayout::Compact, GroverLayout::Dedicated] {
        for m in 0..8u8 {
            let spec = GroverSpec::with_marked(3, 1, (0..3).map(|i| m >> i & 1).collect()).unwrap();
            let hits = bare_hits(&spec, layout, shots, 31 + u64::from(m));
            assert_binomial(hits, shots, spec.ideal_success(), &format!("{layout:?} marked={m}"));
            let (hits, accepted) = encoded_hits(&spec, layout, 1, shots / 4, 37 + u64::from(m));
            assert_eq!(accepted, shots / 4);
            assert_binomial(
                hits,
                shots / 4,
                spec.ideal_success(),
                &format!("{layout:?} encoded marked={m}"),
            );
        }
    }
}

#[test]
fn reference_qubits_and_measurements_match_built_circuits() {
    // The reference closed forms go negative below k = 4.
    for s in [4, 6, 8] {
        for d in 1..=2 {
            let spec = GroverSpec::new(s, d).unwrap();
            let enc = build_grover_encoded(&spec, GroverLayout::Dedicated, SyndromeSchedule::Rounds(0)).unwrap();
            let measured = measured_resources(&enc.circuit).unwrap();
            let reference = grover_reference_resources(s as u64, d as u64).unwrap();
            assert_eq!(
                (measured.qubits, measured.measurements),
                (reference.qubits, reference.measurements),
                "s={s} d={d}"
            );
        }
    }
}
