//! Trials of a compiled circuit under uniform circuit-level noise.

use qed_core::circuit::Circuit;
use qed_core::grover::{build_grover_bare, build_grover_encoded, GroverLayout, GroverSpec, BARE_REGISTER};
use qed_core::iceberg::{
    decode_shot, noisy_identity_circuit, CodeLayout, CodeParams, RejectionCause, SyndromeSchedule,
};
use qed_core::sim::{NoiseModel, ShotRecord};
use qed_core::stats::TrialOutcome;
use qed_core::Simulator;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::seed;

/// Noisy identity rounds in the identity benchmark.
pub const IDENTITY_STEPS: usize = 30;

/// How a shot is read out.
#[derive(Debug, Clone)]
pub enum Readout {
    /// Post-selected logical readout of a code block.
    Encoded(CodeLayout),
    /// Raw bits of a register, never post-selected.
    Bare { register: String },
}

/// A circuit and the outcome counted as correct: the first
/// `expected.len()` logical bits (or register bits) must equal `expected`.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub circuit: Circuit,
    pub readout: Readout,
    pub expected: Vec<u8>,
}

impl Experiment {
    pub fn new(circuit: Circuit, readout: Readout, expected: Vec<u8>) -> Result<Self> {
        let width = match &readout {
            Readout::Encoded(layout) => layout.k(),
            Readout::Bare { register } => {
                let idx = circuit
                    .register_index(register)
                    .ok_or_else(|| Error::usage(format!("circuit has no register `{register}`")))?;
                circuit.registers()[idx].size
            }
        };
        if expected.len() > width {
            return Err(Error::usage(format!(
                "expected outcome has {} bits but the readout has only {width}",
                expected.len()
            )));
        }
        Ok(Self {
            circuit,
            readout,
            expected,
        })
    }

    pub fn grover_encoded(spec: &GroverSpec, layout: GroverLayout, rounds: usize) -> Result<Self> {
        let enc = build_grover_encoded(spec, layout, SyndromeSchedule::Rounds(rounds))?;
        Self::new(enc.circuit, Readout::Encoded(enc.layout), spec.marked.clone())
    }

    pub fn grover_bare(spec: &GroverSpec, layout: GroverLayout) -> Result<Self> {
        let circuit = build_grover_bare(spec, layout)?;
        Self::new(
            circuit,
            Readout::Bare {
                register: BARE_REGISTER.into(),
            },
            spec.marked.clone(),
        )
    }

    /// The identity benchmark: a `[[6,4,2]]` block through
    /// [`IDENTITY_STEPS`] noisy identity rounds with `r` syndrome rounds
    /// after every `30/r` of them, or for `r = 0` four bare qubits through
    /// the same rounds. The correct outcome is all zeros.
    pub fn identity_bench(r: usize) -> Result<Self> {
        if r == 0 {
            let mut c = Circuit::new(4);
            c.add_register(BARE_REGISTER, 4)?;
            for _ in 0..IDENTITY_STEPS {
                for q in 0..4 {
                    c.id(q);
                }
            }
            for q in 0..4 {
                c.measure(q, BARE_REGISTER, q);
            }
            return Self::new(
                c,
                Readout::Bare {
                    register: BARE_REGISTER.into(),
                },
                vec![0; 4],
            );
        }
        if !IDENTITY_STEPS.is_multiple_of(r) {
            return Err(Error::usage(format!(
                "syndrome rounds r = {r} must divide {IDENTITY_STEPS} (allowed: 0, 1, 2, 3, 5, 6, 10, 15, 30)"
            )));
        }
        let every = IDENTITY_STEPS / r;
        let placement: Vec<usize> = (1..=r).map(|m| m * every).collect();
        let enc = noisy_identity_circuit(CodeParams::new(6)?, IDENTITY_STEPS, &placement)?;
        Self::new(enc.circuit, Readout::Encoded(enc.layout), vec![0; 4])
    }

    pub fn is_encoded(&self) -> bool {
        matches!(self.readout, Readout::Encoded(_))
    }
}

/// Outcome of one shot after readout.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShotResult {
    Correct,
    Wrong,
    Rejected(RejectionCause),
}

impl Experiment {
    pub fn judge(&self, record: &ShotRecord) -> Result<ShotResult> {
        let bits = match &self.readout {
            Readout::Encoded(layout) => {
                let d = decode_shot(record, layout)?;
                if let Some(cause) = d.rejection_cause {
                    return Ok(ShotResult::Rejected(cause));
                }
                d.logical_bits
            }
            Readout::Bare { register } => record
                .register(register)
                .ok_or_else(|| qed_core::Error::MissingRegister(register.clone()))?
                .to_vec(),
        };
        Ok(if bits[..self.expected.len()] == self.expected[..] {
            ShotResult::Correct
        } else {
            ShotResult::Wrong
        })
    }
}

/// Rejection counts in the order of [`RejectionCause::ALL`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Rejections(pub [u64; 5]);

impl Rejections {
    pub fn add(&mut self, cause: RejectionCause) {
        let i = RejectionCause::ALL
            .iter()
            .position(|c| *c == cause)
            .expect("listed cause");
        self.0[i] += 1;
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }
}

impl Serialize for Rejections {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(Some(5))?;
        for (cause, n) in RejectionCause::ALL.iter().zip(self.0) {
            m.serialize_entry(cause.name(), &n)?;
        }
        m.end()
    }
}

#[derive(Debug, Clone)]
pub struct TrialRun {
    pub outcomes: Vec<TrialOutcome>,
    pub rejections: Rejections,
}

/// `trials` independent trials of `shots` shots at uniform noise `p`. Trial
/// `t` draws its shots from [`seed::trial_seed`]`(point_seed, t)`, so a run
/// with more shots extends each trial of a run with fewer.
pub fn run_trials(exp: &Experiment, p: f64, shots: u64, trials: usize, point_seed: u64) -> Result<TrialRun> {
    if shots == 0 {
        return Err(Error::usage("shots must be at least 1"));
    }
    if trials == 0 {
        return Err(Error::usage("trials must be at least 1"));
    }
    let noise = NoiseModel::uniform(p)?;
    let sim: Simulator = Simulator::new(&exp.circuit, noise)?;
    let mut outcomes = Vec::with_capacity(trials);
    let mut rejections = Rejections::default();
    for t in 0..trials {
        let results = sim.run_shots_map(shots as usize, seed::trial_seed(point_seed, t), |r| exp.judge(&r));
        let mut outcome = TrialOutcome {
            shots,
            accepted: 0,
            correct: 0,
        };
        for r in results {
            match r? {
                ShotResult::Correct => {
                    outcome.accepted += 1;
                    outcome.correct += 1;
                }
                ShotResult::Wrong => outcome.accepted += 1,
                ShotResult::Rejected(cause) => rejections.add(cause),
            }
        }
        outcomes.push(outcome);
    }
    Ok(TrialRun { outcomes, rejections })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_bench_rejects_non_divisors() {
        assert!(Experiment::identity_bench(4).is_err());
        assert!(Experiment::identity_bench(7).is_err());
        for r in [0, 1, 2, 3, 5, 6, 10, 15, 30] {
            assert!(Experiment::identity_bench(r).is_ok(), "r={r}");
        }
    }

    #[test]
    fn noiseless_identity_is_always_correct() {
        for r in [0, 1, 30] {
            let run = run_trials(&Experiment::identity_bench(r).unwrap(), 0.0, 50, 2, 3).unwrap();
            assert!(run.outcomes.iter().all(|o| o.correct == 50 && o.accepted == 50));
        }
    }

    #[test]
    fn bare_runs_accept_everything() {
        let spec = GroverSpec::new(2, 1).unwrap();
        let run = run_trials(
            &Experiment::grover_bare(&spec, GroverLayout::Compact).unwrap(),
            0.05,
            200,
            2,
            9,
        )
        .unwrap();
        assert!(run.outcomes.iter().all(|o| o.accepted == 200));
        assert_eq!(run.rejections.total(), 0);
    }

    #[test]
    fn more_shots_extend_the_same_trials() {
        let spec = GroverSpec::new(2, 1).unwrap();
        let exp = Experiment::grover_encoded(&spec, GroverLayout::Compact, 1).unwrap();
        let few = run_trials(&exp, 0.01, 100, 1, 5).unwrap();
        let sim: Simulator = Simulator::new(&exp.circuit, NoiseModel::uniform(0.01).unwrap()).unwrap();
        let first: Vec<_> = sim
            .run_shots_map(300, seed::trial_seed(5, 0), |r| exp.judge(&r).unwrap())
            .into_iter()
            .take(100)
            .collect();
        let correct = first.iter().filter(|r| **r == ShotResult::Correct).count() as u64;
        assert_eq!(few.outcomes[0].correct, correct);
    }
}
