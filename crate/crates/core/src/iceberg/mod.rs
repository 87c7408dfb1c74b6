//! The `[[n, n−2, 2]]` iceberg code: stabilizers `X⊗n` and `Z⊗n`, logical
//! zero the GHZ state, `X̄_i = X_0 X_{i+1}` and `Z̄_i = Z_{i+1} Z_{n−1}`.

mod decode;
mod encode;
mod faults;
mod gadgets;
mod logical;
pub mod oracle;
mod transpile;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::circuit::Circuit;
use crate::error::{Error, Result};

pub use decode::{decode_shot, DecodedShot, RejectionCause};
pub use encode::{encode, encode_ops, noisy_identity_circuit, parse_encoded, EncodeOptions, Encoded, SyndromeSchedule};
pub use faults::{inject_single_faults, single_fault_sites, with_fault, FaultSite, InjectionReport};
pub use gadgets::{destructive_measure, prepare_zero, syndrome_measure};
pub use logical::{logical_pauli, synth_logical_gate, LogicalGate, PauliType};
pub use transpile::{squash_1q, transpile_to_native, TranspileOptions};

pub const PREP_FLAG: &str = "prep_flag";
pub const SYNDROME_Z: &str = "syn_z";
pub const SYNDROME_X: &str = "syn_x";
pub const FINAL_X: &str = "final_x";
pub const FINAL_FLAG: &str = "final_flag";
pub const DATA: &str = "data";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeParams {
    pub n: usize,
}

impl CodeParams {
    pub fn new(n: usize) -> Result<Self> {
        if n < 4 || !n.is_multiple_of(2) {
            return Err(Error::domain(format!(
                "code length must be even and at least 4, got {n}"
            )));
        }
        Ok(Self { n })
    }

    /// Smallest code holding `logical` qubits.
    pub fn for_logical(logical: usize) -> Self {
        let k = logical.max(2).div_ceil(2) * 2;
        Self { n: k + 2 }
    }

    pub fn k(&self) -> usize {
        self.n - 2
    }

    pub fn distance(&self) -> usize {
        2
    }
}

/// Physical placement of one code block, its two ancillas and the classical
/// registers written by the gadgets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeLayout {
    pub code: CodeParams,
    /// `data[j]` is the physical qubit holding code position `j`.
    pub data: Vec<usize>,
    /// Syndrome ancilla then flag ancilla.
    pub ancillas: [usize; 2],
    pub rounds: usize,
}

impl CodeLayout {
    /// Data on qubits `0..n`, ancillas on `n` and `n + 1`.
    pub fn standard(code: CodeParams, rounds: usize) -> Self {
        let n = code.n;
        Self {
            code,
            data: (0..n).collect(),
            ancillas: [n, n + 1],
            rounds,
        }
    }

    pub fn n(&self) -> usize {
        self.code.n
    }

    pub fn k(&self) -> usize {
        self.code.k()
    }

    pub fn num_qubits(&self) -> usize {
        self.data.iter().chain(self.ancillas.iter()).max().map_or(0, |m| m + 1)
    }

    /// Empty circuit with every layout register declared.
    pub fn empty_circuit(&self) -> Circuit {
        let mut c = Circuit::new(self.num_qubits());
        for (name, size) in self.registers() {
            c.add_register(name, size).expect("register names are distinct");
        }
        c
    }

    pub fn registers(&self) -> [(&'static str, usize); 6] {
        [
            (PREP_FLAG, 1),
            (SYNDROME_Z, self.rounds),
            (SYNDROME_X, self.rounds),
            (FINAL_X, 1),
            (FINAL_FLAG, 1),
            (DATA, self.n()),
        ]
    }

    pub fn validate(&self) -> Result<()> {
        CodeParams::new(self.code.n)?;
        if self.data.len() != self.code.n {
            return Err(Error::domain("layout data length differs from n"));
        }
        let mut all: Vec<usize> = self.data.iter().chain(self.ancillas.iter()).copied().collect();
        all.sort_unstable();
        all.dedup();
        if all.len() != self.code.n + 2 {
            return Err(Error::domain("layout qubits must be distinct"));
        }
        Ok(())
    }

    pub fn to_value(&self) -> Value {
        let roles: BTreeMap<&str, &str> = [
            ("prep_flag", PREP_FLAG),
            ("mid_syndrome_z", SYNDROME_Z),
            ("mid_syndrome_x", SYNDROME_X),
            ("final_x_syndrome", FINAL_X),
            ("final_flag", FINAL_FLAG),
            ("data_readout", DATA),
        ]
        .into_iter()
        .collect();
        serde_json::json!({
            "n": self.code.n,
            "k": self.k(),
            "data_indices": self.data,
            "ancilla_indices": self.ancillas,
            "rounds": self.rounds,
            "register_roles": roles,
        })
    }

    pub fn from_value(v: &Value) -> Result<Self> {
        #[derive(Deserialize)]
        struct Raw {
            n: usize,
            k: usize,
            data_indices: Vec<usize>,
            ancilla_indices: [usize; 2],
            rounds: usize,
        }
        let raw: Raw = serde_json::from_value(v.clone()).map_err(|e| Error::Parse {
            location: "layout".into(),
            message: e.to_string(),
        })?;
        let code = CodeParams::new(raw.n)?;
        if raw.k != code.k() {
            return Err(Error::domain(format!(
                "layout k = {} does not match n = {}",
                raw.k, raw.n
            )));
        }
        let layout = Self {
            code,
            data: raw.data_indices,
            ancillas: raw.ancilla_indices,
            rounds: raw.rounds,
        };
        layout.validate()?;
        Ok(layout)
    }
}
