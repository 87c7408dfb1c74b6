//! Grover search circuits, ideal success analytics and resource accounting
//! of the encoded search.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::circuit::{count_gates, depth, Circuit, Gate};
use crate::error::{Error, Result};
use crate::iceberg::{
    encode, squash_1q, transpile_to_native, EncodeOptions, Encoded, SyndromeSchedule, TranspileOptions, FINAL_FLAG,
    PREP_FLAG, SYNDROME_X, SYNDROME_Z,
};
use crate::mcx::{emit_mcx, emit_mcx_no_ancilla, McxSpec};

/// Register holding the search qubits of a bare run.
pub const BARE_REGISTER: &str = "meas";

/// Search over `s` qubits with `iterations` marker/diffusion rounds.
/// `marked[i]` is the marked value of search qubit `i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroverSpec {
    pub s: usize,
    pub iterations: usize,
    pub marked: Vec<u8>,
}

impl GroverSpec {
    /// Spec marking the all-ones state.
    pub fn new(s: usize, iterations: usize) -> Result<Self> {
        Self::with_marked(s, iterations, vec![1; s])
    }

    pub fn with_marked(s: usize, iterations: usize, marked: Vec<u8>) -> Result<Self> {
        if s < 2 {
            return Err(Error::domain(format!("search needs at least 2 qubits, got {s}")));
        }
        if marked.len() != s {
            return Err(Error::domain(format!(
                "marked string has {} bits, expected {s}",
                marked.len()
            )));
        }
        if marked.iter().any(|&b| b > 1) {
            return Err(Error::domain("marked string must be binary"));
        }
        Ok(Self { s, iterations, marked })
    }

    /// Marked state as an integer with bit `i` for search qubit `i`.
    pub fn marked_value(&self) -> u64 {
        self.marked
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &b)| acc | (u64::from(b) << i))
    }

    /// Width of the logical circuit under `layout`.
    pub fn logical_width(&self, layout: GroverLayout) -> usize {
        match self.helper(layout) {
            Some(h) => h + 1,
            None => self.s,
        }
    }

    /// Qubit lent to the multi-controlled gates, if any.
    pub fn helper(&self, layout: GroverLayout) -> Option<usize> {
        match layout {
            GroverLayout::Compact if self.s.is_multiple_of(2) => None,
            _ => Some(self.s),
        }
    }

    pub fn ideal_success(&self) -> f64 {
        ideal_success(1u64 << self.s, 1, self.iterations as u64).expect("valid by construction")
    }
}

impl fmt::Display for GroverSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bits: String = self.marked.iter().map(|b| if *b == 1 { '1' } else { '0' }).collect();
        write!(f, "s={},d={},marked={bits}", self.s, self.iterations)
    }
}

/// Parses `s=INT,d=INT[,marked=BITS]`; the first bit of `BITS` belongs to
/// search qubit 0.
impl FromStr for GroverSpec {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let (mut s, mut d, mut marked) = (None, None, None);
        for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| Error::domain(format!("expected key=value, found `{part}`")))?;
            let int = || {
                value
                    .parse::<usize>()
                    .map_err(|_| Error::domain(format!("`{key}` must be an integer")))
            };
            match key {
                "s" => s = Some(int()?),
                "d" => d = Some(int()?),
                "marked" => {
                    let bits = value
                        .chars()
                        .map(|c| match c {
                            '0' => Ok(0),
                            '1' => Ok(1),
                            _ => Err(Error::domain(format!("marked string `{value}` is not binary"))),
                        })
                        .collect::<Result<Vec<u8>>>()?;
                    marked = Some(bits);
                }
                _ => return Err(Error::domain(format!("unknown spec key `{key}`"))),
            }
        }
        let s = s.ok_or_else(|| Error::domain("spec is missing `s`"))?;
        let d = d.ok_or_else(|| Error::domain("spec is missing `d`"))?;
        Self::with_marked(s, d, marked.unwrap_or_else(|| vec![1; s]))
    }
}

/// Where the borrowed helper of the multi-controlled gates lives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GroverLayout {
    /// Odd `s` lends the padding qubit of the block; even `s` fills the
    /// block exactly and synthesizes the gates without a helper. `s = 4`
    /// runs on the `[[6,4,2]]` code.
    #[default]
    Compact,
    /// A dedicated extra logical qubit `s` is always lent, so the block
    /// holds `2⌈(s+1)/2⌉` logical qubits.
    Dedicated,
}

/// `C^{s−1}Z` on the search register as an `H`-conjugated `C^{s−1}X`.
fn controlled_z(c: &mut Circuit, s: usize, helper: Option<usize>) {
    let controls: Vec<usize> = (0..s - 1).collect();
    c.h(s - 1).mcx(&controls, s - 1, helper).h(s - 1);
}

/// Logical search circuit; the helper qubit, if any, is only ever lent to
/// the multi-controlled gates.
pub fn build_grover_logical(spec: &GroverSpec, layout: GroverLayout) -> Circuit {
    let s = spec.s;
    let helper = spec.helper(layout);
    let mut c = Circuit::new(spec.logical_width(layout));
    for q in 0..s {
        c.h(q);
    }
    let zeros: Vec<usize> = (0..s).filter(|&q| spec.marked[q] == 0).collect();
    for _ in 0..spec.iterations {
        for &q in &zeros {
            c.x(q);
        }
        controlled_z(&mut c, s, helper);
        for &q in &zeros {
            c.x(q);
        }
        for q in 0..s {
            c.h(q);
        }
        for q in 0..s {
            c.x(q);
        }
        controlled_z(&mut c, s, helper);
        for q in 0..s {
            c.x(q);
        }
        for q in 0..s {
            c.h(q);
        }
    }
    c
}

/// Unencoded physical circuit: the logical circuit with its
/// multi-controlled gates synthesized, squashed, and the search register
/// measured into [`BARE_REGISTER`].
pub fn build_grover_bare(spec: &GroverSpec, layout: GroverLayout) -> Result<Circuit> {
    let logical = build_grover_logical(spec, layout);
    let mut c = Circuit::new(logical.num_qubits());
    c.add_register(BARE_REGISTER, spec.s)?;
    for inst in logical.instructions() {
        match inst.gate {
            Gate::Mcx { controls, borrowed } => {
                let ctl: Vec<usize> = inst.qubits[..controls].iter().map(|q| q.0).collect();
                let t = inst.qubit(controls);
                if borrowed {
                    emit_mcx(&mut c, &McxSpec::new(ctl, t, inst.qubit(controls + 1))?)?;
                } else {
                    emit_mcx_no_ancilla(&mut c, &ctl, t)?;
                }
            }
            _ => c.push(inst.clone())?,
        }
    }
    let mut c = squash_1q(&c);
    for q in 0..spec.s {
        c.measure(q, BARE_REGISTER, q);
    }
    Ok(c)
}

/// Encoded search in the smallest code that holds the logical circuit.
pub fn build_grover_encoded(spec: &GroverSpec, layout: GroverLayout, schedule: SyndromeSchedule) -> Result<Encoded> {
    encode(
        &build_grover_logical(spec, layout),
        &EncodeOptions {
            schedule,
            ..EncodeOptions::default()
        },
    )
}

/// Number of logical operations the encoded search is built from, the `L`
/// over which syndrome rounds are spread.
pub fn logical_op_count(spec: &GroverSpec, layout: GroverLayout) -> Result<usize> {
    let logical = build_grover_logical(spec, layout);
    let k = crate::iceberg::CodeParams::for_logical(logical.num_qubits()).k();
    Ok(transpile_to_native(&logical, k, TranspileOptions::default())?.len())
}

/// Probability of measuring a marked state: `sin²((2k+1)·arcsin(√(M/N)))`.
pub fn ideal_success(n_states: u64, marked: u64, iterations: u64) -> Result<f64> {
    if marked == 0 || marked > n_states {
        return Err(Error::domain(format!(
            "need 1 ≤ M ≤ N, got M = {marked}, N = {n_states}"
        )));
    }
    let theta = (marked as f64 / n_states as f64).sqrt().asin();
    Ok(((2 * iterations + 1) as f64 * theta).sin().powi(2))
}

/// `⌊(π/4)·√(N/M) − 1/2⌋`, floored at zero.
pub fn optimal_iterations(n_states: u64, marked: u64) -> Result<u64> {
    if marked == 0 || marked > n_states {
        return Err(Error::domain(format!(
            "need 1 ≤ M ≤ N, got M = {marked}, N = {n_states}"
        )));
    }
    let x = PI / 4.0 * (n_states as f64 / marked as f64).sqrt() - 0.5;
    Ok(x.floor().max(0.0) as u64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SyndromeAddon {
    pub two_qubit: u64,
    pub measure_reset: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ResourceReport {
    pub qubits: u64,
    /// Terminal readouts that carry data: the data register and the final
    /// X syndrome. Flags and mid-circuit syndromes are not included.
    pub measurements: u64,
    pub rzz_count: u64,
    pub u_count: u64,
    pub depth: u64,
    pub syndrome_addon_per_round: SyndromeAddon,
}

/// Asymptotic compiled/uncompiled ratios for qubits, measurements, RZZ, U
/// and depth.
pub const GROVER_OVERHEADS: [f64; 5] = [1.0, 1.0, 4.0, 1.03125, 2.765625];

fn sign(k: u64) -> i64 {
    if k.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn syndrome_addon(k: u64) -> SyndromeAddon {
    SyndromeAddon {
        two_qubit: 4 * (k + 1).div_ceil(2) + 4,
        measure_reset: 2,
    }
}

/// Closed-form resource counts of the encoded search over `k` logical
/// qubits with `d` iterations.
pub fn grover_reference_resources(k: u64, d: u64) -> Result<ResourceReport> {
    if k < 2 || !k.is_multiple_of(2) {
        return Err(Error::domain(format!("k must be even and at least 2, got {k}")));
    }
    if d < 1 {
        return Err(Error::domain("at least one iteration is required"));
    }
    let (ki, di, sg) = (k as i64, d as i64, sign(k));
    let half = (k + 1).div_ceil(2);
    let rzz = 10 + sg - 288 * di + 2 * ki + 128 * di * ki;
    let u2 = 51 + 5 * sg - 228 * di + 10 * ki + 132 * di * ki;
    let depth = 18 + 2 * sg - 394 * di + 4 * ki + 177 * di * ki;
    let nonneg = |v: i64, what: &str| {
        u64::try_from(v).map_err(|_| Error::domain(format!("{what} closed form is negative at k = {k}, d = {d}")))
    };
    Ok(ResourceReport {
        qubits: 2 * half + 4,
        measurements: 2 * half + 3,
        rzz_count: nonneg(rzz, "RZZ")?,
        u_count: nonneg(u2, "U")? / 2,
        depth: nonneg(depth, "depth")?,
        syndrome_addon_per_round: syndrome_addon(k),
    })
}

/// Counts taken from a compiled circuit. Every two-qubit gate counts as one
/// RZZ-class gate and every non-identity single-qubit gate as one U.
pub fn measured_resources(circuit: &Circuit) -> Result<ResourceReport> {
    let counts = count_gates(circuit)?;
    let skip = [PREP_FLAG, FINAL_FLAG, SYNDROME_Z, SYNDROME_X];
    let measurements = circuit
        .instructions()
        .iter()
        .filter(|i| i.gate == Gate::Measure)
        .filter(|i| {
            i.clbit
                .is_none_or(|b| !skip.contains(&circuit.registers()[b.register].name.as_str()))
        })
        .count();
    let identities = circuit.instructions().iter().filter(|i| i.gate == Gate::I).count();
    let data = circuit
        .register_index(crate::iceberg::DATA)
        .map(|r| circuit.registers()[r].size as u64);
    Ok(ResourceReport {
        qubits: circuit.num_qubits() as u64,
        measurements: measurements as u64,
        rzz_count: counts.two_qubit as u64,
        u_count: (counts.one_qubit_unitary - identities) as u64,
        depth: depth(circuit) as u64,
        syndrome_addon_per_round: SyndromeAddon {
            two_qubit: data.map_or(0, |n| 2 * n),
            measure_reset: 2,
        },
    })
}
