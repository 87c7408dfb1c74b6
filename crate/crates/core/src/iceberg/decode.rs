//! Post-selection and logical readout of one shot.

use serde::{Deserialize, Serialize};

use super::{CodeLayout, DATA, FINAL_FLAG, FINAL_X, PREP_FLAG, SYNDROME_X, SYNDROME_Z};
use crate::error::{Error, Result};
use crate::sim::ShotRecord;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RejectionCause {
    PrepFlag,
    MidSyndrome,
    FinalSyndrome,
    FinalFlag,
    ZParity,
}

impl RejectionCause {
    pub const ALL: [RejectionCause; 5] = [
        RejectionCause::PrepFlag,
        RejectionCause::MidSyndrome,
        RejectionCause::FinalSyndrome,
        RejectionCause::FinalFlag,
        RejectionCause::ZParity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RejectionCause::PrepFlag => "prep_flag",
            RejectionCause::MidSyndrome => "mid_syndrome",
            RejectionCause::FinalSyndrome => "final_syndrome",
            RejectionCause::FinalFlag => "final_flag",
            RejectionCause::ZParity => "z_parity",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodedShot {
    pub accepted: bool,
    /// Logical bit `i` at index `i`; all zero when rejected.
    pub logical_bits: Vec<u8>,
    pub rejection_cause: Option<RejectionCause>,
}

impl DecodedShot {
    /// Logical bits as an integer with bit `i` for logical qubit `i`.
    pub fn value(&self) -> u64 {
        self.logical_bits
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &b)| acc | (u64::from(b) << i))
    }
}

fn reg<'a>(record: &'a ShotRecord, name: &str) -> Result<&'a [u8]> {
    record.register(name).ok_or_else(|| Error::MissingRegister(name.into()))
}

/// Checks run in gadget order; the first failing one is the cause.
pub fn decode_shot(record: &ShotRecord, layout: &CodeLayout) -> Result<DecodedShot> {
    let n = layout.n();
    let prep = reg(record, PREP_FLAG)?;
    let (sz, sx) = (reg(record, SYNDROME_Z)?, reg(record, SYNDROME_X)?);
    let (fx, ff) = (reg(record, FINAL_X)?, reg(record, FINAL_FLAG)?);
    let data = reg(record, DATA)?;
    if data.len() != n {
        return Err(Error::domain(format!(
            "data register has {} bits, layout needs {n}",
            data.len()
        )));
    }
    let any = |b: &[u8]| b.iter().any(|&x| x != 0);
    let cause = if any(prep) {
        Some(RejectionCause::PrepFlag)
    } else if any(sz) || any(sx) {
        Some(RejectionCause::MidSyndrome)
    } else if any(fx) {
        Some(RejectionCause::FinalSyndrome)
    } else if any(ff) {
        Some(RejectionCause::FinalFlag)
    } else if data.iter().fold(0, |a, &b| a ^ b) != 0 {
        Some(RejectionCause::ZParity)
    } else {
        None
    };
    let k = layout.k();
    let logical_bits = match cause {
        None => (0..k).map(|i| data[i + 1] ^ data[n - 1]).collect(),
        Some(_) => vec![0; k],
    };
    Ok(DecodedShot {
        accepted: cause.is_none(),
        logical_bits,
        rejection_cause: cause,
    })
}
