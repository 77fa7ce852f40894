//! Survival of block-cycles under edge spreading.
//!
//! A block-cycle of the block code survives the spreading defined by B if
//! and only if the entries of B at the cycle's positions telescope to zero
//! over the integers. Checking one small sum per enumerated block-cycle is
//! what makes candidate evaluation cheap: no expansion to the binary graph
//! is ever needed.

use crate::cycles::{BlockCycle, CycleList};
use crate::error::Result;
use crate::spreading::SpreadingMatrix;

/// Per-cycle verdicts for one (cycle list, spreading) pair.
#[derive(Debug, Clone)]
pub struct SurvivalReport {
    verdicts: Vec<(BlockCycle, bool)>,
}

impl SurvivalReport {
    /// All cycles with their verdict; true means the cycle survives.
    pub fn verdicts(&self) -> &[(BlockCycle, bool)] {
        &self.verdicts
    }

    pub fn total(&self) -> usize {
        self.verdicts.len()
    }

    pub fn eliminated(&self) -> usize {
        self.verdicts.iter().filter(|(_, s)| !s).count()
    }

    pub fn surviving(&self) -> usize {
        self.total() - self.eliminated()
    }

    pub fn surviving_of_length(&self, len: usize) -> usize {
        self.verdicts
            .iter()
            .filter(|(c, s)| *s && c.len() == len)
            .count()
    }

    pub fn eliminated_of_length(&self, len: usize) -> usize {
        self.verdicts
            .iter()
            .filter(|(c, s)| !s && c.len() == len)
            .count()
    }

    pub fn survivors(&self) -> impl Iterator<Item = &BlockCycle> {
        self.verdicts.iter().filter(|(_, s)| *s).map(|(c, _)| c)
    }
}

/// True iff the cycle still exists after spreading by `b`: the spreading
/// entries along the path must telescope to zero over the integers.
pub fn survives(c: &BlockCycle, b: &SpreadingMatrix) -> Result<bool> {
    Ok(c.path_sum(|i, j| Some(i64::from(b.get(i, j))))? == 0)
}

/// Integer-valued survival test, for transformations that leave the
/// [0, m_s] alphabet.
pub fn survives_values(c: &BlockCycle, value: impl Fn(usize, usize) -> i64) -> Result<bool> {
    Ok(c.path_sum(|i, j| Some(value(i, j)))? == 0)
}

/// Verdict for every enumerated cycle under `b`.
pub fn count_eliminated(cycles: &CycleList, b: &SpreadingMatrix) -> Result<SurvivalReport> {
    let verdicts = cycles
        .cycles()
        .iter()
        .map(|c| survives(c, b).map(|s| (c.clone(), s)))
        .collect::<Result<Vec<_>>>()?;
    Ok(SurvivalReport { verdicts })
}
