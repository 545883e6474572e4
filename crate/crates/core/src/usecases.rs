//! Data transfer volume for the PIM use cases, and the per-computation DIO
//! that feeds the CPU side of the model.
//!
//! Sizes are in bits, `n` is the number of records (computations), `p` is the
//! fraction of records selected by a filter.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum UseCaseError {
    #[error("{0} must be finite and ≥ 0")]
    Size(&'static str),
    #[error("selectivity p must be in [0, 1] (got {0})")]
    Selectivity(f64),
    #[error("compacted size s1 ({s1}) exceeds record size s ({s})")]
    Compaction { s: f64, s1: f64 },
    #[error("record count n must be ≥ 1 (got {0})")]
    Records(f64),
    #[error("rows per crossbar r must be ≥ 1 (got {0})")]
    Rows(f64),
}

pub type Result<T> = std::result::Result<T, UseCaseError>;

/// How records travel from memory to the CPU.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum UseCase {
    /// Every record moves in full.
    CpuPure { s: f64 },
    /// Filtering on the CPU: selection fields first, then the selected records.
    CpuPureTwoPass { s: f64, s1: f64, p: f64 },
    /// Nothing leaves memory.
    PimPure { s: f64 },
    /// Each record shrinks from `s` to `s1` bits in memory.
    Compact { s: f64, s1: f64 },
    /// Selected records plus a one-bit-per-record selection vector.
    Filter1 { s: f64, p: f64 },
    /// Selected records plus a log₂(n)-bit index per selected record.
    Filter2 {
        s: f64,
        p: f64,
        #[serde(default)]
        ceil_index: bool,
    },
    /// Compact then filter with a selection vector.
    Hybrid { s: f64, s1: f64, p: f64 },
    /// Whole-memory reduction to a single `s1`-bit result.
    Reduction0 { s: f64, s1: f64 },
    /// Per-crossbar reduction; one `s1`-bit partial result per `r` rows.
    Reduction1 { s: f64, s1: f64, r: f64 },
}

fn size(name: &'static str, v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(UseCaseError::Size(name))
    }
}

fn selectivity(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(UseCaseError::Selectivity(p))
    }
}

impl UseCase {
    /// Original record size; the baseline moves `n·s` bits.
    pub fn record_size(&self) -> f64 {
        match *self {
            UseCase::CpuPure { s }
            | UseCase::CpuPureTwoPass { s, .. }
            | UseCase::PimPure { s }
            | UseCase::Compact { s, .. }
            | UseCase::Filter1 { s, .. }
            | UseCase::Filter2 { s, .. }
            | UseCase::Hybrid { s, .. }
            | UseCase::Reduction0 { s, .. }
            | UseCase::Reduction1 { s, .. } => s,
        }
    }

    pub fn validate(&self) -> Result<()> {
        size("s", self.record_size())?;
        match *self {
            UseCase::CpuPure { .. } | UseCase::PimPure { .. } => Ok(()),
            UseCase::CpuPureTwoPass { s1, p, .. } => {
                size("s1", s1)?;
                selectivity(p)
            }
            UseCase::Compact { s, s1 } => {
                size("s1", s1)?;
                if s1 > s {
                    return Err(UseCaseError::Compaction { s, s1 });
                }
                Ok(())
            }
            UseCase::Filter1 { p, .. } | UseCase::Filter2 { p, .. } => selectivity(p),
            UseCase::Hybrid { s1, p, .. } => {
                size("s1", s1)?;
                selectivity(p)
            }
            UseCase::Reduction0 { s1, .. } => size("s1", s1),
            UseCase::Reduction1 { s1, r, .. } => {
                size("s1", s1)?;
                if !(r.is_finite() && r >= 1.0) {
                    return Err(UseCaseError::Rows(r));
                }
                Ok(())
            }
        }
    }

    fn check(&self, n: f64) -> Result<()> {
        if !(n.is_finite() && n >= 1.0) {
            return Err(UseCaseError::Records(n));
        }
        self.validate()
    }

    /// Total bits moved between memory and CPU for `n` records.
    pub fn total_transfer_bits(&self, n: f64) -> Result<f64> {
        self.check(n)?;
        Ok(match *self {
            UseCase::CpuPure { s } => n * s,
            UseCase::CpuPureTwoPass { s, s1, p } => n * s1 + n * p * s,
            UseCase::PimPure { .. } => 0.0,
            UseCase::Compact { s1, .. } => n * s1,
            UseCase::Filter1 { s, p } => n * p * s + n,
            UseCase::Filter2 { s, p, ceil_index } => {
                let index = if ceil_index { n.log2().ceil() } else { n.log2() };
                n * p * (s + index)
            }
            UseCase::Hybrid { s1, p, .. } => n * p * s1 + n,
            UseCase::Reduction0 { s1, .. } => s1,
            UseCase::Reduction1 { s1, r, .. } => (n / r).ceil() * s1,
        })
    }

    /// Bits moved per accomplished computation.
    ///
    /// For a per-crossbar reduction this is `s1 / r`, which equals the total
    /// divided by `n` when `r` divides `n`.
    pub fn dio_per_computation(&self, n: f64) -> Result<f64> {
        match *self {
            UseCase::Reduction1 { s1, r, .. } => {
                self.check(n)?;
                Ok(s1 / r)
            }
            _ => Ok(self.total_transfer_bits(n)? / n),
        }
    }

    /// Bits saved relative to moving every record in full.
    pub fn transfer_reduction_bits(&self, n: f64) -> Result<f64> {
        Ok(n * self.record_size() - self.total_transfer_bits(n)?)
    }

    /// Hybrid reduction in its tabulated form, N·(S−1) − N₁·S₁. Expands to
    /// the same value as [`UseCase::transfer_reduction_bits`].
    pub fn hybrid_reduction_as_tabulated(&self, n: f64) -> Option<f64> {
        match *self {
            UseCase::Hybrid { s, s1, p } => Some(n * (s - 1.0) - n * p * s1),
            _ => None,
        }
    }
}
