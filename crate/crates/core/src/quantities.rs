//! Machine and workload parameters, unit conventions, and parameter validation.
//!
//! Every quantity is carried in SI base units as `f64`: seconds, joules, bits
//! per second, watts, operations per second. Cycle counts are real-valued.
//! Reporting units (GOPS, J/GOP, Gbps) are exact powers of ten away from the
//! stored values.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Scale between base units and the "giga" reporting units.
pub const GIGA: f64 = 1e9;

/// Operations per second to GOPS.
pub fn to_gops(ops: f64) -> f64 {
    ops / GIGA
}

/// GOPS to operations per second.
pub fn from_gops(gops: f64) -> f64 {
    gops * GIGA
}

/// Joules per operation to joules per 10⁹ operations.
pub fn to_j_per_gop(j_per_op: f64) -> f64 {
    j_per_op * GIGA
}

/// Joules per 10⁹ operations to joules per operation.
pub fn from_j_per_gop(j_per_gop: f64) -> f64 {
    j_per_gop / GIGA
}

/// Gbps to bits per second.
pub fn from_gbps(gbps: f64) -> f64 {
    gbps * GIGA
}

/// Bits per second to Gbps.
pub fn to_gbps(bps: f64) -> f64 {
    bps / GIGA
}

/// A single parameter that failed validation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldError {
    pub field: String,
    pub message: String,
}

impl FieldError {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self { field: field.into(), message: message.into() }
    }
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.message)
    }
}

impl std::error::Error for FieldError {}

fn finite(field: &str, value: f64) -> Result<(), FieldError> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(FieldError::new(field, format!("{field} must be finite")))
    }
}

pub(crate) fn positive(field: &str, value: f64) -> Result<(), FieldError> {
    finite(field, value)?;
    if value > 0.0 {
        Ok(())
    } else {
        Err(FieldError::new(field, format!("{field} must be > 0")))
    }
}

pub(crate) fn non_negative(field: &str, value: f64) -> Result<(), FieldError> {
    finite(field, value)?;
    if value >= 0.0 {
        Ok(())
    } else {
        Err(FieldError::new(field, format!("{field} must be ≥ 0")))
    }
}

fn at_least_one(field: &str, value: f64) -> Result<(), FieldError> {
    finite(field, value)?;
    if value >= 1.0 {
        Ok(())
    } else {
        Err(FieldError::new(field, format!("{field} must be ≥ 1")))
    }
}

/// Technological and architectural parameters of a PIM + CPU machine.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MachineConfig {
    /// Number of crossbar arrays.
    pub xbs: f64,
    /// Rows per crossbar (R).
    pub rows: f64,
    /// Columns per crossbar (C). Only used by the row capacity check.
    pub cols: f64,
    /// PIM cycle time, seconds.
    pub cycle_time: f64,
    /// PIM energy per participating bit per cycle, joules.
    pub ebit_pim: f64,
    /// Memory to CPU bandwidth, bits per second.
    pub bw: f64,
    /// Energy per bit moved between memory and CPU, joules.
    pub ebit_cpu: f64,
    /// PIM thermal design power, watts.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tdp_pim: Option<f64>,
    /// CPU (memory bus) thermal design power, watts.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tdp_cpu: Option<f64>,
}

impl Default for MachineConfig {
    fn default() -> Self {
        Self {
            xbs: 1024.0,
            rows: 1024.0,
            cols: 1024.0,
            cycle_time: 10e-9,
            ebit_pim: 0.1e-12,
            bw: 1000.0 * GIGA,
            ebit_cpu: 15e-12,
            tdp_pim: None,
            tdp_cpu: None,
        }
    }
}

impl MachineConfig {
    /// Returns the config unchanged if every field is physically sane.
    pub fn validate(self) -> Result<Self, FieldError> {
        at_least_one("xbs", self.xbs)?;
        at_least_one("rows", self.rows)?;
        at_least_one("cols", self.cols)?;
        positive("cycle_time", self.cycle_time)?;
        non_negative("ebit_pim", self.ebit_pim)?;
        positive("bw", self.bw)?;
        non_negative("ebit_cpu", self.ebit_cpu)?;
        if let Some(tdp) = self.tdp_pim {
            positive("tdp_pim", tdp)?;
        }
        if let Some(tdp) = self.tdp_cpu {
            positive("tdp_cpu", tdp)?;
        }
        Ok(self)
    }

    /// Same as [`validate`](Self::validate) but collects every failing field.
    pub fn field_errors(&self) -> Vec<FieldError> {
        let mut errors = Vec::new();
        let mut push = |r: Result<(), FieldError>| {
            if let Err(e) = r {
                errors.push(e);
            }
        };
        push(at_least_one("xbs", self.xbs));
        push(at_least_one("rows", self.rows));
        push(at_least_one("cols", self.cols));
        push(positive("cycle_time", self.cycle_time));
        push(non_negative("ebit_pim", self.ebit_pim));
        push(positive("bw", self.bw));
        push(non_negative("ebit_cpu", self.ebit_cpu));
        if let Some(tdp) = self.tdp_pim {
            push(positive("tdp_pim", tdp));
        }
        if let Some(tdp) = self.tdp_cpu {
            push(positive("tdp_cpu", tdp));
        }
        errors
    }

    /// Computations completed per PIM batch (one per row of every crossbar).
    pub fn computations_per_batch(&self) -> f64 {
        self.xbs * self.rows
    }

    /// Rejects a workload needing more cells in a row than the crossbar has columns.
    pub fn check_row_capacity(&self, cells_per_row: f64) -> Result<(), FieldError> {
        non_negative("cells_per_row", cells_per_row)?;
        if cells_per_row > self.cols {
            return Err(FieldError::new(
                "cells_per_row",
                format!("cells_per_row ({cells_per_row}) exceeds cols ({})", self.cols),
            ));
        }
        Ok(())
    }

    /// Notes for parameters outside the usual range. Such values are still
    /// accepted; limit studies rely on them.
    pub fn typical_range_warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut check = |name: &str, v: f64, lo: f64, hi: f64, unit: &str| {
            if v < lo || v > hi {
                out.push(format!("{name} = {v}{unit} is outside the typical range [{lo}, {hi}]{unit}"));
            }
        };
        check("xbs", self.xbs, 1.0, 65536.0, "");
        check("rows", self.rows, 16.0, 1024.0, "");
        check("cols", self.cols, 16.0, 1024.0, "");
        check("bw", to_gbps(self.bw), 100.0, 16000.0, " Gbps");
        out
    }
}

/// Algorithmic parameters of one computation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorkloadProfile {
    #[serde(default)]
    pub label: String,
    /// Operation complexity, PIM cycles.
    pub oc: f64,
    /// Placement and alignment complexity, PIM cycles.
    #[serde(default)]
    pub pac: f64,
    /// Bits moved per computation when the CPU does all the work.
    pub dio_cpu: f64,
    /// Bits moved per computation when PIM pre-processes the data.
    pub dio_combined: f64,
    /// Cells each row must hold, checked against the machine's columns.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cells_per_row: Option<f64>,
}

impl WorkloadProfile {
    pub fn new(label: impl Into<String>, oc: f64, pac: f64, dio_cpu: f64, dio_combined: f64) -> Self {
        Self { label: label.into(), oc, pac, dio_cpu, dio_combined, cells_per_row: None }
    }

    /// Computation complexity: OC + PAC.
    pub fn cc(&self) -> f64 {
        self.oc + self.pac
    }

    pub fn validate(self) -> Result<Self, FieldError> {
        match self.field_errors().into_iter().next() {
            Some(e) => Err(e),
            None => Ok(self),
        }
    }

    pub fn field_errors(&self) -> Vec<FieldError> {
        [
            non_negative("oc", self.oc),
            non_negative("pac", self.pac),
            non_negative("dio_cpu", self.dio_cpu),
            non_negative("dio_combined", self.dio_combined),
        ]
        .into_iter()
        .chain(self.cells_per_row.map(|c| non_negative("cells_per_row", c)))
        .filter_map(Result::err)
        .collect()
    }

    pub fn typical_range_warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.cc() > 65536.0 {
            out.push(format!("cc = {} cycles is above the typical 64k cycles", self.cc()));
        }
        for (name, dio) in [("dio_cpu", self.dio_cpu), ("dio_combined", self.dio_combined)] {
            if dio > 256.0 {
                out.push(format!("{name} = {dio} bits is above the typical 256 bits"));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn default_machine_is_valid_and_typical() {
        let m = MachineConfig::default().validate().unwrap();
        assert_eq!(m.cycle_time, 10e-9);
        assert_eq!(m.ebit_pim, 0.1e-12);
        assert_eq!(m.ebit_cpu, 15e-12);
        assert_eq!((m.rows, m.cols, m.xbs), (1024.0, 1024.0, 1024.0));
        assert_eq!(to_gbps(m.bw), 1000.0);
        assert!(m.typical_range_warnings().is_empty());
    }

    #[test]
    fn zero_cycle_time_rejected() {
        let m = MachineConfig { cycle_time: 0.0, ..Default::default() };
        let err = m.validate().unwrap_err();
        assert_eq!(err.field, "cycle_time");
        assert_eq!(err.to_string(), "cycle_time must be > 0");
    }

    #[test]
    fn large_floatpim_machine_accepted() {
        let m = MachineConfig { xbs: 65536.0, rows: 1024.0, ..Default::default() };
        assert!(m.validate().is_ok());
    }

    #[test]
    fn out_of_range_is_a_warning_not_an_error() {
        let m = MachineConfig { xbs: 1e7, bw: from_gbps(50_000.0), ..Default::default() };
        assert!(m.validate().is_ok());
        assert_eq!(m.typical_range_warnings().len(), 2);
    }

    #[test]
    fn non_finite_and_bad_tdp_rejected() {
        let m = MachineConfig { bw: f64::NAN, ..Default::default() };
        assert_eq!(m.validate().unwrap_err().field, "bw");
        let m = MachineConfig { tdp_pim: Some(0.0), ..Default::default() };
        assert_eq!(m.validate().unwrap_err().to_string(), "tdp_pim must be > 0");
        let m = MachineConfig { xbs: 0.0, rows: 0.5, ..Default::default() };
        assert_eq!(m.field_errors().len(), 2);
    }

    #[test]
    fn cc_is_oc_plus_pac() {
        let w = WorkloadProfile::new("shift-add", 144.0, 512.0, 48.0, 16.0);
        assert_eq!(w.cc(), 656.0);
        let err = WorkloadProfile::new("bad", -1.0, 0.0, 0.0, 0.0).validate().unwrap_err();
        assert_eq!(err.to_string(), "oc must be ≥ 0");
    }

    #[test]
    fn row_capacity() {
        let m = MachineConfig::default();
        assert!(m.check_row_capacity(1024.0).is_ok());
        assert!(m.check_row_capacity(1025.0).is_err());
    }

    // Scaling by 1e9 maps two adjacent doubles onto one, so no inverse can be
    // bit-exact everywhere.
    #[test]
    fn giga_scaling_is_not_injective() {
        let a = 11586.811824513501_f64;
        let b = f64::from_bits(a.to_bits() + 1);
        assert_ne!(a, b);
        assert_eq!(from_gops(a), from_gops(b));
    }

    fn ulps_apart(a: f64, b: f64) -> u64 {
        (a.to_bits() as i64 - b.to_bits() as i64).unsigned_abs()
    }

    proptest! {
        #[test]
        fn gops_round_trip_within_one_ulp(e in -3.0f64..6.0) {
            let x = 10f64.powf(e);
            prop_assert!(ulps_apart(to_gops(from_gops(x)), x) <= 1);
            prop_assert!(ulps_apart(from_j_per_gop(to_j_per_gop(x)), x) <= 1);
            prop_assert!(ulps_apart(to_gbps(from_gbps(x)), x) <= 1);
        }

        #[test]
        fn machine_json_round_trip_is_bit_exact(
            xbs in 1.0f64..1e6, rows in 1.0f64..4096.0, ct in 1e-12f64..1e-3,
            ep in 0.0f64..1e-9, bw in 1.0f64..1e15, ec in 0.0f64..1e-9,
            tdp in proptest::option::of(1e-3f64..1e4),
        ) {
            let m = MachineConfig {
                xbs, rows, cols: rows, cycle_time: ct, ebit_pim: ep, bw, ebit_cpu: ec,
                tdp_pim: tdp, tdp_cpu: None,
            };
            let text = serde_json::to_string(&m).unwrap();
            let back: MachineConfig = serde_json::from_str(&text).unwrap();
            prop_assert_eq!(back, m);
        }
    }
}
