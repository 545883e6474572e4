//! Throughput, power and energy per computation for PIM-only, CPU-only and
//! combined PIM+CPU execution, with optional TDP throttling.
//!
//! In the combined mode PIM computation and data transfer do not overlap: a
//! batch of `xbs·rows` computations takes `cc·cycle_time` in memory and then
//! `xbs·rows·dio/bw` on the bus. Combined throughput is therefore the harmonic
//! combination of the two component throughputs, and combined power is the
//! time-weighted mean of the component powers.
//!
//! A workload with `cc == 0` never uses PIM and one with `dio == 0` never uses
//! the bus; the corresponding throughput is reported as `f64::INFINITY`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quantities::{FieldError, MachineConfig, WorkloadProfile};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EngineError {
    #[error(transparent)]
    Invalid(#[from] FieldError),
    #[error("cc must be ≥ 1 cycle (got {0})")]
    Cycles(f64),
    #[error("dio must be > 0 bits (got {0})")]
    DataIo(f64),
    #[error("duty cycle must be in [0, 1] (got {0})")]
    Duty(f64),
    #[error("throughput must be > 0 (got {0})")]
    Throughput(f64),
    #[error("cc and dio_combined are both zero: the workload does no work")]
    NoWork,
    #[error("throttling needs tdp_pim or tdp_cpu on the machine")]
    NoTdp,
}

pub type Result<T> = std::result::Result<T, EngineError>;

/// PIM throughput in operations per second: (xbs·rows) / (cc·cycle_time).
pub fn tp_pim(m: &MachineConfig, cc: f64) -> Result<f64> {
    if !(cc >= 1.0) || !cc.is_finite() {
        return Err(EngineError::Cycles(cc));
    }
    Ok(m.computations_per_batch() / (cc * m.cycle_time))
}

/// Data transfer bound CPU throughput in operations per second: bw / dio.
pub fn tp_cpu(m: &MachineConfig, dio: f64) -> Result<f64> {
    if !(dio > 0.0) || !dio.is_finite() {
        return Err(EngineError::DataIo(dio));
    }
    Ok(m.bw / dio)
}

/// Harmonic combination of two non-overlapping stages.
///
/// Either side may be `f64::INFINITY` (stage unused); the other side is then
/// returned unchanged.
pub fn tp_combined(tp_p: f64, tp_c: f64) -> Result<f64> {
    for tp in [tp_p, tp_c] {
        if !(tp > 0.0) {
            return Err(EngineError::Throughput(tp));
        }
    }
    match (tp_p.is_infinite(), tp_c.is_infinite()) {
        (true, true) => Err(EngineError::NoWork),
        (true, false) => Ok(tp_c),
        (false, true) => Ok(tp_p),
        (false, false) => Ok(1.0 / (1.0 / tp_p + 1.0 / tp_c)),
    }
}

/// PIM power while computing. Independent of the workload.
pub fn p_pim(m: &MachineConfig) -> f64 {
    m.ebit_pim * m.rows * m.xbs / m.cycle_time
}

/// Bus power at the given duty cycle.
pub fn p_cpu(m: &MachineConfig, duty: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&duty) {
        return Err(EngineError::Duty(duty));
    }
    Ok(m.ebit_cpu * m.bw * duty)
}

/// Energy per computation, joules per operation.
pub fn epc(power: f64, tp: f64) -> Result<f64> {
    if !(tp > 0.0) {
        return Err(EngineError::Throughput(tp));
    }
    Ok(power / tp)
}

/// Combined power: (p_p/tp_p + p_c/tp_c)·tp_comb.
pub fn p_combined(p_p: f64, tp_p: f64, p_c: f64, tp_c: f64, tp_comb: f64) -> Result<f64> {
    if !(tp_comb > 0.0) || tp_comb.is_infinite() {
        return Err(EngineError::Throughput(tp_comb));
    }
    Ok((epc(p_p, tp_p)? + epc(p_c, tp_c)?) * tp_comb)
}

/// Which TDP limits were active.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThrottleFlags {
    pub pim: bool,
    pub cpu: bool,
}

/// The nine model outputs plus duty cycles and throttling metadata.
///
/// Throughputs are operations per second, powers watts, energies joules per
/// operation. `tp_cpu`/`epc_cpu` describe the CPU-pure system (DIO_CPU);
/// `tp_cpu_combined`/`epc_cpu_combined` describe the transfer stage of the
/// combined system (DIO_Combined).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalResult {
    #[serde(with = "unbounded")]
    pub tp_pim: f64,
    #[serde(with = "unbounded")]
    pub tp_cpu: f64,
    #[serde(with = "unbounded")]
    pub tp_cpu_combined: f64,
    pub tp_combined: f64,
    pub p_pim: f64,
    pub p_cpu: f64,
    pub p_combined: f64,
    pub epc_pim: f64,
    pub epc_cpu: f64,
    pub epc_cpu_combined: f64,
    pub epc_combined: f64,
    /// Fraction of combined-mode time spent computing in memory.
    pub duty_pim: f64,
    /// Fraction of combined-mode time the bus is busy.
    pub duty_cpu: f64,
    pub throttle_factor_pim: f64,
    pub throttle_factor_cpu: f64,
    pub throttled: ThrottleFlags,
}

#[allow(clippy::too_many_arguments)]
fn finish(
    tp_pim: f64,
    tp_cpu: f64,
    tp_cpu_combined: f64,
    p_pim: f64,
    p_cpu: f64,
    epc_pim: f64,
    epc_cpu: f64,
    epc_cpu_combined: f64,
) -> Result<EvalResult> {
    let tp_comb = tp_combined(tp_pim, tp_cpu_combined)?;
    let epc_combined = epc_pim + epc_cpu_combined;
    Ok(EvalResult {
        tp_pim,
        tp_cpu,
        tp_cpu_combined,
        tp_combined: tp_comb,
        p_pim,
        p_cpu,
        p_combined: epc_combined * tp_comb,
        epc_pim,
        epc_cpu,
        epc_cpu_combined,
        epc_combined,
        duty_pim: tp_comb / tp_pim,
        duty_cpu: tp_comb / tp_cpu_combined,
        throttle_factor_pim: 1.0,
        throttle_factor_cpu: 1.0,
        throttled: ThrottleFlags::default(),
    })
}

/// Evaluates all three systems for one machine and workload, applying TDP
/// throttling when the machine carries TDP limits.
pub fn evaluate(m: &MachineConfig, w: &WorkloadProfile) -> Result<EvalResult> {
    let unthrottled = evaluate_unthrottled(m, w)?;
    if m.tdp_pim.is_some() || m.tdp_cpu.is_some() {
        throttle(&unthrottled, m)
    } else {
        Ok(unthrottled)
    }
}

/// [`evaluate`] without TDP limits.
pub fn evaluate_unthrottled(m: &MachineConfig, w: &WorkloadProfile) -> Result<EvalResult> {
    let m = m.validate()?;
    let w = w.clone().validate()?;
    if let Some(cells) = w.cells_per_row {
        m.check_row_capacity(cells)?;
    }
    let cc = w.cc();
    if cc == 0.0 && w.dio_combined == 0.0 {
        return Err(EngineError::NoWork);
    }

    let stage = |unused: bool, tp: Result<f64>| if unused { Ok(f64::INFINITY) } else { tp };
    let tp_p = stage(cc == 0.0, tp_pim(&m, cc))?;
    let tp_c = stage(w.dio_cpu == 0.0, tp_cpu(&m, w.dio_cpu))?;
    let tp_cc = stage(w.dio_combined == 0.0, tp_cpu(&m, w.dio_combined))?;

    let pp = p_pim(&m);
    let pc = p_cpu(&m, 1.0)?;
    finish(tp_p, tp_c, tp_cc, pp, pc, epc(pp, tp_p)?, epc(pc, tp_c)?, epc(pc, tp_cc)?)
}

/// Scales each side down uniformly so that its active power stays within its
/// TDP, then recombines. Energy per computation is unchanged.
pub fn throttle(result: &EvalResult, m: &MachineConfig) -> Result<EvalResult> {
    if m.tdp_pim.is_none() && m.tdp_cpu.is_none() {
        return Err(EngineError::NoTdp);
    }
    let factor = |tdp: Option<f64>, power: f64| -> Result<f64> {
        match tdp {
            None => Ok(1.0),
            Some(t) if !(t > 0.0) => Err(FieldError::new("tdp", format!("tdp must be > 0 (got {t})")).into()),
            Some(t) if power > t => Ok(t / power),
            Some(_) => Ok(1.0),
        }
    };
    let f_p = factor(m.tdp_pim, result.p_pim)?;
    let f_c = factor(m.tdp_cpu, result.p_cpu)?;

    let mut out = finish(
        result.tp_pim * f_p,
        result.tp_cpu * f_c,
        result.tp_cpu_combined * f_c,
        result.p_pim * f_p,
        result.p_cpu * f_c,
        result.epc_pim,
        result.epc_cpu,
        result.epc_cpu_combined,
    )?;
    out.throttle_factor_pim = f_p;
    out.throttle_factor_cpu = f_c;
    out.throttled = ThrottleFlags { pim: f_p < 1.0, cpu: f_c < 1.0 };
    Ok(out)
}

/// A scalar projection of an [`EvalResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    TpPim,
    TpCpu,
    TpCpuCombined,
    TpCombined,
    PPim,
    PCpu,
    PCombined,
    EpcPim,
    EpcCpu,
    EpcCpuCombined,
    EpcCombined,
    DutyPim,
    DutyCpu,
}

/// Display unit of a metric.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Unit {
    Gops,
    Watts,
    JoulesPerGop,
    Fraction,
}

impl Unit {
    pub fn suffix(self) -> &'static str {
        match self {
            Unit::Gops => "gops",
            Unit::Watts => "w",
            Unit::JoulesPerGop => "jgop",
            Unit::Fraction => "frac",
        }
    }

    /// Converts an SI value (ops/s, W, J/op) to this unit.
    pub fn from_si(self, v: f64) -> f64 {
        match self {
            Unit::Gops => crate::quantities::to_gops(v),
            Unit::JoulesPerGop => crate::quantities::to_j_per_gop(v),
            Unit::Watts | Unit::Fraction => v,
        }
    }

    pub fn to_si(self, v: f64) -> f64 {
        match self {
            Unit::Gops => crate::quantities::from_gops(v),
            Unit::JoulesPerGop => crate::quantities::from_j_per_gop(v),
            Unit::Watts | Unit::Fraction => v,
        }
    }
}

impl Metric {
    pub const ALL: [Metric; 13] = [
        Metric::TpPim,
        Metric::TpCpu,
        Metric::TpCpuCombined,
        Metric::TpCombined,
        Metric::PPim,
        Metric::PCpu,
        Metric::PCombined,
        Metric::EpcPim,
        Metric::EpcCpu,
        Metric::EpcCpuCombined,
        Metric::EpcCombined,
        Metric::DutyPim,
        Metric::DutyCpu,
    ];

    /// SI value of this metric.
    pub fn of(self, r: &EvalResult) -> f64 {
        match self {
            Metric::TpPim => r.tp_pim,
            Metric::TpCpu => r.tp_cpu,
            Metric::TpCpuCombined => r.tp_cpu_combined,
            Metric::TpCombined => r.tp_combined,
            Metric::PPim => r.p_pim,
            Metric::PCpu => r.p_cpu,
            Metric::PCombined => r.p_combined,
            Metric::EpcPim => r.epc_pim,
            Metric::EpcCpu => r.epc_cpu,
            Metric::EpcCpuCombined => r.epc_cpu_combined,
            Metric::EpcCombined => r.epc_combined,
            Metric::DutyPim => r.duty_pim,
            Metric::DutyCpu => r.duty_cpu,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Metric::TpPim => "tp_pim",
            Metric::TpCpu => "tp_cpu",
            Metric::TpCpuCombined => "tp_cpu_combined",
            Metric::TpCombined => "tp_combined",
            Metric::PPim => "p_pim",
            Metric::PCpu => "p_cpu",
            Metric::PCombined => "p_combined",
            Metric::EpcPim => "epc_pim",
            Metric::EpcCpu => "epc_cpu",
            Metric::EpcCpuCombined => "epc_cpu_combined",
            Metric::EpcCombined => "epc_combined",
            Metric::DutyPim => "duty_pim",
            Metric::DutyCpu => "duty_cpu",
        }
    }

    pub fn unit(self) -> Unit {
        match self {
            Metric::TpPim | Metric::TpCpu | Metric::TpCpuCombined | Metric::TpCombined => Unit::Gops,
            Metric::PPim | Metric::PCpu | Metric::PCombined => Unit::Watts,
            Metric::EpcPim | Metric::EpcCpu | Metric::EpcCpuCombined | Metric::EpcCombined => Unit::JoulesPerGop,
            Metric::DutyPim | Metric::DutyCpu => Unit::Fraction,
        }
    }

    /// Column name with unit suffix, e.g. `tp_pim_gops`.
    pub fn column(self) -> String {
        format!("{}_{}", self.name(), self.unit().suffix())
    }
}

impl std::str::FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Metric::ALL
            .into_iter()
            .find(|m| m.name() == s || m.column() == s)
            .ok_or_else(|| format!("unknown metric `{s}`"))
    }
}

/// Serializes an unbounded throughput as `null`.
pub mod unbounded {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_infinite() {
            s.serialize_none()
        } else {
            s.serialize_f64(*v)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
    }
}
