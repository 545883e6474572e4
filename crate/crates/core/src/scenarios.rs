//! Named reproductions of worked examples and case studies, each with the
//! printed values it must reproduce.
//!
//! A scenario is plain data: machine overrides, a workload recipe and a list
//! of expectations. Scenario files use the same JSON shape as the catalog.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::complexity::{self, ComplexitySpec, LayoutClass, OpKind, FLOATPIM_PUBLISHED_CC, HADAMARD_CC};
use crate::engine::{self, EvalResult};
use crate::interface::MachineOverrides;
use crate::quantities::{to_gops, to_j_per_gop, FieldError, MachineConfig, WorkloadProfile, GIGA};
use crate::usecases::UseCase;

/// Where a workload's cycle count comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CycleSource {
    Fixed {
        oc: f64,
        #[serde(default)]
        pac: f64,
    },
    Compiled(ComplexitySpec),
    Fipdp {
        w_in: u32,
        w_acc: u32,
        rows: u32,
    },
    Convolution {
        kernel: u32,
        width: u32,
        rows: u32,
    },
    /// The published bfloat16 average, not the formula average.
    FloatpimPublished,
    Reduction {
        oc_add: f64,
        width: u32,
        rows: u32,
    },
}

impl CycleSource {
    /// `(oc, pac)` in cycles.
    pub fn cycles(&self) -> Result<(f64, f64), String> {
        let err = |e: complexity::ComplexityError| e.to_string();
        Ok(match *self {
            CycleSource::Fixed { oc, pac } => (oc, pac),
            CycleSource::Compiled(spec) => {
                let c = complexity::compile(&spec).map_err(err)?;
                (c.oc, c.pac)
            }
            CycleSource::Fipdp { w_in, w_acc, rows } => (complexity::fipdp_cc(w_in, w_acc, rows).map_err(err)?, 0.0),
            CycleSource::Convolution { kernel, width, rows } => {
                (complexity::convolution_cc(kernel, width, rows).map_err(err)?.cycles, 0.0)
            }
            CycleSource::FloatpimPublished => (FLOATPIM_PUBLISHED_CC, 0.0),
            CycleSource::Reduction { oc_add, width, rows } => {
                (complexity::reduction_cc(oc_add, width, rows).map_err(err)?, 0.0)
            }
        })
    }
}

/// Bits moved per computation: a literal or a use case over `n` records.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DioSource {
    Bits { bits: f64 },
    UseCase { usecase: UseCase, n: f64 },
}

impl DioSource {
    pub fn bits(&self) -> Result<f64, String> {
        match self {
            DioSource::Bits { bits } => Ok(*bits),
            DioSource::UseCase { usecase, n } => usecase.dio_per_computation(*n).map_err(|e| e.to_string()),
        }
    }
}

/// Recipe for a [`WorkloadProfile`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorkloadRecipe {
    pub cycles: CycleSource,
    pub dio_cpu: DioSource,
    pub dio_combined: DioSource,
}

impl WorkloadRecipe {
    pub fn build(&self, label: &str) -> Result<WorkloadProfile, Vec<FieldError>> {
        let mut errors = Vec::new();
        let mut take = |field: &str, r: Result<f64, String>| match r {
            Ok(v) => v,
            Err(message) => {
                errors.push(FieldError::new(format!("workload.{field}"), message));
                f64::NAN
            }
        };
        let (oc, pac) = match self.cycles.cycles() {
            Ok(c) => c,
            Err(e) => (take("cycles", Err(e)), 0.0),
        };
        let dio_cpu = take("dio_cpu", self.dio_cpu.bits());
        let dio_combined = take("dio_combined", self.dio_combined.bits());
        if !errors.is_empty() {
            return Err(errors);
        }
        let w = WorkloadProfile::new(label, oc, pac, dio_cpu, dio_combined);
        let invalid = w.field_errors();
        if invalid.is_empty() {
            Ok(w)
        } else {
            Err(invalid.into_iter().map(|e| FieldError::new(format!("workload.{}", e.field), e.message)).collect())
        }
    }
}

/// A reported quantity, in display units (GOPS, W, J/GOP, cycles, bits).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    TpPim,
    TpCpu,
    TpCpuCombined,
    TpCombined,
    PPim,
    PCpu,
    PCombined,
    EpcPim,
    EpcCpu,
    EpcCombined,
    Cc,
    /// PIM computations completed per cycle.
    OpsPerCycle,
    /// PIM-pure GOPS per watt.
    PimGopsPerWatt,
    DioCpu,
    DioCombined,
}

impl Quantity {
    pub fn value(self, m: &MachineConfig, w: &WorkloadProfile, r: &EvalResult) -> f64 {
        match self {
            Quantity::TpPim => to_gops(r.tp_pim),
            Quantity::TpCpu => to_gops(r.tp_cpu),
            Quantity::TpCpuCombined => to_gops(r.tp_cpu_combined),
            Quantity::TpCombined => to_gops(r.tp_combined),
            Quantity::PPim => r.p_pim,
            Quantity::PCpu => r.p_cpu,
            Quantity::PCombined => r.p_combined,
            Quantity::EpcPim => to_j_per_gop(r.epc_pim),
            Quantity::EpcCpu => to_j_per_gop(r.epc_cpu),
            Quantity::EpcCombined => to_j_per_gop(r.epc_combined),
            Quantity::Cc => w.cc(),
            Quantity::OpsPerCycle => m.computations_per_batch() / w.cc(),
            Quantity::PimGopsPerWatt => to_gops(r.tp_pim) / r.p_pim,
            Quantity::DioCpu => w.dio_cpu,
            Quantity::DioCombined => w.dio_combined,
        }
    }
}

/// How a printed value is compared.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    /// Round to this many decimals (half away from zero), then exact match.
    Decimals(u32),
    /// Relative difference at most this.
    Relative(f64),
    AtLeast,
    AtMost,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expectation {
    pub quantity: Quantity,
    pub value: f64,
    pub check: Check,
    pub citation: String,
}

/// `paper` compares at printed precision; `rel:x` replaces every rounded
/// comparison with a relative tolerance `x`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ToleranceMode {
    #[default]
    Paper,
    Relative(f64),
}

impl FromStr for ToleranceMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "paper" {
            return Ok(ToleranceMode::Paper);
        }
        let tol = s
            .strip_prefix("rel:")
            .or_else(|| s.strip_prefix("relative:"))
            .ok_or_else(|| format!("unknown tolerance mode `{s}` (expected paper or rel:<x>)"))?;
        match tol.parse::<f64>() {
            Ok(t) if t >= 0.0 && t.is_finite() => Ok(ToleranceMode::Relative(t)),
            _ => Err(format!("relative tolerance must be a non-negative number (got `{tol}`)")),
        }
    }
}

impl fmt::Display for ToleranceMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ToleranceMode::Paper => f.write_str("paper"),
            ToleranceMode::Relative(t) => write!(f, "rel:{t}"),
        }
    }
}

pub fn round_to(x: f64, decimals: u32) -> f64 {
    let s = 10f64.powi(decimals as i32);
    (x * s).round() / s
}

fn within(actual: f64, expected: f64, tol: f64) -> bool {
    (actual - expected).abs() <= tol * expected.abs()
}

impl Expectation {
    /// Returns the value actually compared and whether it passes.
    pub fn judge(&self, actual: f64, mode: ToleranceMode) -> (f64, bool) {
        match (self.check, mode) {
            (Check::Decimals(d), ToleranceMode::Paper) => {
                let shown = round_to(actual, d);
                (shown, shown == self.value)
            }
            (Check::Decimals(_), ToleranceMode::Relative(t)) | (Check::Relative(_), ToleranceMode::Relative(t)) => {
                (actual, within(actual, self.value, t))
            }
            (Check::Relative(t), ToleranceMode::Paper) => (actual, within(actual, self.value, t)),
            (Check::AtLeast, _) => (actual, actual >= self.value),
            (Check::AtMost, _) => (actual, actual <= self.value),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub id: String,
    pub description: String,
    #[serde(default, skip_serializing_if = "MachineOverrides::is_empty")]
    pub machine: MachineOverrides,
    pub workload: WorkloadRecipe,
    #[serde(default)]
    pub expectations: Vec<Expectation>,
}

impl Scenario {
    pub fn machine_config(&self) -> MachineConfig {
        self.machine.apply(MachineConfig::default())
    }

    pub fn workload_profile(&self) -> Result<WorkloadProfile, Vec<FieldError>> {
        self.workload.build(&self.id)
    }

    /// Every distinct citation, in order of first use.
    pub fn citations(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for e in &self.expectations {
            if !out.contains(&e.citation.as_str()) {
                out.push(&e.citation);
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    pub quantity: Quantity,
    pub expected: f64,
    pub actual: f64,
    /// The value compared: rounded in paper mode, otherwise `actual`.
    pub compared: f64,
    pub check: Check,
    pub citation: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub id: String,
    pub description: String,
    pub tolerance_mode: ToleranceMode,
    pub machine: MachineConfig,
    pub workload: WorkloadProfile,
    pub result: EvalResult,
    pub outcomes: Vec<Outcome>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ScenarioError {
    #[error("unknown scenario `{0}`")]
    Unknown(String),
    #[error("scenario `{id}` is invalid: {}", .errors.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Invalid { id: String, errors: Vec<FieldError> },
}

/// Evaluates a scenario and checks every expectation.
pub fn run(s: &Scenario, mode: ToleranceMode) -> Result<ScenarioReport, ScenarioError> {
    let invalid = |errors: Vec<FieldError>| ScenarioError::Invalid { id: s.id.clone(), errors };
    let m = s.machine_config();
    m.validate().map_err(|e| invalid(vec![e]))?;
    let w = s.workload_profile().map_err(invalid)?;
    let result = engine::evaluate(&m, &w).map_err(|e| invalid(vec![FieldError::new("workload", e.to_string())]))?;
    let outcomes: Vec<Outcome> = s
        .expectations
        .iter()
        .map(|e| {
            let actual = e.quantity.value(&m, &w, &result);
            let (compared, pass) = e.judge(actual, mode);
            Outcome {
                quantity: e.quantity,
                expected: e.value,
                actual,
                compared,
                check: e.check,
                citation: e.citation.clone(),
                pass,
            }
        })
        .collect();
    let pass = outcomes.iter().all(|o| o.pass);
    Ok(ScenarioReport {
        id: s.id.clone(),
        description: s.description.clone(),
        tolerance_mode: mode,
        machine: m,
        workload: w,
        result,
        outcomes,
        pass,
    })
}

/// Runs a catalog scenario by id.
pub fn run_scenario(id: &str, mode: ToleranceMode) -> Result<ScenarioReport, ScenarioError> {
    let s = find(id).ok_or_else(|| ScenarioError::Unknown(id.to_string()))?;
    run(&s, mode)
}

pub fn find(id: &str) -> Option<Scenario> {
    catalog().into_iter().find(|s| s.id == id)
}

/// Catalog entry summary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub id: String,
    pub description: String,
    pub citations: Vec<String>,
    pub expectations: usize,
}

pub fn list_scenarios() -> Vec<CatalogEntry> {
    catalog()
        .iter()
        .map(|s| CatalogEntry {
            id: s.id.clone(),
            description: s.description.clone(),
            citations: s.citations().into_iter().map(String::from).collect(),
            expectations: s.expectations.len(),
        })
        .collect()
}

// Catalog construction.

const GBPS: f64 = GIGA;

fn expect(quantity: Quantity, value: f64, check: Check, citation: &str) -> Expectation {
    Expectation { quantity, value, check, citation: citation.to_string() }
}

fn dec(quantity: Quantity, value: f64, decimals: u32, citation: &str) -> Expectation {
    expect(quantity, value, Check::Decimals(decimals), citation)
}

fn bits(b: f64) -> DioSource {
    DioSource::Bits { bits: b }
}

fn fixed(cc: f64) -> CycleSource {
    CycleSource::Fixed { oc: cc, pac: 0.0 }
}

fn aligned(op: OpKind, width: u32) -> CycleSource {
    CycleSource::Compiled(ComplexitySpec::new(op, width, LayoutClass::ParallelAligned))
}

struct Builder {
    id: String,
    description: String,
    machine: MachineOverrides,
    workload: WorkloadRecipe,
    expectations: Vec<Expectation>,
}

fn scenario(id: &str, description: &str, cycles: CycleSource, dio_cpu: DioSource, dio_combined: DioSource) -> Builder {
    Builder {
        id: id.into(),
        description: description.into(),
        machine: MachineOverrides::default(),
        workload: WorkloadRecipe { cycles, dio_cpu, dio_combined },
        expectations: Vec::new(),
    }
}

impl Builder {
    fn machine(mut self, f: impl FnOnce(&mut MachineOverrides)) -> Self {
        f(&mut self.machine);
        self
    }

    fn expect(mut self, e: Expectation) -> Self {
        self.expectations.push(e);
        self
    }

    fn done(self) -> Scenario {
        Scenario {
            id: self.id,
            description: self.description,
            machine: self.machine,
            workload: self.workload,
            expectations: self.expectations,
        }
    }
}

fn shifted_vector_add(id: &str, citation: &str) -> Scenario {
    let spec = ComplexitySpec::new(OpKind::Add, 16, LayoutClass::GatheredUnaligned).rows(512).approximate();
    scenario(
        id,
        "16-bit shifted vector-add, gathered unaligned, default machine",
        CycleSource::Compiled(spec),
        bits(48.0),
        bits(16.0),
    )
    .expect(dec(Quantity::Cc, 656.0, 0, citation))
    .expect(dec(Quantity::TpPim, 160.0, 0, citation))
    .expect(dec(Quantity::TpCpu, 20.8, 1, citation))
    .expect(dec(Quantity::TpCpuCombined, 62.5, 1, citation))
    .expect(dec(Quantity::TpCombined, 44.9, 1, citation))
    .expect(dec(Quantity::PPim, 10.5, 1, citation))
    .expect(dec(Quantity::PCpu, 15.0, 0, citation))
    .expect(dec(Quantity::PCombined, 13.7, 1, citation))
    .expect(dec(Quantity::EpcCpu, 0.72, 2, citation))
    .expect(dec(Quantity::EpcCombined, 0.31, 2, citation))
    .done()
}

fn table3() -> Vec<Scenario> {
    const CITE: &str = "Table 3, Data Transfer Throughput";
    [
        ("table3/cpu-pure", "CPU pure, 48 bits per computation", bits(48.0), 20.8),
        ("table3/inputs-only", "Inputs only, 32 bits per computation", bits(32.0), 31.3),
        ("table3/compaction", "Compaction, 16 bits per computation", bits(16.0), 62.5),
        (
            "table3/filter",
            "Filter of 200-bit records at 1% selectivity with a bit vector",
            DioSource::UseCase { usecase: UseCase::Filter1 { s: 200.0, p: 0.01 }, n: 1e6 },
            333.3,
        ),
    ]
    .into_iter()
    .map(|(id, description, dio, tp)| {
        let dio_bits = dio.bits().expect("catalog DIO");
        scenario(id, description, fixed(0.0), dio.clone(), dio)
            .expect(dec(Quantity::DioCombined, dio_bits, 0, CITE))
            .expect(dec(Quantity::TpCpu, tp, 1, CITE))
            .done()
    })
    .collect()
}

fn table6() -> Vec<Scenario> {
    const CITE: &str = "Table 6, Throughput of Binary-Operations Examples";
    [
        ("table6/or16", "16-bit OR", aligned(OpKind::Or, 16), 32.0, 48.0, 16.0, (3277.0, 0), 20.8, 61.3, (14.9, 1)),
        ("table6/add16", "16-bit ADD", aligned(OpKind::Add, 16), 144.0, 48.0, 16.0, (728.0, 0), 20.8, 57.6, (14.6, 1)),
        (
            "table6/mult16",
            "16-bit MULTIPLY",
            aligned(OpKind::MultLowApprox, 16),
            1600.0,
            48.0,
            16.0,
            (65.5, 1),
            20.8,
            32.0,
            (12.8, 1),
        ),
        (
            "table6/mult32",
            "32-bit MULTIPLY",
            aligned(OpKind::MultLowApprox, 32),
            6400.0,
            96.0,
            32.0,
            (16.4, 1),
            10.4,
            10.7,
            (12.0, 0),
        ),
        (
            "table6/mult64",
            "64-bit MULTIPLY",
            aligned(OpKind::MultLowApprox, 64),
            25600.0,
            192.0,
            64.0,
            (4.1, 1),
            5.2,
            3.2,
            (11.4, 1),
        ),
    ]
    .into_iter()
    .map(|(id, op, cycles, cc, dio_cpu, dio_comb, tp_pim, tp_cpu, tp_comb, p_comb)| {
        scenario(id, &format!("{op} on aligned rows, default machine"), cycles, bits(dio_cpu), bits(dio_comb))
            .expect(dec(Quantity::Cc, cc, 0, CITE))
            .expect(dec(Quantity::TpPim, tp_pim.0, tp_pim.1, CITE))
            .expect(dec(Quantity::TpCpu, tp_cpu, 1, CITE))
            .expect(dec(Quantity::TpCombined, tp_comb, 1, CITE))
            .expect(dec(Quantity::PPim, 10.5, 1, CITE))
            .expect(dec(Quantity::PCpu, 15.0, 1, CITE))
            .expect(dec(Quantity::PCombined, p_comb.0, p_comb.1, CITE))
            .done()
    })
    .collect()
}

fn table7() -> Vec<Scenario> {
    const CITE: &str = "Table 7, Throughput of the Hadamard Product";
    [
        (512.0, 512.0, 369.0, 37.0, 23.0),
        (1024.0, 512.0, 738.0, 74.0, 34.0),
        (4096.0, 1024.0, 5907.0, 591.0, 57.0),
        (16384.0, 1024.0, 23630.0, 2363.0, 61.0),
    ]
    .into_iter()
    .map(|(xbs, rows, per_cycle, tp_pim, tp_comb)| {
        scenario(
            &format!("table7/hadamard-{xbs}"),
            &format!("Hadamard product, 8-bit pixels, {xbs} XBs × {rows} rows"),
            aligned(OpKind::Custom(HADAMARD_CC), 8),
            bits(32.0),
            bits(16.0),
        )
        .machine(|m| {
            m.xbs = Some(xbs);
            m.rows = Some(rows);
        })
        .expect(dec(Quantity::Cc, 710.0, 0, CITE))
        .expect(dec(Quantity::OpsPerCycle, per_cycle, 0, CITE))
        .expect(dec(Quantity::TpPim, tp_pim, 0, CITE))
        .expect(dec(Quantity::TpCpu, 31.0, 0, CITE))
        .expect(dec(Quantity::TpCombined, tp_comb, 0, CITE))
        .done()
    })
    .collect()
}

fn table8() -> Vec<Scenario> {
    const CITE: &str = "Table 8, Convolution Computation Complexity";
    [(3, 512, 69296.0), (3, 1024, 77488.0), (5, 512, 188592.0), (5, 1024, 204976.0)]
        .into_iter()
        .map(|(p, rows, cc)| {
            scenario(
                &format!("table8/conv-p{p}-r{rows}"),
                &format!("{p}×{p} convolution of 8-bit pixels, {rows} rows"),
                CycleSource::Convolution { kernel: p, width: 8, rows },
                bits(16.0),
                bits(16.0),
            )
            .machine(|m| m.rows = Some(f64::from(rows)))
            .expect(dec(Quantity::Cc, cc, 0, CITE))
            .done()
        })
        .collect()
}

fn table9() -> Vec<Scenario> {
    const CITE: &str = "Table 9, Convolution Throughput";
    [
        (3, 1024.0, 14.0, 1.4, 1.3),
        (3, 8192.0, 108.0, 10.8, 9.2),
        (3, 65536.0, 866.0, 86.6, 36.3),
        (5, 1024.0, 5.0, 0.5, 0.5),
        (5, 8192.0, 41.0, 4.1, 3.8),
        (5, 65536.0, 327.0, 32.7, 21.5),
    ]
    .into_iter()
    .map(|(p, xbs, per_cycle, tp_pim, tp_comb)| {
        scenario(
            &format!("table9/conv-p{p}-{xbs}"),
            &format!("{p}×{p} convolution, {xbs} XBs × 1024 rows, no transfer reduction"),
            CycleSource::Convolution { kernel: p, width: 8, rows: 1024 },
            bits(16.0),
            bits(16.0),
        )
        .machine(|m| m.xbs = Some(xbs))
        .expect(dec(Quantity::OpsPerCycle, per_cycle, 0, CITE))
        .expect(dec(Quantity::TpPim, tp_pim, 1, CITE))
        .expect(dec(Quantity::TpCpu, 63.0, 0, CITE))
        .expect(dec(Quantity::TpCombined, tp_comb, 1, CITE))
        .done()
    })
    .collect()
}

fn table10() -> Vec<Scenario> {
    const CITE: &str = "Table 10, FloatPIM parameters vs. defaults";
    let base = |id: &str, description: &str| {
        scenario(id, description, CycleSource::FloatpimPublished, bits(48.0), bits(0.0)).machine(|m| {
            m.xbs = Some(65536.0);
            m.rows = Some(1024.0);
        })
    };
    vec![
        base("table10/floatpim", "bfloat16 average operation with FloatPIM cycle time and energy")
            .machine(|m| {
                m.cycle_time = Some(1.1e-9);
                m.ebit_pim = Some(2.9e-16);
            })
            .expect(dec(Quantity::OpsPerCycle, 199432.0, 0, CITE))
            .expect(dec(Quantity::TpPim, 181302.0, 0, CITE))
            .expect(dec(Quantity::PPim, 18.0, 0, CITE))
            .expect(expect(Quantity::PimGopsPerWatt, 10247.0, Check::Relative(0.005), CITE))
            .done(),
        base("table10/floatpim-default", "bfloat16 average operation with default cycle time and energy")
            .expect(dec(Quantity::OpsPerCycle, 199432.0, 0, CITE))
            .expect(dec(Quantity::TpPim, 19943.0, 0, CITE))
            .expect(dec(Quantity::PPim, 671.0, 0, CITE))
            .expect(dec(Quantity::PimGopsPerWatt, 30.0, 0, CITE))
            .done(),
    ]
}

fn fipdp() -> Vec<Scenario> {
    const CITE: &str = "FiPDP case study: about 6 GOPS, 100 GOPS, CPU pure 31 GOPS";
    const CITE_CC: &str = "FiPDP case study: approximately 4200 cycles";
    [(512.0, 512.0, 6.0), (4096.0, 1024.0, 100.0)]
        .into_iter()
        .map(|(xbs, rows, tp)| {
            scenario(
                &format!("fipdp/xbs{xbs}-r{rows}"),
                &format!("8-bit dot product with 32-bit accumulation, {xbs} XBs × {rows} rows"),
                CycleSource::Fipdp { w_in: 8, w_acc: 32, rows: 512 },
                bits(32.0),
                DioSource::UseCase { usecase: UseCase::Reduction1 { s: 32.0, s1: 32.0, r: rows }, n: xbs * rows },
            )
            .machine(|m| {
                m.xbs = Some(xbs);
                m.rows = Some(rows);
            })
            .expect(expect(Quantity::Cc, 4200.0, Check::Relative(0.01), CITE_CC))
            .expect(dec(Quantity::TpPim, tp, 0, CITE))
            .expect(dec(Quantity::TpCombined, tp, 0, CITE))
            .expect(dec(Quantity::TpCpu, 31.0, 0, CITE))
            .done()
        })
        .collect()
}

fn figure4() -> Vec<Scenario> {
    const CITE: &str = "Figure 4 discussion (Section 6.2)";
    const T6: &str = "Table 6, Throughput of Binary-Operations Examples";
    let compaction = |id: &str, what: &str, op: OpKind, xbs: f64, bw_gbps: f64| {
        scenario(
            id,
            &format!("Compaction, 16-bit {what}, {xbs} XBs, {bw_gbps} Gbps"),
            aligned(op, 16),
            bits(48.0),
            bits(16.0),
        )
        .machine(|m| {
            m.xbs = Some(xbs);
            m.bw = Some(bw_gbps * GBPS);
        })
    };
    let filter = |id: &str, xbs: f64, bw_gbps: f64| {
        scenario(
            id,
            &format!("Filter of 200-bit records at 1%, 64-bit compare in PIM, {xbs} XBs, {bw_gbps} Gbps"),
            aligned(OpKind::Add, 64),
            DioSource::UseCase { usecase: UseCase::CpuPure { s: 200.0 }, n: 1e6 },
            DioSource::UseCase { usecase: UseCase::Filter1 { s: 200.0, p: 0.01 }, n: 1e6 },
        )
        .machine(|m| {
            m.xbs = Some(xbs);
            m.bw = Some(bw_gbps * GBPS);
        })
    };
    const FILTER: &str = "Filter discussion: DIO from 200 to 3 bits per computation";
    const T3: &str = "Table 3, Data Transfer Throughput";
    let at_1t = |b: Builder| {
        b.expect(dec(Quantity::DioCombined, 3.0, 0, FILTER))
            .expect(dec(Quantity::TpCpuCombined, 333.3, 1, T3))
            .expect(dec(Quantity::TpCpu, 5.0, 1, FILTER))
            .done()
    };
    let reduction = ComplexitySpec::new(OpKind::Add, 16, LayoutClass::ReductionPerXb).rows(1024);

    vec![
        compaction("fig4/1a-or16", "OR", OpKind::Or, 1024.0, 1000.0)
            .expect(dec(Quantity::TpPim, 3277.0, 0, T6))
            .expect(dec(Quantity::TpCombined, 61.3, 1, T6))
            .done(),
        compaction("fig4/1b-add16", "ADD", OpKind::Add, 1024.0, 1000.0)
            .expect(dec(Quantity::TpPim, 728.0, 0, CITE))
            .expect(dec(Quantity::TpCpuCombined, 63.0, 0, CITE))
            .expect(dec(Quantity::TpCombined, 57.6, 1, T6))
            .done(),
        compaction("fig4/1c-mult16", "MULTIPLY", OpKind::MultLowApprox, 1024.0, 1000.0)
            .expect(dec(Quantity::TpPim, 65.5, 1, T6))
            .expect(dec(Quantity::TpCombined, 32.0, 1, T6))
            .done(),
        compaction("fig4/1d-add16-pim", "ADD", OpKind::Add, 16384.0, 1000.0)
            .expect(expect(Quantity::TpCombined, 61.0, Check::AtLeast, CITE))
            .expect(expect(Quantity::TpCombined, 62.5, Check::AtMost, CITE))
            .done(),
        compaction("fig4/1e-add16-cpu", "ADD", OpKind::Add, 1024.0, 16000.0)
            .expect(expect(Quantity::TpCombined, 62.5, Check::AtLeast, CITE))
            .done(),
        compaction("fig4/1f-add16-pim-cpu", "ADD", OpKind::Add, 16384.0, 16000.0)
            .expect(expect(Quantity::TpCombined, 62.5, Check::AtLeast, CITE))
            .done(),
        shifted_vector_add("fig4/2-shifted-vector-add", "Shifted vector-add example (Sections 4.1, 4.3, 5.3)"),
        at_1t(filter("fig4/3a-filter", 1024.0, 1000.0)),
        filter("fig4/3b-filter-pim", 16384.0, 1000.0).expect(dec(Quantity::TpCpuCombined, 333.3, 1, T3)).done(),
        filter("fig4/3c-filter-cpu", 1024.0, 16000.0).expect(dec(Quantity::TpCpu, 80.0, 0, FILTER)).done(),
        filter("fig4/3d-filter-pim-cpu", 16384.0, 16000.0).expect(dec(Quantity::TpCpu, 80.0, 0, FILTER)).done(),
        scenario(
            "fig4/4-reduction",
            "Sum of a 16-bit vector, per-crossbar reduction, partial sums to the CPU",
            CycleSource::Compiled(reduction),
            bits(16.0),
            DioSource::UseCase { usecase: UseCase::Reduction1 { s: 16.0, s1: 16.0, r: 1024.0 }, n: 1024.0 * 1024.0 },
        )
        .expect(dec(Quantity::Cc, 10.0 * (144.0 + 16.0) + 1023.0, 0, "Table 2 reduction row with ph = 10, R = 1024"))
        .expect(dec(Quantity::DioCombined, 16.0 / 1024.0, 6, "Reduction discussion: one element per XB, p = 1/R"))
        .done(),
    ]
}

/// The full catalog, in a stable order.
pub fn catalog() -> Vec<Scenario> {
    let mut out = vec![shifted_vector_add(
        "walkthrough/shifted-vector-add",
        "Shifted vector-add example (Sections 4.1, 4.3, 5.3)",
    )];
    out.extend(table3());
    out.extend(table6());
    out.extend(table7());
    out.extend(table8());
    out.extend(table9());
    out.extend(table10());
    out.extend(fipdp());
    out.extend(figure4());
    out
}
