//! Document-level operations shared by the CLI and the HTTP service, so both
//! produce identical numbers for identical documents.

use serde::{Deserialize, Serialize};

use super::config::{engine_field_error, sweep_field, ConfigDocument, ConfigError};
use crate::engine::{self, EvalResult, Metric};
use crate::quantities::{MachineConfig, WorkloadProfile};
use crate::sweep::{self, AxisSpec, Crossover, IsoLine, Plane, SweepGrid, Window};

/// Display-unit columns of one result. Unbounded values are `None`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Columns {
    pub tp_pim_gops: Option<f64>,
    pub tp_cpu_gops: Option<f64>,
    pub tp_combined_gops: Option<f64>,
    pub p_pim_w: Option<f64>,
    pub p_cpu_w: Option<f64>,
    pub p_combined_w: Option<f64>,
    pub epc_pim_jgop: Option<f64>,
    pub epc_cpu_jgop: Option<f64>,
    pub epc_combined_jgop: Option<f64>,
}

/// The fixed CSV/JSON column contract, in order.
pub const COLUMNS: [Metric; 9] = [
    Metric::TpPim,
    Metric::TpCpu,
    Metric::TpCombined,
    Metric::PPim,
    Metric::PCpu,
    Metric::PCombined,
    Metric::EpcPim,
    Metric::EpcCpu,
    Metric::EpcCombined,
];

pub fn display(metric: Metric, r: &EvalResult) -> Option<f64> {
    let v = metric.unit().from_si(metric.of(r));
    v.is_finite().then_some(v)
}

impl Columns {
    pub fn of(r: &EvalResult) -> Self {
        let d = |m| display(m, r);
        Self {
            tp_pim_gops: d(Metric::TpPim),
            tp_cpu_gops: d(Metric::TpCpu),
            tp_combined_gops: d(Metric::TpCombined),
            p_pim_w: d(Metric::PPim),
            p_cpu_w: d(Metric::PCpu),
            p_combined_w: d(Metric::PCombined),
            epc_pim_jgop: d(Metric::EpcPim),
            epc_cpu_jgop: d(Metric::EpcCpu),
            epc_combined_jgop: d(Metric::EpcCombined),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub machine: MachineConfig,
    pub workload: WorkloadProfile,
    pub result: EvalResult,
    pub columns: Columns,
    pub warnings: Vec<String>,
}

pub fn evaluate_document(doc: &ConfigDocument) -> Result<Evaluation, ConfigError> {
    let r = doc.resolve()?;
    let result =
        engine::evaluate(&r.machine, &r.workload).map_err(|e| ConfigError::Invalid(vec![engine_field_error(&e)]))?;
    Ok(Evaluation {
        machine: r.machine,
        workload: r.workload,
        columns: Columns::of(&result),
        result,
        warnings: r.warnings,
    })
}

/// One metric over every sweep cell; `None` where it is unbounded.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricColumn {
    pub column: String,
    pub values: Vec<Option<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepOutput {
    pub machine: MachineConfig,
    pub workload: WorkloadProfile,
    pub grid: SweepGrid,
    /// Requested metrics in display units, in request order.
    pub metrics: Vec<MetricColumn>,
    pub warnings: Vec<String>,
}

/// Sweeps the document's axes, or `axes` when given.
pub fn sweep_document(doc: &ConfigDocument, axes: Option<Vec<AxisSpec>>) -> Result<SweepOutput, ConfigError> {
    let r = doc.resolve()?;
    let axes = match axes {
        Some(a) if !a.is_empty() => a,
        _ => doc.axes()?,
    };
    if axes.is_empty() {
        return Err(ConfigError::field("sweep.axes", "at least one axis is required"));
    }
    let grid = sweep::grid_sweep(&r.machine, &r.workload, &axes).map_err(|e| match e {
        sweep::SweepError::Cell { coords, source } => {
            let f = engine_field_error(&source);
            ConfigError::field("sweep", format!("at {coords:?}: {}", f.message))
        }
        other => ConfigError::Invalid(vec![sweep_field(other)]),
    })?;
    let wanted: Vec<Metric> = match doc.sweep.as_ref().map(|s| s.metrics.clone()) {
        Some(m) if !m.is_empty() => m,
        _ => COLUMNS.to_vec(),
    };
    let metrics = wanted
        .into_iter()
        .map(|m| MetricColumn {
            column: m.column(),
            values: grid.cells.iter().map(|c| display(m, &c.result)).collect(),
        })
        .collect();
    Ok(SweepOutput { machine: r.machine, workload: r.workload, grid, metrics, warnings: r.warnings })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContourOutput {
    pub machine: MachineConfig,
    pub plane: Plane,
    pub window: Window,
    pub lines: Vec<IsoLine>,
    /// Present for the (XBs, BW) plane.
    pub crossover: Option<Crossover>,
    pub warnings: Vec<String>,
}

/// Iso-lines for each requested level, plus the crossover in the
/// (XBs, BW) plane. The (XBs, BW) plane uses the workload's `cc` and DIOs.
pub fn contour_document(doc: &ConfigDocument) -> Result<ContourOutput, ConfigError> {
    let c = doc.contour.as_ref().ok_or_else(|| ConfigError::field("contour", "a contour section is required"))?;
    if c.levels.is_empty() {
        return Err(ConfigError::field("contour.levels", "at least one level is required"));
    }
    let window = c.window.unwrap_or_else(|| Window::default_for(c.plane));
    let (machine, workload, warnings) = match c.plane {
        Plane::CcDio => {
            let m = doc.machine_config()?;
            (m, None, m.typical_range_warnings())
        }
        Plane::XbsBw => {
            let r = doc.resolve()?;
            (r.machine, Some(r.workload), r.warnings)
        }
    };
    let mut lines = Vec::new();
    let mut errors = Vec::new();
    for (i, &level) in c.levels.iter().enumerate() {
        let si = c.metric.unit().to_si(level);
        let line = match &workload {
            None => sweep::iso_line_cc_dio(&machine, c.metric, si, &window),
            Some(w) => sweep::iso_line_xbs_bw(&machine, w.cc(), w.dio_combined, c.metric, si, &window),
        };
        match line {
            Ok(l) => lines.push(l),
            Err(e) => errors.push(crate::quantities::FieldError::new(format!("contour.levels[{i}]"), e.to_string())),
        }
    }
    if !errors.is_empty() {
        return Err(ConfigError::Invalid(errors));
    }
    let crossover = match &workload {
        Some(w) => Some(
            sweep::crossover_xbs_bw(&machine, w.cc(), w.dio_cpu, w.dio_combined, &window)
                .map_err(|e| ConfigError::Invalid(vec![sweep_field(e)]))?,
        ),
        None => None,
    };
    Ok(ContourOutput { machine, plane: c.plane, window, lines, crossover, warnings })
}

/// Throughput and power crossovers for the document's workload.
pub fn crossover_document(doc: &ConfigDocument, window: Option<Window>) -> Result<Crossover, ConfigError> {
    let r = doc.resolve()?;
    let window = window.or_else(|| doc.contour.as_ref().and_then(|c| c.window)).unwrap_or_else(Window::xbs_bw);
    sweep::crossover_xbs_bw(&r.machine, r.workload.cc(), r.workload.dio_cpu, r.workload.dio_combined, &window)
        .map_err(|e| ConfigError::Invalid(vec![sweep_field(e)]))
}
