//! JSON configuration documents.
//!
//! A document has an optional `machine` section (overrides on top of the
//! defaults, or on top of a referenced scenario's machine), at most one of
//! `workload` or `scenario`, and optional `sweep` and `contour` sections.
//! Unknown keys are rejected everywhere.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::units::{self, Dimension, NumOrText};
use crate::complexity::ComplexitySpec;
use crate::engine::{EngineError, Metric};
use crate::quantities::{FieldError, MachineConfig, WorkloadProfile};
use crate::scenarios;
use crate::sweep::{AxisSpec, ParamId, Plane, Scale, SweepError, Window};
use crate::usecases::UseCase;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<FieldError>),
}

impl ConfigError {
    pub fn field(field: impl Into<String>, message: impl Into<String>) -> Self {
        ConfigError::Invalid(vec![FieldError::new(field, message)])
    }

    /// The error as a `{field, message}` list.
    pub fn errors(&self) -> Vec<FieldError> {
        match self {
            ConfigError::Syntax { .. } => vec![FieldError::new("$", self.to_string())],
            ConfigError::Invalid(list) => list.clone(),
        }
    }
}

fn prefixed(prefix: &str, errors: Vec<FieldError>) -> Vec<FieldError> {
    errors.into_iter().map(|e| FieldError::new(format!("{prefix}.{}", e.field), e.message)).collect()
}

/// Machine parameters to override. Values may be unit-suffixed strings.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MachineOverrides {
    #[serde(default, deserialize_with = "units::plain", skip_serializing_if = "Option::is_none")]
    pub xbs: Option<f64>,
    #[serde(default, deserialize_with = "units::plain", skip_serializing_if = "Option::is_none")]
    pub rows: Option<f64>,
    #[serde(default, deserialize_with = "units::plain", skip_serializing_if = "Option::is_none")]
    pub cols: Option<f64>,
    #[serde(default, deserialize_with = "units::time", skip_serializing_if = "Option::is_none")]
    pub cycle_time: Option<f64>,
    #[serde(default, deserialize_with = "units::energy", skip_serializing_if = "Option::is_none")]
    pub ebit_pim: Option<f64>,
    #[serde(default, deserialize_with = "units::bandwidth", skip_serializing_if = "Option::is_none")]
    pub bw: Option<f64>,
    #[serde(default, deserialize_with = "units::energy", skip_serializing_if = "Option::is_none")]
    pub ebit_cpu: Option<f64>,
    #[serde(default, deserialize_with = "units::power", skip_serializing_if = "Option::is_none")]
    pub tdp_pim: Option<f64>,
    #[serde(default, deserialize_with = "units::power", skip_serializing_if = "Option::is_none")]
    pub tdp_cpu: Option<f64>,
}

impl MachineOverrides {
    pub fn is_empty(&self) -> bool {
        *self == Self::default()
    }

    pub fn apply(&self, base: MachineConfig) -> MachineConfig {
        MachineConfig {
            xbs: self.xbs.unwrap_or(base.xbs),
            rows: self.rows.unwrap_or(base.rows),
            cols: self.cols.unwrap_or(base.cols),
            cycle_time: self.cycle_time.unwrap_or(base.cycle_time),
            ebit_pim: self.ebit_pim.unwrap_or(base.ebit_pim),
            bw: self.bw.unwrap_or(base.bw),
            ebit_cpu: self.ebit_cpu.unwrap_or(base.ebit_cpu),
            tdp_pim: self.tdp_pim.or(base.tdp_pim),
            tdp_cpu: self.tdp_cpu.or(base.tdp_cpu),
        }
    }

    /// Every field of `m`, as overrides.
    pub fn full(m: &MachineConfig) -> Self {
        Self {
            xbs: Some(m.xbs),
            rows: Some(m.rows),
            cols: Some(m.cols),
            cycle_time: Some(m.cycle_time),
            ebit_pim: Some(m.ebit_pim),
            bw: Some(m.bw),
            ebit_cpu: Some(m.ebit_cpu),
            tdp_pim: m.tdp_pim,
            tdp_cpu: m.tdp_cpu,
        }
    }
}

/// Either explicit cycle and transfer counts, or a declarative description
/// (`complexity` + `usecase` + `n`) from which they are derived.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorkloadSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oc: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pac: Option<f64>,
    /// Shorthand for `oc = cc, pac = 0`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cc: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dio_cpu: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dio_combined: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cells_per_row: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complexity: Option<ComplexitySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub usecase: Option<UseCase>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<f64>,
    /// Baseline for the CPU-pure system; defaults to moving whole records.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cpu_usecase: Option<UseCase>,
}

impl WorkloadSection {
    pub fn explicit(w: &WorkloadProfile) -> Self {
        Self {
            label: (!w.label.is_empty()).then(|| w.label.clone()),
            oc: Some(w.oc),
            pac: Some(w.pac),
            dio_cpu: Some(w.dio_cpu),
            dio_combined: Some(w.dio_combined),
            cells_per_row: w.cells_per_row,
            ..Self::default()
        }
    }

    pub fn is_declarative(&self) -> bool {
        self.complexity.is_some() || self.usecase.is_some() || self.n.is_some() || self.cpu_usecase.is_some()
    }

    /// Builds the profile. Rows for layouts that need them default to the
    /// machine's rows.
    pub fn resolve(&self, m: &MachineConfig) -> Result<WorkloadProfile, Vec<FieldError>> {
        let mut errors = Vec::new();
        let label = self.label.clone().unwrap_or_default();
        let w = if self.is_declarative() {
            for (name, present) in [
                ("oc", self.oc.is_some()),
                ("pac", self.pac.is_some()),
                ("cc", self.cc.is_some()),
                ("dio_cpu", self.dio_cpu.is_some()),
                ("dio_combined", self.dio_combined.is_some()),
            ] {
                if present {
                    errors
                        .push(FieldError::new(name, format!("{name} cannot be combined with a declarative workload")));
                }
            }
            let (Some(spec), Some(usecase), Some(n)) = (self.complexity, self.usecase, self.n) else {
                for (name, missing) in [
                    ("complexity", self.complexity.is_none()),
                    ("usecase", self.usecase.is_none()),
                    ("n", self.n.is_none()),
                ] {
                    if missing {
                        errors.push(FieldError::new(name, format!("{name} is required for a declarative workload")));
                    }
                }
                return Err(errors);
            };
            let spec = if spec.layout.needs_rows() && spec.rows.is_none() { spec.rows(m.rows as u32) } else { spec };
            let cycles = crate::complexity::compile(&spec).map_err(|e| e.to_string());
            let cpu = self.cpu_usecase.unwrap_or(UseCase::CpuPure { s: usecase.record_size() });
            let dio_combined = usecase.dio_per_computation(n).map_err(|e| e.to_string());
            let dio_cpu = cpu.dio_per_computation(n).map_err(|e| e.to_string());
            match (cycles, dio_cpu, dio_combined) {
                (Ok(c), Ok(dc), Ok(dp)) if errors.is_empty() => WorkloadProfile::new(label, c.oc, c.pac, dc, dp),
                (c, dc, dp) => {
                    for (field, r) in [("complexity", c.err()), ("cpu_usecase", dc.err()), ("usecase", dp.err())] {
                        if let Some(e) = r {
                            errors.push(FieldError::new(field, e));
                        }
                    }
                    return Err(errors);
                }
            }
        } else {
            let (oc, pac) = match (self.cc, self.oc, self.pac) {
                (Some(cc), None, None) => (cc, 0.0),
                (Some(_), _, _) => {
                    errors.push(FieldError::new("cc", "give either cc or oc/pac, not both"));
                    (f64::NAN, 0.0)
                }
                (None, Some(oc), pac) => (oc, pac.unwrap_or(0.0)),
                (None, None, _) => {
                    errors.push(FieldError::new("oc", "oc (or cc) is required"));
                    (f64::NAN, 0.0)
                }
            };
            let mut required = |name: &str, v: Option<f64>| {
                v.unwrap_or_else(|| {
                    errors.push(FieldError::new(name, format!("{name} is required")));
                    f64::NAN
                })
            };
            let dio_cpu = required("dio_cpu", self.dio_cpu);
            let dio_combined = required("dio_combined", self.dio_combined);
            let w = WorkloadProfile::new(label, oc, pac, dio_cpu, dio_combined);
            let known_missing: Vec<String> = errors.iter().map(|e| e.field.clone()).collect();
            errors.extend(w.field_errors().into_iter().filter(|e| {
                // NaN placeholders for missing fields are already reported.
                !(known_missing.contains(&e.field) || (e.field == "oc" && known_missing.iter().any(|f| f == "cc")))
            }));
            w
        };
        let w = WorkloadProfile { cells_per_row: self.cells_per_row, ..w };
        if let Some(cells) = w.cells_per_row {
            if let Err(e) = m.check_row_capacity(cells) {
                errors.push(e);
            }
        }
        if errors.is_empty() {
            Ok(w)
        } else {
            Err(errors)
        }
    }
}

fn param_dimension(p: ParamId) -> Dimension {
    match p {
        ParamId::Bw => Dimension::Bandwidth,
        ParamId::Ct => Dimension::Time,
        ParamId::EbitPim | ParamId::EbitCpu => Dimension::Energy,
        ParamId::Cc | ParamId::DioCombined | ParamId::DioCpu | ParamId::Xbs | ParamId::Rows => Dimension::Plain,
    }
}

/// Parses a value for `param`, allowing the unit suffixes of its dimension.
pub fn parse_param_value(param: ParamId, text: &str) -> Result<f64, String> {
    units::parse_quantity(text, param_dimension(param))
}

/// One sweep axis as written in a document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisSection {
    pub param: ParamId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min: Option<NumOrText>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max: Option<NumOrText>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<Scale>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<NumOrText>>,
}

impl AxisSection {
    pub fn resolve(&self) -> Result<AxisSpec, FieldError> {
        let dim = param_dimension(self.param);
        let num = |field: &str, v: &NumOrText| v.resolve(dim).map_err(|m| FieldError::new(field, m));
        if let Some(values) = &self.values {
            let values = values.iter().map(|v| num("values", v)).collect::<Result<Vec<_>, _>>()?;
            return Ok(AxisSpec::values(self.param, values));
        }
        let min = self.min.as_ref().ok_or_else(|| FieldError::new("min", "min is required without values"))?;
        let max = self.max.as_ref().ok_or_else(|| FieldError::new("max", "max is required without values"))?;
        Ok(AxisSpec::range(
            self.param,
            num("min", min)?,
            num("max", max)?,
            self.points.unwrap_or(2),
            self.scale.unwrap_or_default(),
        ))
    }

    pub fn from_spec(a: &AxisSpec) -> Self {
        match &a.values {
            Some(v) => Self {
                param: a.param,
                min: None,
                max: None,
                points: None,
                scale: None,
                values: Some(v.iter().map(|&x| x.into()).collect()),
            },
            None => Self {
                param: a.param,
                min: Some(a.min.into()),
                max: Some(a.max.into()),
                points: Some(a.points),
                scale: Some(a.scale),
                values: None,
            },
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    #[serde(default)]
    pub axes: Vec<AxisSection>,
    /// Metrics to report; all of them when empty.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub metrics: Vec<Metric>,
}

/// Iso-lines to draw. Levels are in display units (GOPS or W).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContourSection {
    pub plane: Plane,
    pub metric: Metric,
    #[serde(default)]
    pub levels: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<Window>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDocument {
    #[serde(default, skip_serializing_if = "MachineOverrides::is_empty")]
    pub machine: MachineOverrides,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workload: Option<WorkloadSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scenario: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contour: Option<ContourSection>,
}

/// A document's fully defaulted machine and workload.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Resolved {
    pub machine: MachineConfig,
    pub workload: WorkloadProfile,
    pub warnings: Vec<String>,
}

/// Parses and structurally validates a document.
pub fn parse_config(text: &str) -> Result<ConfigDocument, ConfigError> {
    let mut de = serde_json::Deserializer::from_str(text);
    let doc: ConfigDocument = match serde_path_to_error::deserialize(&mut de) {
        Ok(d) => d,
        Err(e) => {
            let path = e.path().to_string();
            let inner = e.into_inner();
            return Err(if inner.is_syntax() || inner.is_eof() {
                syntax_error(&inner)
            } else {
                let field = if path == "." { "$".to_string() } else { path };
                ConfigError::field(field, syntax_message(&inner))
            });
        }
    };
    de.end().map_err(|e| syntax_error(&e))?;
    doc.check()?;
    Ok(doc)
}

fn syntax_error(e: &serde_json::Error) -> ConfigError {
    ConfigError::Syntax { line: e.line(), column: e.column(), message: syntax_message(e) }
}

/// serde_json's message without its trailing position.
fn syntax_message(e: &serde_json::Error) -> String {
    let s = e.to_string();
    match s.rfind(" at line ") {
        Some(i) => s[..i].to_string(),
        None => s,
    }
}

impl ConfigDocument {
    fn check(&self) -> Result<(), ConfigError> {
        let mut errors = Vec::new();
        if self.workload.is_some() && self.scenario.is_some() {
            errors.push(FieldError::new("workload", "give either workload or scenario, not both"));
        }
        if let Some(id) = &self.scenario {
            if scenarios::find(id).is_none() {
                errors.push(FieldError::new("scenario", format!("unknown scenario `{id}`")));
            }
        }
        let base = self.scenario_machine().unwrap_or_default();
        errors.extend(prefixed("machine", self.machine.apply(base).field_errors()));
        if let Some(s) = &self.sweep {
            if s.axes.len() > 2 {
                errors
                    .push(FieldError::new("sweep.axes", format!("at most 2 axes can be swept (got {})", s.axes.len())));
            }
            for (i, a) in s.axes.iter().enumerate() {
                if let Err(e) = a.resolve().and_then(|spec| spec.validate().map_err(sweep_field)) {
                    errors.push(FieldError::new(format!("sweep.axes[{i}].{}", e.field), e.message));
                }
            }
        }
        if let Some(c) = &self.contour {
            if !matches!(c.metric, Metric::TpCombined | Metric::PCombined) {
                errors.push(FieldError::new("contour.metric", "contour metric must be tp_combined or p_combined"));
            }
            if let Some(w) = &c.window {
                if let Err(e) = w.validate() {
                    errors.push(FieldError::new("contour.window", e.to_string()));
                }
            }
        }
        if errors.is_empty() {
            Ok(())
        } else {
            Err(ConfigError::Invalid(errors))
        }
    }

    fn scenario_machine(&self) -> Option<MachineConfig> {
        self.scenario.as_deref().and_then(scenarios::find).map(|s| s.machine_config())
    }

    /// The machine after defaults, scenario and overrides.
    pub fn machine_config(&self) -> Result<MachineConfig, ConfigError> {
        let m = self.machine.apply(self.scenario_machine().unwrap_or_default());
        let errors = m.field_errors();
        if errors.is_empty() {
            Ok(m)
        } else {
            Err(ConfigError::Invalid(prefixed("machine", errors)))
        }
    }

    /// Machine and workload with every default applied.
    pub fn resolve(&self) -> Result<Resolved, ConfigError> {
        let machine = self.machine_config()?;
        let workload = match (&self.workload, &self.scenario) {
            (Some(w), None) => w.resolve(&machine).map_err(|e| ConfigError::Invalid(prefixed("workload", e)))?,
            (None, Some(id)) => {
                let s = scenarios::find(id)
                    .ok_or_else(|| ConfigError::field("scenario", format!("unknown scenario `{id}`")))?;
                s.workload_profile().map_err(ConfigError::Invalid)?
            }
            (Some(_), Some(_)) => {
                return Err(ConfigError::field("workload", "give either workload or scenario, not both"))
            }
            (None, None) => return Err(ConfigError::field("workload", "a workload or scenario is required")),
        };
        let mut warnings = machine.typical_range_warnings();
        warnings.extend(workload.typical_range_warnings());
        Ok(Resolved { machine, workload, warnings })
    }

    pub fn axes(&self) -> Result<Vec<AxisSpec>, ConfigError> {
        let Some(s) = &self.sweep else {
            return Ok(Vec::new());
        };
        s.axes
            .iter()
            .enumerate()
            .map(|(i, a)| {
                a.resolve().map_err(|e| ConfigError::field(format!("sweep.axes[{i}].{}", e.field), e.message))
            })
            .collect()
    }
}

/// Maps an engine failure onto the document field most likely at fault.
pub fn engine_field_error(e: &EngineError) -> FieldError {
    match e {
        EngineError::Invalid(fe) => FieldError::new(format!("workload.{}", fe.field), fe.message.clone()),
        EngineError::Cycles(_) => FieldError::new("workload.oc", e.to_string()),
        EngineError::DataIo(_) => FieldError::new("workload.dio_combined", e.to_string()),
        EngineError::NoTdp => FieldError::new("machine", e.to_string()),
        _ => FieldError::new("workload", e.to_string()),
    }
}

pub(crate) fn sweep_field(e: SweepError) -> FieldError {
    match e {
        SweepError::Axis { field, message } => FieldError::new(field, message),
        SweepError::Engine(e) => engine_field_error(&e),
        other => FieldError::new("sweep", other.to_string()),
    }
}
