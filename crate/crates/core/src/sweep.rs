//! Sensitivity data: parameter grids, iso-throughput and iso-power lines, and
//! the CPU-pure vs combined crossover.
//!
//! All inputs and outputs are SI (ops/s, W, bits/s, seconds). Level sets are
//! closed form. In the (CC, DIO) plane both families are straight lines; in
//! the (XBs, BW) plane they are straight lines in reciprocal coordinates
//! `(1/xbs, 1/bw)`.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::{self, EngineError, EvalResult, Metric};
use crate::quantities::{MachineConfig, WorkloadProfile};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SweepError {
    #[error("{field}: {message}")]
    Axis { field: String, message: String },
    #[error("at most 2 axes can be swept (got {0})")]
    TooManyAxes(usize),
    #[error("unachievable level: {0}")]
    Unachievable(String),
    #[error("degenerate level: {0}")]
    Degenerate(String),
    #[error("evaluation failed at {coords:?}: {source}")]
    Cell { coords: Vec<f64>, source: EngineError },
    #[error(transparent)]
    Engine(#[from] EngineError),
}

impl SweepError {
    fn axis(field: impl Into<String>, message: impl Into<String>) -> Self {
        SweepError::Axis { field: field.into(), message: message.into() }
    }
}

pub type Result<T> = std::result::Result<T, SweepError>;

/// A sweepable model parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParamId {
    Cc,
    DioCombined,
    DioCpu,
    Xbs,
    Rows,
    Bw,
    Ct,
    EbitPim,
    EbitCpu,
}

impl ParamId {
    pub const ALL: [ParamId; 9] = [
        ParamId::Cc,
        ParamId::DioCombined,
        ParamId::DioCpu,
        ParamId::Xbs,
        ParamId::Rows,
        ParamId::Bw,
        ParamId::Ct,
        ParamId::EbitPim,
        ParamId::EbitCpu,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ParamId::Cc => "cc",
            ParamId::DioCombined => "dio_combined",
            ParamId::DioCpu => "dio_cpu",
            ParamId::Xbs => "xbs",
            ParamId::Rows => "rows",
            ParamId::Bw => "bw",
            ParamId::Ct => "ct",
            ParamId::EbitPim => "ebit_pim",
            ParamId::EbitCpu => "ebit_cpu",
        }
    }

    /// Writes `v` into the machine or workload. Sweeping `cc` replaces the
    /// whole complexity: `oc = v`, `pac = 0`.
    pub fn apply(self, m: &mut MachineConfig, w: &mut WorkloadProfile, v: f64) {
        match self {
            ParamId::Cc => {
                w.oc = v;
                w.pac = 0.0;
            }
            ParamId::DioCombined => w.dio_combined = v,
            ParamId::DioCpu => w.dio_cpu = v,
            ParamId::Xbs => m.xbs = v,
            ParamId::Rows => m.rows = v,
            ParamId::Bw => m.bw = v,
            ParamId::Ct => m.cycle_time = v,
            ParamId::EbitPim => m.ebit_pim = v,
            ParamId::EbitCpu => m.ebit_cpu = v,
        }
    }

    pub fn get(self, m: &MachineConfig, w: &WorkloadProfile) -> f64 {
        match self {
            ParamId::Cc => w.cc(),
            ParamId::DioCombined => w.dio_combined,
            ParamId::DioCpu => w.dio_cpu,
            ParamId::Xbs => m.xbs,
            ParamId::Rows => m.rows,
            ParamId::Bw => m.bw,
            ParamId::Ct => m.cycle_time,
            ParamId::EbitPim => m.ebit_pim,
            ParamId::EbitCpu => m.ebit_cpu,
        }
    }
}

impl fmt::Display for ParamId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ParamId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let s = if s == "cycle_time" { "ct" } else { s };
        ParamId::ALL.into_iter().find(|p| p.name() == s).ok_or_else(|| format!("unknown parameter `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scale {
    #[default]
    Linear,
    Log,
}

impl FromStr for Scale {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "linear" | "lin" => Ok(Scale::Linear),
            "log" => Ok(Scale::Log),
            _ => Err(format!("unknown scale `{s}` (expected linear or log)")),
        }
    }
}

/// `points` samples from `min` to `max`, both ends included exactly.
pub fn spaced(min: f64, max: f64, points: usize, scale: Scale) -> Vec<f64> {
    if points == 1 {
        return vec![min];
    }
    let last = (points - 1) as f64;
    (0..points)
        .map(|i| {
            if i == 0 {
                min
            } else if i == points - 1 {
                max
            } else {
                let t = i as f64 / last;
                match scale {
                    Scale::Linear => min + (max - min) * t,
                    Scale::Log => (min.ln() + (max.ln() - min.ln()) * t).exp(),
                }
            }
        })
        .collect()
}

/// One sweep axis. Either a range (`min`, `max`, `points`, `scale`) or an
/// explicit list of `values`, which then takes precedence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisSpec {
    pub param: ParamId,
    #[serde(default)]
    pub min: f64,
    #[serde(default)]
    pub max: f64,
    #[serde(default = "two")]
    pub points: usize,
    #[serde(default)]
    pub scale: Scale,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
}

fn two() -> usize {
    2
}

impl AxisSpec {
    pub fn range(param: ParamId, min: f64, max: f64, points: usize, scale: Scale) -> Self {
        Self { param, min, max, points, scale, values: None }
    }

    pub fn values(param: ParamId, values: Vec<f64>) -> Self {
        let (min, max) = (values.first().copied().unwrap_or(0.0), values.last().copied().unwrap_or(0.0));
        Self { param, min, max, points: values.len(), scale: Scale::Linear, values: Some(values) }
    }

    pub fn validate(&self) -> Result<()> {
        let field = |f: &str| format!("{}.{f}", self.param);
        if let Some(values) = &self.values {
            if values.is_empty() {
                return Err(SweepError::axis(field("values"), "at least one value is required"));
            }
            if let Some(v) = values.iter().find(|v| !v.is_finite()) {
                return Err(SweepError::axis(field("values"), format!("{v} is not finite")));
            }
            return Ok(());
        }
        if !self.min.is_finite() || !self.max.is_finite() {
            return Err(SweepError::axis(field("min"), "bounds must be finite"));
        }
        if !(self.min < self.max) {
            return Err(SweepError::axis(field("min"), format!("min ({}) must be < max ({})", self.min, self.max)));
        }
        if self.points < 2 {
            return Err(SweepError::axis(field("points"), "points must be ≥ 2"));
        }
        if self.scale == Scale::Log && !(self.min > 0.0) {
            return Err(SweepError::axis(field("min"), "log scale requires min > 0"));
        }
        Ok(())
    }

    pub fn samples(&self) -> Vec<f64> {
        match &self.values {
            Some(v) => v.clone(),
            None => spaced(self.min, self.max, self.points, self.scale),
        }
    }
}

/// One evaluated grid point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepCell {
    pub coords: Vec<f64>,
    pub result: EvalResult,
}

/// Dense results of a 1-D or 2-D sweep, row-major with the first axis outer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepGrid {
    pub axes: Vec<AxisSpec>,
    pub shape: Vec<usize>,
    pub cells: Vec<SweepCell>,
}

impl SweepGrid {
    /// The metric for every cell, in cell order.
    pub fn matrix(&self, metric: Metric) -> Vec<f64> {
        self.cells.iter().map(|c| metric.of(&c.result)).collect()
    }

    pub fn cell(&self, index: &[usize]) -> Option<&SweepCell> {
        if index.len() != self.shape.len() || index.iter().zip(&self.shape).any(|(i, n)| i >= n) {
            return None;
        }
        let flat = index.iter().zip(&self.shape).fold(0, |acc, (i, n)| acc * n + i);
        self.cells.get(flat)
    }
}

/// Evaluates the engine at every grid point. Cells are computed in parallel;
/// the output order does not depend on scheduling.
pub fn grid_sweep(m: &MachineConfig, w: &WorkloadProfile, axes: &[AxisSpec]) -> Result<SweepGrid> {
    if axes.len() > 2 {
        return Err(SweepError::TooManyAxes(axes.len()));
    }
    if axes.is_empty() {
        return Err(SweepError::axis("axes", "at least one axis is required"));
    }
    for a in axes {
        a.validate()?;
    }
    if axes.len() == 2 && axes[0].param == axes[1].param {
        return Err(SweepError::axis("axes", format!("{} is swept twice", axes[0].param)));
    }

    let samples: Vec<Vec<f64>> = axes.iter().map(AxisSpec::samples).collect();
    let shape: Vec<usize> = samples.iter().map(Vec::len).collect();
    let total: usize = shape.iter().product();
    let inner = if shape.len() == 2 { shape[1] } else { 1 };

    let cells = (0..total)
        .into_par_iter()
        .map(|flat| {
            let idx = if shape.len() == 2 { vec![flat / inner, flat % inner] } else { vec![flat] };
            let coords: Vec<f64> = idx.iter().zip(&samples).map(|(&i, s)| s[i]).collect();
            let (mut m, mut w) = (*m, w.clone());
            for (a, &v) in axes.iter().zip(&coords) {
                a.param.apply(&mut m, &mut w, v);
            }
            engine::evaluate(&m, &w)
                .map(|result| SweepCell { coords: coords.clone(), result })
                .map_err(|source| SweepError::Cell { coords, source })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(SweepGrid { axes: axes.to_vec(), shape, cells })
}

/// Which plane a level set lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Plane {
    /// x = CC (cycles), y = DIO (bits).
    CcDio,
    /// x = XBs, y = BW (bits/s).
    XbsBw,
}

impl FromStr for Plane {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "cc_dio" => Ok(Plane::CcDio),
            "xbs_bw" => Ok(Plane::XbsBw),
            _ => Err(format!("unknown plane `{s}` (expected cc_dio or xbs_bw)")),
        }
    }
}

/// Whether line coefficients apply to the coordinates or their reciprocals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Coordinates {
    Linear,
    Reciprocal,
}

/// `a·f(x) + b·f(y) = c`, with `f` the identity or `1/·`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineCoefficients {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub coordinates: Coordinates,
}

/// Sampling rectangle for level sets.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Window {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub points: usize,
    pub scale: Scale,
}

impl Window {
    /// CC ∈ [10, 1e5], DIO ∈ [1, 256], 256 log-spaced samples.
    pub fn cc_dio() -> Self {
        Self { x_min: 10.0, x_max: 1e5, y_min: 1.0, y_max: 256.0, points: 256, scale: Scale::Log }
    }

    /// XBs ∈ [512, 64K], BW ∈ [250, 16000] Gbps, 256 log-spaced samples.
    pub fn xbs_bw() -> Self {
        Self { x_min: 512.0, x_max: 65536.0, y_min: 250e9, y_max: 16000e9, points: 256, scale: Scale::Log }
    }

    pub fn default_for(plane: Plane) -> Self {
        match plane {
            Plane::CcDio => Self::cc_dio(),
            Plane::XbsBw => Self::xbs_bw(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.x_min < self.x_max && self.y_min < self.y_max && self.x_min > 0.0 && self.y_min > 0.0;
        if !ok || !self.x_max.is_finite() || !self.y_max.is_finite() {
            return Err(SweepError::axis("window", "window bounds must be positive, finite and min < max"));
        }
        if self.points < 2 {
            return Err(SweepError::axis("window.points", "points must be ≥ 2"));
        }
        Ok(())
    }

    fn contains_y(&self, y: f64) -> bool {
        y >= self.y_min * (1.0 - 1e-12) && y <= self.y_max * (1.0 + 1e-12)
    }
}

/// A level set of one metric, sampled inside a window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsoLine {
    pub plane: Plane,
    pub metric: Metric,
    /// Level in SI units.
    pub level: f64,
    pub coefficients: LineCoefficients,
    /// `[x, y]` samples; empty if the line misses the window.
    pub points: Vec<[f64; 2]>,
}

fn level_metric(metric: Metric) -> Result<()> {
    match metric {
        Metric::TpCombined | Metric::PCombined => Ok(()),
        other => Err(SweepError::axis(
            "metric",
            format!("iso-lines exist for tp_combined and p_combined, not {}", other.name()),
        )),
    }
}

fn clipped_samples(lo: f64, hi: f64, w: &Window) -> Vec<f64> {
    let (lo, hi) = (lo.max(w.x_min), hi.min(w.x_max));
    if !(lo <= hi) {
        return Vec::new();
    }
    if lo == hi {
        return vec![lo];
    }
    spaced(lo, hi, w.points, w.scale)
}

/// Level set of combined throughput or power in the (CC, DIO) plane.
///
/// Throughput `T`: `cc·ct/(rows·xbs) + dio/bw = 1/T`. Power `P` (achievable
/// only between the PIM and bus powers): `(p_pim − P)·cc·ct/(rows·xbs) +
/// (p_cpu − P)·dio/bw = 0`, a ray through the origin.
pub fn iso_line_cc_dio(m: &MachineConfig, metric: Metric, level: f64, window: &Window) -> Result<IsoLine> {
    level_metric(metric)?;
    let m = m.validate().map_err(EngineError::from)?;
    window.validate()?;
    if !(level > 0.0) || !level.is_finite() {
        return Err(SweepError::Unachievable(format!("level must be positive and finite (got {level})")));
    }
    // Cycles below one are not a valid PIM workload.
    let window = Window { x_min: window.x_min.max(1.0), ..*window };
    let a = m.cycle_time / m.computations_per_batch();
    let b = 1.0 / m.bw;

    let (coefficients, points) = match metric {
        Metric::TpCombined => {
            let c = 1.0 / level;
            let coefficients = LineCoefficients { a, b, c, coordinates: Coordinates::Linear };
            // dio = (c − a·cc)/b must lie in [y_min, y_max].
            let hi = (c - b * window.y_min) / a;
            let lo = (c - b * window.y_max) / a;
            let points = clipped_samples(lo, hi, &window)
                .into_iter()
                .map(|cc| [cc, (c - a * cc) / b])
                .filter(|p| p[1] > 0.0 && window.contains_y(p[1]))
                .collect();
            (coefficients, points)
        }
        _ => {
            let pp = engine::p_pim(&m);
            let pc = engine::p_cpu(&m, 1.0)?;
            if pp == pc {
                return Err(SweepError::Degenerate(format!(
                    "p_pim == p_cpu == {pp} W: combined power is constant over the plane"
                )));
            }
            let (lo, hi) = (pp.min(pc), pp.max(pc));
            if level < lo || level > hi {
                return Err(SweepError::Unachievable(format!("combined power {level} W lies outside [{lo}, {hi}] W")));
            }
            let coefficients =
                LineCoefficients { a: (pp - level) * a, b: (pc - level) * b, c: 0.0, coordinates: Coordinates::Linear };
            let points = if coefficients.b == 0.0 || coefficients.a == 0.0 {
                // The level equals one component power: the line is an axis.
                Vec::new()
            } else {
                let slope = -coefficients.a / coefficients.b;
                clipped_samples(window.y_min / slope, window.y_max / slope, &window)
                    .into_iter()
                    .map(|cc| [cc, slope * cc])
                    .filter(|p| window.contains_y(p[1]))
                    .collect()
            };
            (coefficients, points)
        }
    };
    Ok(IsoLine { plane: Plane::CcDio, metric, level, coefficients, points })
}

/// Level set in the (XBs, BW) plane for a fixed workload (`cc`, `dio`).
///
/// Energy per computation does not depend on XBs or BW, so an iso-power line
/// at `P` is the iso-throughput line at `P / epc_combined`. In reciprocal
/// coordinates: `(cc·ct/rows)·(1/xbs) + dio·(1/bw) = 1/T`.
pub fn iso_line_xbs_bw(
    m: &MachineConfig,
    cc: f64,
    dio: f64,
    metric: Metric,
    level: f64,
    window: &Window,
) -> Result<IsoLine> {
    level_metric(metric)?;
    let m = m.validate().map_err(EngineError::from)?;
    window.validate()?;
    if !(cc >= 1.0) {
        return Err(EngineError::Cycles(cc).into());
    }
    if !(dio > 0.0) {
        return Err(EngineError::DataIo(dio).into());
    }
    if !(level > 0.0) || !level.is_finite() {
        return Err(SweepError::Unachievable(format!("level must be positive and finite (got {level})")));
    }
    let throughput = match metric {
        Metric::TpCombined => level,
        _ => {
            let epc = m.ebit_pim * cc + m.ebit_cpu * dio;
            if epc == 0.0 {
                return Err(SweepError::Degenerate("zero energy per computation: combined power is 0 W".into()));
            }
            level / epc
        }
    };
    let a = cc * m.cycle_time / m.rows;
    let c = 1.0 / throughput;
    let coefficients = LineCoefficients { a, b: dio, c, coordinates: Coordinates::Reciprocal };
    // bw(xbs) = dio/(c − a/xbs) falls with xbs: bw ≤ y_max bounds xbs below,
    // bw ≥ y_min bounds it above.
    let top = c - dio / window.y_max;
    let bottom = c - dio / window.y_min;
    let points = if top <= 0.0 {
        Vec::new()
    } else {
        let hi = if bottom > 0.0 { a / bottom } else { f64::INFINITY };
        clipped_samples(a / top, hi, window)
            .into_iter()
            .map(|x| [x, dio / (c - a / x)])
            .filter(|p| p[1] > 0.0 && window.contains_y(p[1]))
            .collect()
    };
    Ok(IsoLine { plane: Plane::XbsBw, metric, level, coefficients, points })
}

/// Side of a crossover curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Region {
    /// The CPU-pure system is at least as good (throughput ≥, or power ≤).
    CpuPure,
    /// The combined system is strictly better.
    Combined,
}

/// Where combined overtakes CPU-pure in the (XBs, BW) plane.
///
/// Both crossovers are lines through the origin, `xbs = slope·bw`. `slope` is
/// `None` when one system wins everywhere; `dominant` then says which.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossoverCurve {
    pub metric: Metric,
    pub slope: Option<f64>,
    pub dominant: Option<Region>,
    pub note: Option<String>,
    /// `[xbs, bw]` on the curve, one per BW sample in the window.
    pub points: Vec<[f64; 2]>,
}

impl CrossoverCurve {
    /// Closed-form side of the curve at `(xbs, bw)`.
    pub fn region(&self, xbs: f64, bw: f64) -> Region {
        match (self.slope, self.dominant) {
            (_, Some(d)) => d,
            (Some(k), None) => {
                let above = xbs > k * bw;
                match self.metric {
                    // More crossbars raise combined throughput.
                    Metric::TpCombined => {
                        if above {
                            Region::Combined
                        } else {
                            Region::CpuPure
                        }
                    }
                    // More crossbars raise PIM power.
                    _ => {
                        if above {
                            Region::CpuPure
                        } else {
                            Region::Combined
                        }
                    }
                }
            }
            (None, None) => Region::CpuPure,
        }
    }
}

/// Throughput and power crossovers for one workload.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Crossover {
    pub cc: f64,
    pub dio_cpu: f64,
    pub dio_combined: f64,
    pub throughput: CrossoverCurve,
    pub power: CrossoverCurve,
}

/// Throughput crossover: `bw/dio_cpu == tp_combined` at
/// `xbs* = cc·ct·bw / (rows·(dio_cpu − dio_combined))`. Power crossover:
/// `p_pim == p_cpu` at `xbs = ebit_cpu·bw·ct / (rows·ebit_pim)`, since combined
/// power is a convex combination of the two.
pub fn crossover_xbs_bw(
    m: &MachineConfig,
    cc: f64,
    dio_cpu: f64,
    dio_combined: f64,
    window: &Window,
) -> Result<Crossover> {
    let m = m.validate().map_err(EngineError::from)?;
    window.validate()?;
    if !(cc >= 1.0) || !cc.is_finite() {
        return Err(EngineError::Cycles(cc).into());
    }
    for dio in [dio_cpu, dio_combined] {
        if !(dio > 0.0) || !dio.is_finite() {
            return Err(EngineError::DataIo(dio).into());
        }
    }
    let bws = spaced(window.y_min, window.y_max, window.points, window.scale);
    let along = |k: f64| bws.iter().map(|&bw| [k * bw, bw]).collect::<Vec<_>>();

    let throughput = if dio_cpu <= dio_combined {
        CrossoverCurve {
            metric: Metric::TpCombined,
            slope: None,
            dominant: Some(Region::CpuPure),
            note: Some("CPU-pure dominates: PIM does not reduce data transfer".into()),
            points: Vec::new(),
        }
    } else {
        let k = cc * m.cycle_time / (m.rows * (dio_cpu - dio_combined));
        CrossoverCurve { metric: Metric::TpCombined, slope: Some(k), dominant: None, note: None, points: along(k) }
    };

    let power = if m.ebit_pim == 0.0 {
        CrossoverCurve {
            metric: Metric::PCombined,
            slope: None,
            dominant: Some(Region::Combined),
            note: Some("PIM draws no power: combined never exceeds CPU-pure power".into()),
            points: Vec::new(),
        }
    } else {
        let k = m.ebit_cpu * m.cycle_time / (m.rows * m.ebit_pim);
        CrossoverCurve { metric: Metric::PCombined, slope: Some(k), dominant: None, note: None, points: along(k) }
    };

    Ok(Crossover { cc, dio_cpu, dio_combined, throughput, power })
}

/// Region by direct evaluation, for checking the closed form.
pub fn evaluated_region(m: &MachineConfig, w: &WorkloadProfile, metric: Metric) -> Result<Region> {
    let r = engine::evaluate(m, w)?;
    let combined_better = match metric {
        Metric::TpCombined => r.tp_combined > r.tp_cpu,
        _ => r.p_combined < r.p_cpu,
    };
    Ok(if combined_better { Region::Combined } else { Region::CpuPure })
}
