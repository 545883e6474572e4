//! Text, CSV and JSON renderings of results, sweeps, contours and reports.
//!
//! The text table follows the spreadsheet layout: one column per
//! configuration, parameters first and outputs below. CSV columns are fixed;
//! see [`COLUMNS`](super::ops::COLUMNS).

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::ops::{display, Columns, ContourOutput, SweepOutput, COLUMNS};
use crate::engine::{EvalResult, Metric};
use crate::quantities::{to_gbps, MachineConfig, WorkloadProfile};
use crate::scenarios::{Check, ScenarioReport};
use crate::sweep::{Crossover, ParamId, Plane};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Text,
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(Format::Text),
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(format!("unknown format `{s}` (expected text, csv or json)")),
        }
    }
}

/// One configuration column.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub label: String,
    pub machine: MachineConfig,
    pub workload: WorkloadProfile,
    pub result: EvalResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct JsonRow {
    #[serde(flatten)]
    row: TableRow,
    values: Columns,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct JsonTable {
    columns: Vec<String>,
    rows: Vec<JsonRow>,
}

/// Rounds away binary noise from unit conversion, e.g. 0.09999999999999999.
fn tidy(v: f64) -> f64 {
    format!("{v:.12e}").parse().unwrap_or(v)
}

/// Compact human formatting for the text table.
fn human(v: f64) -> String {
    if !v.is_finite() {
        return "inf".into();
    }
    let a = v.abs();
    if a == 0.0 {
        "0".into()
    } else if a >= 100.0 || v.fract() == 0.0 {
        format!("{v:.0}")
    } else if a >= 1.0 {
        format!("{v:.1}")
    } else {
        let decimals = (2 - a.log10().floor() as i32).max(0) as usize;
        format!("{v:.decimals$}")
    }
}

fn csv_value(v: Option<f64>) -> String {
    v.map_or_else(|| "inf".to_string(), |v| v.to_string())
}

fn write_csv(header: &[String], records: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in records {
        w.write_record(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
}

/// Column names of the result CSV, `label` first.
pub fn table_header() -> Vec<String> {
    std::iter::once("label".to_string()).chain(COLUMNS.iter().map(|m| m.column())).collect()
}

pub fn emit_table(rows: &[TableRow], format: Format) -> String {
    match format {
        Format::Csv => {
            let records: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    std::iter::once(r.label.clone())
                        .chain(COLUMNS.iter().map(|&m| csv_value(display(m, &r.result))))
                        .collect()
                })
                .collect();
            write_csv(&table_header(), &records)
        }
        Format::Json => {
            let table = JsonTable {
                columns: COLUMNS.iter().map(|m| m.column()).collect(),
                rows: rows.iter().map(|r| JsonRow { row: r.clone(), values: Columns::of(&r.result) }).collect(),
            };
            serde_json::to_string_pretty(&table).expect("serializable") + "\n"
        }
        Format::Text => text_table(rows),
    }
}

/// Reads back the rows of [`emit_table`]'s JSON output.
pub fn parse_table_json(text: &str) -> Result<Vec<TableRow>, serde_json::Error> {
    let t: JsonTable = serde_json::from_str(text)?;
    Ok(t.rows.into_iter().map(|r| r.row).collect())
}

type Cell = fn(&TableRow) -> f64;

fn text_table(rows: &[TableRow]) -> String {
    let lines: Vec<(&str, Cell)> = vec![
        ("XBs", |r| r.machine.xbs),
        ("Rows per XB", |r| r.machine.rows),
        ("CT [ns]", |r| tidy(r.machine.cycle_time * 1e9)),
        ("Ebit PIM [pJ]", |r| tidy(r.machine.ebit_pim * 1e12)),
        ("BW [Gbps]", |r| tidy(to_gbps(r.machine.bw))),
        ("Ebit CPU [pJ]", |r| tidy(r.machine.ebit_cpu * 1e12)),
        ("OC [cycles]", |r| r.workload.oc),
        ("PAC [cycles]", |r| r.workload.pac),
        ("CC [cycles]", |r| r.workload.cc()),
        ("DIO CPU [bits]", |r| r.workload.dio_cpu),
        ("DIO Combined [bits]", |r| r.workload.dio_combined),
        ("PIM Throughput [GOPS]", |r| Metric::TpPim.unit().from_si(r.result.tp_pim)),
        ("CPU Throughput [GOPS]", |r| Metric::TpCpu.unit().from_si(r.result.tp_cpu)),
        ("Combined Throughput [GOPS]", |r| Metric::TpCombined.unit().from_si(r.result.tp_combined)),
        ("PIM Power [W]", |r| r.result.p_pim),
        ("CPU Power [W]", |r| r.result.p_cpu),
        ("Combined Power [W]", |r| r.result.p_combined),
        ("PIM EPC [J/GOP]", |r| Metric::EpcPim.unit().from_si(r.result.epc_pim)),
        ("CPU EPC [J/GOP]", |r| Metric::EpcCpu.unit().from_si(r.result.epc_cpu)),
        ("Combined EPC [J/GOP]", |r| Metric::EpcCombined.unit().from_si(r.result.epc_combined)),
    ];
    let input_rows = 11;
    let mut grid: Vec<Vec<String>> =
        vec![std::iter::once(String::new()).chain(rows.iter().map(|r| r.label.clone())).collect()];
    for (i, (name, cell)) in lines.iter().enumerate() {
        let fmt = |v: f64| if i < input_rows && v.is_finite() { v.to_string() } else { human(v) };
        grid.push(std::iter::once(name.to_string()).chain(rows.iter().map(|r| fmt(cell(r)))).collect());
    }
    if rows.iter().any(|r| r.result.throttled.pim || r.result.throttled.cpu) {
        let flag = |r: &TableRow| match (r.result.throttled.pim, r.result.throttled.cpu) {
            (true, true) => "pim+cpu",
            (true, false) => "pim",
            (false, true) => "cpu",
            (false, false) => "-",
        };
        grid.push(std::iter::once("Throttled".to_string()).chain(rows.iter().map(|r| flag(r).to_string())).collect());
    }
    let widths: Vec<usize> =
        (0..=rows.len()).map(|c| grid.iter().map(|line| line[c].chars().count()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for line in &grid {
        let mut text = format!("{:<w$}", line[0], w = widths[0]);
        for (c, cell) in line.iter().enumerate().skip(1) {
            let _ = write!(text, "  {:>w$}", cell, w = widths[c]);
        }
        out.push_str(text.trim_end());
        out.push('\n');
    }
    out
}

/// Column name for a swept parameter, in display units.
pub fn axis_column(p: ParamId) -> &'static str {
    match p {
        ParamId::Cc => "cc",
        ParamId::DioCombined => "dio_combined",
        ParamId::DioCpu => "dio_cpu",
        ParamId::Xbs => "xbs",
        ParamId::Rows => "rows",
        ParamId::Bw => "bw_gbps",
        ParamId::Ct => "ct_ns",
        ParamId::EbitPim => "ebit_pim_pj",
        ParamId::EbitCpu => "ebit_cpu_pj",
    }
}

fn axis_display(p: ParamId, v: f64) -> f64 {
    match p {
        ParamId::Bw => tidy(to_gbps(v)),
        ParamId::Ct => tidy(v * 1e9),
        ParamId::EbitPim | ParamId::EbitCpu => tidy(v * 1e12),
        _ => v,
    }
}

/// Sweep grid as CSV (one row per cell) or JSON. Text is the CSV.
pub fn emit_sweep(out: &SweepOutput, format: Format) -> String {
    if format == Format::Json {
        return serde_json::to_string_pretty(out).expect("serializable") + "\n";
    }
    let header: Vec<String> = out
        .grid
        .axes
        .iter()
        .map(|a| axis_column(a.param).to_string())
        .chain(out.metrics.iter().map(|c| c.column.clone()))
        .collect();
    let records: Vec<Vec<String>> = out
        .grid
        .cells
        .iter()
        .enumerate()
        .map(|(i, cell)| {
            cell.coords
                .iter()
                .zip(&out.grid.axes)
                .map(|(&v, a)| axis_display(a.param, v).to_string())
                .chain(out.metrics.iter().map(|c| csv_value(c.values[i])))
                .collect()
        })
        .collect();
    write_csv(&header, &records)
}

/// Iso-line samples, one row per point.
pub fn emit_contour(out: &ContourOutput, format: Format) -> String {
    if format == Format::Json {
        return serde_json::to_string_pretty(out).expect("serializable") + "\n";
    }
    let (x, y) = match out.plane {
        Plane::CcDio => ("cc", "dio"),
        Plane::XbsBw => ("xbs", "bw_gbps"),
    };
    let header: Vec<String> = ["line", "metric", "level", x, y].iter().map(|s| s.to_string()).collect();
    let mut records = Vec::new();
    for (i, line) in out.lines.iter().enumerate() {
        let level = line.metric.unit().from_si(line.level);
        for [px, py] in &line.points {
            let py = if out.plane == Plane::XbsBw { to_gbps(*py) } else { *py };
            records.push(vec![i.to_string(), line.metric.column(), level.to_string(), px.to_string(), py.to_string()]);
        }
    }
    write_csv(&header, &records)
}

/// Crossover curves, one row per point. Dominance notes are JSON-only.
pub fn emit_crossover(x: &Crossover, format: Format) -> String {
    if format == Format::Json {
        return serde_json::to_string_pretty(x).expect("serializable") + "\n";
    }
    let header: Vec<String> = ["curve", "xbs", "bw_gbps"].iter().map(|s| s.to_string()).collect();
    let mut records = Vec::new();
    for (name, curve) in [("throughput", &x.throughput), ("power", &x.power)] {
        for [xbs, bw] in &curve.points {
            records.push(vec![name.to_string(), xbs.to_string(), to_gbps(*bw).to_string()]);
        }
    }
    write_csv(&header, &records)
}

fn check_text(c: Check) -> String {
    match c {
        Check::Decimals(d) => format!("{d} dp"),
        Check::Relative(t) => format!("rel {t}"),
        Check::AtLeast => "≥".into(),
        Check::AtMost => "≤".into(),
    }
}

/// Pass/fail listing for a scenario run.
pub fn emit_report(r: &ScenarioReport, format: Format) -> String {
    if format == Format::Json {
        return serde_json::to_string_pretty(r).expect("serializable") + "\n";
    }
    let mut out = format!("{} ({}): {}\n", r.id, r.tolerance_mode, r.description);
    for o in &r.outcomes {
        let _ = writeln!(
            out,
            "  {} {:<16} expected {} ({}) got {} [{}]",
            if o.pass { "PASS" } else { "FAIL" },
            serde_json::to_value(o.quantity).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default(),
            o.expected,
            check_text(o.check),
            o.compared,
            o.citation
        );
    }
    let _ = writeln!(out, "{}", if r.pass { "PASS" } else { "FAIL" });
    out
}
