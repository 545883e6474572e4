//! Subcommands and exit codes: 0 on success, 1 when a scenario expectation
//! fails, 2 on usage or configuration errors.

use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::Context;
use bitlet::interface::config::{AxisSection, ContourSection};
use bitlet::interface::table::{emit_contour, emit_crossover, emit_report, emit_sweep};
use bitlet::interface::units::NumOrText;
use bitlet::interface::{
    contour_document, crossover_document, emit_table, evaluate_document, parse_config, sweep_document, ConfigDocument,
    ConfigError, Format, TableRow,
};
use bitlet::scenarios::{self, Scenario, ToleranceMode};
use bitlet::sweep::{AxisSpec, ParamId, Plane, Scale};
use bitlet::Metric;
use clap::{Args, Parser, Subcommand};

pub const EXIT_OK: u8 = 0;
pub const EXIT_EXPECTATION: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "bitlet", version, about = "Throughput, power and energy of PIM, CPU and combined systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Output {
    /// Output format: text, csv or json.
    #[arg(long, value_parser = parse_format)]
    format: Option<Format>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate one configuration.
    Eval {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Evaluate several configurations side by side.
    Compare {
        #[arg(long = "config", required = true, num_args = 1..)]
        configs: Vec<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Evaluate a grid over one or two parameters.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// `id:min:max[:scale[:points]]` or `id=v1,v2,...`; values may carry units.
        #[arg(long = "axis", value_parser = parse_axis)]
        axes: Vec<AxisSpec>,
        /// Metric to report (repeatable); all columns by default.
        #[arg(long = "metric")]
        metrics: Vec<Metric>,
        #[command(flatten)]
        output: Output,
    },
    /// Iso-throughput or iso-power lines.
    Contour {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        plane: Option<Plane>,
        #[arg(long)]
        metric: Option<Metric>,
        /// Level in GOPS or W (repeatable).
        #[arg(long = "level")]
        levels: Vec<f64>,
        #[command(flatten)]
        output: Output,
    },
    /// Where CPU-pure and combined systems break even in the (XBs, BW) plane.
    Crossover {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Run a catalog scenario, or one read from a file, and check its expectations.
    Scenario {
        #[arg(required_unless_present = "file", conflicts_with = "file")]
        id: Option<String>,
        #[arg(long)]
        file: Option<PathBuf>,
        /// `paper` (round to printed precision) or `rel:<x>`.
        #[arg(long, default_value = "paper")]
        tolerance_mode: ToleranceMode,
        #[command(flatten)]
        output: Output,
    },
    /// List catalog scenarios.
    ListScenarios {
        #[command(flatten)]
        output: Output,
    },
    /// Serve the HTTP API.
    Serve {
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        #[arg(long, default_value_t = 8080)]
        port: u16,
    },
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse()
}

/// Parses `id:min:max[:scale[:points]]` or `id=v1,v2,...`.
pub fn parse_axis(s: &str) -> Result<AxisSpec, String> {
    let section = if let Some((id, values)) = s.split_once('=') {
        AxisSection {
            param: id.parse()?,
            min: None,
            max: None,
            points: None,
            scale: None,
            values: Some(values.split(',').map(|v| NumOrText::Text(v.to_string())).collect()),
        }
    } else {
        let parts: Vec<&str> = s.split(':').collect();
        if !(3..=5).contains(&parts.len()) {
            return Err(format!("axis `{s}` must look like id:min:max[:scale[:points]]"));
        }
        let param: ParamId = parts[0].parse()?;
        let scale = parts.get(3).map(|p| p.parse::<Scale>()).transpose()?;
        let points = parts
            .get(4)
            .map(|p| p.parse::<usize>().map_err(|_| format!("axis points `{p}` is not a count")))
            .transpose()?;
        AxisSection {
            param,
            min: Some(NumOrText::Text(parts[1].to_string())),
            max: Some(NumOrText::Text(parts[2].to_string())),
            points,
            scale,
            values: None,
        }
    };
    let spec = section.resolve().map_err(|e| format!("{}: {}", e.field, e.message))?;
    spec.validate().map_err(|e| e.to_string())?;
    Ok(spec)
}

fn load(path: &Path) -> anyhow::Result<ConfigDocument> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_config(&text).map_err(|e| config_error(path, e))
}

fn config_error(path: &Path, e: ConfigError) -> anyhow::Error {
    let lines: Vec<String> = match &e {
        ConfigError::Syntax { .. } => vec![e.to_string()],
        ConfigError::Invalid(list) => list.iter().map(|f| format!("{}: {}", f.field, f.message)).collect(),
    };
    anyhow::anyhow!("{}:\n  {}", path.display(), lines.join("\n  "))
}

fn row(path: &Path, doc: &ConfigDocument) -> anyhow::Result<(TableRow, Vec<String>)> {
    let e = evaluate_document(doc).map_err(|e| config_error(path, e))?;
    let label = if !e.workload.label.is_empty() {
        e.workload.label.clone()
    } else if let Some(id) = &doc.scenario {
        id.clone()
    } else {
        path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
    };
    Ok((TableRow { label, machine: e.machine, workload: e.workload, result: e.result }, e.warnings))
}

/// Runs the command line; `args[0]` is the program name.
pub fn run(args: &[String], out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            EXIT_USAGE
        }
    }
}

fn warn(err: &mut dyn Write, warnings: &[String]) {
    for w in warnings {
        let _ = writeln!(err, "warning: {w}");
    }
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> anyhow::Result<u8> {
    match command {
        Command::Eval { config, output } => {
            let doc = load(&config)?;
            let (r, warnings) = row(&config, &doc)?;
            warn(err, &warnings);
            out.write_all(emit_table(&[r], output.format.unwrap_or(Format::Text)).as_bytes())?;
        }
        Command::Compare { configs, output } => {
            let mut rows = Vec::new();
            for path in &configs {
                let (r, warnings) = row(path, &load(path)?)?;
                warn(err, &warnings);
                rows.push(r);
            }
            out.write_all(emit_table(&rows, output.format.unwrap_or(Format::Text)).as_bytes())?;
        }
        Command::Sweep { config, axes, metrics, output } => {
            let mut doc = load(&config)?;
            if !metrics.is_empty() {
                doc.sweep.get_or_insert_with(Default::default).metrics = metrics;
            }
            let s = sweep_document(&doc, Some(axes)).map_err(|e| config_error(&config, e))?;
            warn(err, &s.warnings);
            out.write_all(emit_sweep(&s, output.format.unwrap_or(Format::Csv)).as_bytes())?;
        }
        Command::Contour { config, plane, metric, levels, output } => {
            let mut doc = load(&config)?;
            let c = doc.contour.get_or_insert_with(|| ContourSection {
                plane: Plane::CcDio,
                metric: Metric::TpCombined,
                levels: Vec::new(),
                window: None,
            });
            if let Some(p) = plane {
                if p != c.plane {
                    c.window = None;
                }
                c.plane = p;
            }
            if let Some(m) = metric {
                c.metric = m;
            }
            if !levels.is_empty() {
                c.levels = levels;
            }
            let c = contour_document(&doc).map_err(|e| config_error(&config, e))?;
            warn(err, &c.warnings);
            out.write_all(emit_contour(&c, output.format.unwrap_or(Format::Csv)).as_bytes())?;
            if let Some(x) = &c.crossover {
                for curve in [&x.throughput, &x.power] {
                    if let Some(note) = &curve.note {
                        let _ = writeln!(err, "note: {note}");
                    }
                }
            }
        }
        Command::Crossover { config, output } => {
            let doc = load(&config)?;
            let x = crossover_document(&doc, None).map_err(|e| config_error(&config, e))?;
            for curve in [&x.throughput, &x.power] {
                if let Some(note) = &curve.note {
                    let _ = writeln!(err, "note: {note}");
                }
            }
            out.write_all(emit_crossover(&x, output.format.unwrap_or(Format::Csv)).as_bytes())?;
        }
        Command::Scenario { id, file, tolerance_mode, output } => {
            let scenario: Scenario = match (id, file) {
                (_, Some(path)) => {
                    let text =
                        std::fs::read_to_string(&path).with_context(|| format!("cannot read {}", path.display()))?;
                    serde_json::from_str(&text).with_context(|| format!("{} is not a scenario", path.display()))?
                }
                (Some(id), None) => scenarios::find(&id).ok_or_else(|| anyhow::anyhow!("unknown scenario `{id}`"))?,
                (None, None) => unreachable!("clap requires an id or --file"),
            };
            let report = scenarios::run(&scenario, tolerance_mode)?;
            out.write_all(emit_report(&report, output.format.unwrap_or(Format::Text)).as_bytes())?;
            return Ok(if report.pass { EXIT_OK } else { EXIT_EXPECTATION });
        }
        Command::ListScenarios { output } => {
            let list = scenarios::list_scenarios();
            match output.format.unwrap_or(Format::Text) {
                Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&list)?)?,
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(Vec::new());
                    w.write_record(["id", "expectations", "description"])?;
                    for e in &list {
                        w.write_record([e.id.as_str(), &e.expectations.to_string(), &e.description])?;
                    }
                    out.write_all(&w.into_inner()?)?;
                }
                Format::Text => {
                    let width = list.iter().map(|e| e.id.len()).max().unwrap_or(0);
                    for e in &list {
                        writeln!(out, "{:<width$}  {}", e.id, e.description)?;
                    }
                }
            }
        }
        Command::Serve { host, port } => {
            let runtime = tokio::runtime::Builder::new_multi_thread().enable_all().build()?;
            runtime.block_on(async {
                let listener = tokio::net::TcpListener::bind((host.as_str(), port))
                    .await
                    .with_context(|| format!("cannot listen on {host}:{port}"))?;
                let _ = writeln!(err, "listening on http://{}", listener.local_addr()?);
                axum::serve(listener, crate::server::router())
                    .with_graceful_shutdown(async {
                        let _ = tokio::signal::ctrl_c().await;
                    })
                    .await?;
                anyhow::Ok(())
            })?;
        }
    }
    Ok(EXIT_OK)
}
