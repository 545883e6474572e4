//! Acceptance criteria 1–10. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.
//!
//! Published values below are literals as printed; each is compared after
//! rounding the computed value half away from zero to the printed decimals.

use std::path::Path;
use std::process::Command;

use bitlet::complexity::{compile, convolution_cc, fipdp_cc, reduction_phases};
use bitlet::engine::evaluate;
use bitlet::interface::table::{emit_table, parse_table_json, Format, TableRow};
use bitlet::interface::{parse_config, ConfigDocument, MachineOverrides, WorkloadSection};
use bitlet::quantities::{to_gops, to_j_per_gop};
use bitlet::scenarios::{self, round_to, Check, ToleranceMode};
use bitlet::sweep::{crossover_xbs_bw, evaluated_region, iso_line_cc_dio, iso_line_xbs_bw, Coordinates, Window};
use bitlet::{ComplexitySpec, LayoutClass, MachineConfig, Metric, OpKind, UseCase, WorkloadProfile};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

type Outcome = Result<(), Vec<String>>;
type Criterion = (&'static str, fn() -> Outcome);

/// Collects mismatches instead of stopping at the first.
#[derive(Default)]
struct Checks(Vec<String>);

impl Checks {
    fn rounded(&mut self, what: &str, actual: f64, printed: f64, decimals: u32) {
        let got = round_to(actual, decimals);
        if got != printed {
            self.0.push(format!("{what}: {actual} rounds to {got}, printed {printed}"));
        }
    }

    fn equal(&mut self, what: &str, actual: f64, expected: f64) {
        if actual != expected {
            self.0.push(format!("{what}: got {actual}, expected {expected}"));
        }
    }

    fn relative(&mut self, what: &str, actual: f64, expected: f64, tol: f64) {
        if ((actual - expected) / expected).abs() > tol {
            self.0.push(format!("{what}: {actual} not within {tol} of {expected}"));
        }
    }

    fn holds(&mut self, what: &str, ok: bool) {
        if !ok {
            self.0.push(what.to_string());
        }
    }

    fn scenarios(&mut self, prefix: &str) {
        let ids: Vec<String> =
            scenarios::list_scenarios().into_iter().map(|e| e.id).filter(|id| id.starts_with(prefix)).collect();
        self.holds(&format!("no scenarios under {prefix}"), !ids.is_empty());
        for id in ids {
            match scenarios::run_scenario(&id, ToleranceMode::Paper) {
                Ok(r) if r.pass => {}
                Ok(r) => {
                    for o in r.outcomes.iter().filter(|o| !o.pass) {
                        self.0.push(format!("{id}: {:?} compared {} vs {}", o.quantity, o.compared, o.expected));
                    }
                }
                Err(e) => self.0.push(format!("{id}: {e}")),
            }
        }
    }

    fn done(self) -> Outcome {
        if self.0.is_empty() {
            Ok(())
        } else {
            Err(self.0)
        }
    }
}

fn machine(xbs: f64, rows: f64) -> MachineConfig {
    MachineConfig { xbs, rows, ..MachineConfig::default() }
}

fn gops(x: f64) -> f64 {
    to_gops(x)
}

fn worked_example() -> Outcome {
    let mut c = Checks::default();
    // 16-bit add of shifted vectors: OC = 9·16, PAC approximated as R = 512.
    let cc = compile(&ComplexitySpec::new(OpKind::Add, 16, LayoutClass::GatheredUnaligned).rows(512).approximate())
        .map_err(|e| vec![e.to_string()])?
        .cc();
    c.equal("CC", cc, 656.0);
    let m = MachineConfig::default();
    let r = evaluate(&m, &WorkloadProfile::new("svadd", cc, 0.0, 48.0, 16.0)).map_err(|e| vec![e.to_string()])?;
    c.rounded("tp_pim GOPS", gops(r.tp_pim), 160.0, 0);
    c.rounded("tp_cpu GOPS", gops(r.tp_cpu), 20.8, 1);
    c.rounded("tp_combined GOPS", gops(r.tp_combined), 44.9, 1);
    c.rounded("p_pim W", r.p_pim, 10.5, 1);
    c.rounded("p_cpu W", r.p_cpu, 15.0, 0);
    c.rounded("p_combined W", r.p_combined, 13.7, 1);
    c.rounded("epc_cpu J/GOP", to_j_per_gop(r.epc_cpu), 0.72, 2);
    c.rounded("epc_combined J/GOP", to_j_per_gop(r.epc_combined), 0.31, 2);
    c.scenarios("walkthrough/");
    c.done()
}

fn table3() -> Outcome {
    let mut c = Checks::default();
    let filter = UseCase::Filter1 { s: 200.0, p: 0.01 }.dio_per_computation(1e6).map_err(|e| vec![e.to_string()])?;
    for (dio, printed) in [(48.0, 20.8), (32.0, 31.3), (16.0, 62.5), (filter, 333.3)] {
        let tp = bitlet::engine::tp_cpu(&MachineConfig::default(), dio).map_err(|e| vec![e.to_string()])?;
        c.rounded(&format!("tp_cpu at DIO {dio}"), gops(tp), printed, 1);
    }
    c.scenarios("table3/");
    c.done()
}

fn table6() -> Outcome {
    let mut c = Checks::default();
    let ops = [
        (OpKind::Or, 16, 32.0, 48.0, 16.0, (3277.0, 0), 61.3, (14.9, 1)),
        (OpKind::Add, 16, 144.0, 48.0, 16.0, (728.0, 0), 57.6, (14.6, 1)),
        (OpKind::MultLowApprox, 16, 1600.0, 48.0, 16.0, (65.5, 1), 32.0, (12.8, 1)),
        (OpKind::MultLowApprox, 32, 6400.0, 96.0, 32.0, (16.4, 1), 10.7, (12.0, 0)),
        (OpKind::MultLowApprox, 64, 25600.0, 192.0, 64.0, (4.1, 1), 3.2, (11.4, 1)),
    ];
    let mut rows = Vec::new();
    for (op, width, cc, dio_cpu, dio_comb, (tp_pim, d_pim), tp_comb, (p_comb, d_p)) in ops {
        let compiled = compile(&ComplexitySpec::new(op, width, LayoutClass::ParallelAligned))
            .map_err(|e| vec![e.to_string()])?
            .cc();
        c.equal(&format!("{op:?} {width} CC"), compiled, cc);
        let w = WorkloadProfile::new(format!("{op:?}{width}"), compiled, 0.0, dio_cpu, dio_comb);
        let m = MachineConfig::default();
        let r = evaluate(&m, &w).map_err(|e| vec![e.to_string()])?;
        c.rounded(&format!("{op:?} {width} tp_pim"), gops(r.tp_pim), tp_pim, d_pim);
        c.rounded(&format!("{op:?} {width} tp_combined"), gops(r.tp_combined), tp_comb, 1);
        c.rounded(&format!("{op:?} {width} p_combined"), r.p_combined, p_comb, d_p);
        rows.push(TableRow { label: w.label.clone(), machine: m, workload: w, result: r });
    }
    let text = emit_table(&rows, Format::Text);
    let header_cells = text.lines().next().map_or(0, |l| l.split_whitespace().count());
    c.equal("text table columns", header_cells as f64, 5.0);
    for row in ["CC [cycles]", "PIM Throughput [GOPS]", "Combined Throughput [GOPS]", "Combined Power [W]"] {
        c.holds(&format!("text table lacks {row}"), text.lines().any(|l| l.starts_with(row)));
    }
    c.scenarios("table6/");
    c.done()
}

fn table7() -> Outcome {
    let mut c = Checks::default();
    for (xbs, rows, tp_pim, tp_comb) in [
        (512.0, 512.0, 37.0, 23.0),
        (1024.0, 512.0, 74.0, 34.0),
        (4096.0, 1024.0, 591.0, 57.0),
        (16384.0, 1024.0, 2363.0, 61.0),
    ] {
        let r = evaluate(&machine(xbs, rows), &WorkloadProfile::new("hadamard", 710.0, 0.0, 32.0, 16.0))
            .map_err(|e| vec![e.to_string()])?;
        c.rounded(&format!("{xbs} XBs tp_pim"), gops(r.tp_pim), tp_pim, 0);
        c.rounded(&format!("{xbs} XBs tp_combined"), gops(r.tp_combined), tp_comb, 0);
    }
    c.scenarios("table7/");
    c.done()
}

fn tables8_9() -> Outcome {
    let mut c = Checks::default();
    for (p, rows, cycles) in [(3, 512, 69296.0), (3, 1024, 77488.0), (5, 512, 188592.0), (5, 1024, 204976.0)] {
        let got = convolution_cc(p, 8, rows).map_err(|e| vec![e.to_string()])?;
        c.equal(&format!("conv {p}x{p} R={rows}"), got.cycles, cycles);
        c.holds(&format!("conv {p}x{p} R={rows} flagged approximate"), !got.approximate);
    }
    let rows = [
        (3, 1024.0, 1.4, 1.3),
        (3, 8192.0, 10.8, 9.2),
        (3, 65536.0, 86.6, 36.3),
        (5, 1024.0, 0.5, 0.5),
        (5, 8192.0, 4.1, 3.8),
        (5, 65536.0, 32.7, 21.5),
    ];
    for (p, xbs, tp_pim, tp_comb) in rows {
        let cc = convolution_cc(p, 8, 1024).map_err(|e| vec![e.to_string()])?.cycles;
        let r = evaluate(&machine(xbs, 1024.0), &WorkloadProfile::new("conv", cc, 0.0, 16.0, 16.0))
            .map_err(|e| vec![e.to_string()])?;
        c.rounded(&format!("conv {p}x{p} {xbs} XBs tp_pim"), gops(r.tp_pim), tp_pim, 1);
        c.rounded(&format!("conv {p}x{p} {xbs} XBs tp_combined"), gops(r.tp_combined), tp_comb, 1);
    }
    c.scenarios("table8/");
    c.scenarios("table9/");
    c.done()
}

fn table10() -> Outcome {
    let mut c = Checks::default();
    let w = WorkloadProfile::new("floatpim", 336.5, 0.0, 48.0, 0.0);
    let floatpim = MachineConfig { cycle_time: 1.1e-9, ebit_pim: 2.9e-16, ..machine(65536.0, 1024.0) };
    let r = evaluate(&floatpim, &w).map_err(|e| vec![e.to_string()])?;
    c.rounded("FloatPIM tp_pim", gops(r.tp_pim), 181302.0, 0);
    c.rounded("FloatPIM p_pim", r.p_pim, 18.0, 0);
    c.relative("FloatPIM GOPS/W", gops(r.tp_pim) / r.p_pim, 10247.0, 0.005);
    let r = evaluate(&machine(65536.0, 1024.0), &w).map_err(|e| vec![e.to_string()])?;
    c.rounded("default tp_pim", gops(r.tp_pim), 19943.0, 0);
    c.rounded("default p_pim", r.p_pim, 671.0, 0);
    c.rounded("default GOPS/W", gops(r.tp_pim) / r.p_pim, 30.0, 0);
    c.scenarios("table10/");
    c.done()
}

fn fipdp() -> Outcome {
    let mut c = Checks::default();
    let cc = fipdp_cc(8, 32, 512).map_err(|e| vec![e.to_string()])?;
    c.equal("fipdp_cc(8, 32, 512)", cc, 4191.0);
    c.rounded("CC ≈ 4200 (hundreds)", cc / 100.0, 42.0, 0);
    for (xbs, rows, tp) in [(512.0, 512.0, 6.0), (4096.0, 1024.0, 100.0)] {
        let r = evaluate(&machine(xbs, rows), &WorkloadProfile::new("fipdp", cc, 0.0, 32.0, 32.0 / rows))
            .map_err(|e| vec![e.to_string()])?;
        c.rounded(&format!("{xbs}×{rows} tp_pim"), gops(r.tp_pim), tp, 0);
        c.rounded(&format!("{xbs}×{rows} tp_combined"), gops(r.tp_combined), tp, 0);
        c.rounded(&format!("{xbs}×{rows} tp_cpu"), gops(r.tp_cpu), 31.0, 0);
    }
    c.scenarios("fipdp/");
    c.done()
}

// Randomized properties.

const CASES: u32 = 1000;

fn runner() -> TestRunner {
    TestRunner::new(Config { cases: CASES, failure_persistence: None, ..Config::default() })
}

fn log_uniform(lo: f64, hi: f64) -> impl Strategy<Value = f64> {
    (lo.ln()..hi.ln()).prop_map(f64::exp)
}

fn any_machine() -> impl Strategy<Value = MachineConfig> {
    (
        log_uniform(1.0, 1e6),
        log_uniform(2.0, 1e5),
        log_uniform(1e-10, 1e-6),
        log_uniform(1e-17, 1e-11),
        log_uniform(1e9, 1e14),
        log_uniform(1e-13, 1e-10),
    )
        .prop_map(|(xbs, rows, cycle_time, ebit_pim, bw, ebit_cpu)| MachineConfig {
            xbs,
            rows,
            cycle_time,
            ebit_pim,
            bw,
            ebit_cpu,
            ..MachineConfig::default()
        })
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn property<S: Strategy>(
    name: &str,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    runner().run(&strategy, test).map_err(|e| format!("{name}: {e}"))
}

fn eval(m: &MachineConfig, cc: f64, dio_cpu: f64, dio_comb: f64) -> Result<bitlet::EvalResult, TestCaseError> {
    evaluate(m, &WorkloadProfile::new("p", cc, 0.0, dio_cpu, dio_comb)).map_err(|e| TestCaseError::fail(e.to_string()))
}

fn properties() -> Outcome {
    let mut failures = Vec::new();
    let cc = || log_uniform(1.0, 1e6);
    let dio = || log_uniform(1e-3, 1e4);

    let results = [
        property("harmonic bound", (any_machine(), cc(), dio(), dio()), |(m, cc, dc, dp)| {
            let r = eval(&m, cc, dc, dp)?;
            let lo = r.tp_pim.min(r.tp_cpu_combined);
            prop_assert!(r.tp_combined <= lo * (1.0 + 1e-12));
            prop_assert!(r.tp_combined >= lo / 2.0 * (1.0 - 1e-12));
            Ok(())
        }),
        property("P_PIM independent of CC", (any_machine(), cc(), cc(), dio()), |(m, a, b, d)| {
            prop_assert_eq!(eval(&m, a, d, d)?.p_pim, eval(&m, b, d, d)?.p_pim);
            Ok(())
        }),
        property("P_CPU independent of DIO", (any_machine(), cc(), dio(), dio()), |(m, cc, a, b)| {
            prop_assert_eq!(eval(&m, cc, a, a)?.p_cpu, eval(&m, cc, b, b)?.p_cpu);
            Ok(())
        }),
        // CC ≥ 1e3 keeps k·CC at or above the one-cycle floor.
        property(
            "(kCC, kDIO) scaling",
            (any_machine(), log_uniform(1e3, 1e6), dio(), log_uniform(1e-3, 1e3)),
            |(m, cc, d, k)| {
                let a = eval(&m, cc, d, d)?;
                let b = eval(&m, k * cc, k * d, k * d)?;
                prop_assert!(rel(b.p_combined, a.p_combined) <= 1e-10, "p {} vs {}", b.p_combined, a.p_combined);
                prop_assert!(
                    rel(b.tp_combined, a.tp_combined / k) <= 1e-10,
                    "tp {} vs {}",
                    b.tp_combined,
                    a.tp_combined / k
                );
                Ok(())
            },
        ),
        property("time accounting", (any_machine(), cc(), dio()), |(m, cc, d)| {
            let r = eval(&m, cc, d, d)?;
            let time = cc * m.cycle_time / (m.rows * m.xbs) + d / m.bw;
            prop_assert!(rel(r.tp_combined, 1.0 / time) <= 1e-12, "{} vs {}", r.tp_combined, 1.0 / time);
            Ok(())
        }),
        property("exact vs approximate gap", (1u32..=256, 2u32..=1 << 16, 0.0f64..1e5), |(w, r, oc)| {
            for layout in LayoutClass::ALL {
                let spec = ComplexitySpec::new(OpKind::Custom(oc), w, layout).rows(r);
                let exact = compile(&spec).map_err(|e| TestCaseError::fail(e.to_string()))?.cc();
                let approx = compile(&spec.approximate()).map_err(|e| TestCaseError::fail(e.to_string()))?.cc();
                let gap = exact - approx;
                let (w, r) = (f64::from(w), f64::from(r));
                let bound = match layout {
                    LayoutClass::ParallelAligned => 0.0,
                    LayoutClass::GatheredPlacementAlignment | LayoutClass::GatheredUnaligned => w,
                    LayoutClass::ScatteredPlacementAlignment | LayoutClass::ScatteredUnaligned => r,
                    LayoutClass::ReductionPerXb => f64::from(reduction_phases(r as u32).unwrap()) * w,
                };
                let slack = 1e-12 * exact.abs();
                prop_assert!(gap >= -slack && gap <= bound + slack, "{:?}: gap {} outside [0, {}]", layout, gap, bound);
            }
            Ok(())
        }),
        property(
            "iso-line collinearity",
            (any_machine(), log_uniform(10.0, 1e5), log_uniform(1.0, 256.0), prop::bool::ANY),
            |(m, cc, d, power)| {
                let r = eval(&m, cc, d, d)?;
                let metric = if power { Metric::PCombined } else { Metric::TpCombined };
                let level = metric.of(&r);
                let line = match iso_line_cc_dio(&m, metric, level, &Window::cc_dio()) {
                    Ok(l) => l,
                    // Equal component powers leave no power line to draw.
                    Err(bitlet::sweep::SweepError::Degenerate(_)) => return Ok(()),
                    Err(e) => return Err(TestCaseError::fail(e.to_string())),
                };
                prop_assert!(line.points.len() >= 2 || power, "throughput line through an in-window point is empty");
                let lc = line.coefficients;
                prop_assert_eq!(lc.coordinates, Coordinates::Linear);
                for &[x, y] in &line.points {
                    let lhs = lc.a * x + lc.b * y;
                    let scale = (lc.a * x).abs() + (lc.b * y).abs() + lc.c.abs();
                    prop_assert!((lhs - lc.c).abs() <= 1e-9 * scale, "({}, {}) off the line", x, y);
                    let at = metric.of(&eval(&m, x, y, y)?);
                    prop_assert!(rel(at, level) <= 1e-9, "{:?} at ({}, {}) = {} ≠ {}", metric, x, y, at, level);
                }
                if let (Some(p), Some(q), Some(s)) =
                    (line.points.first(), line.points.get(line.points.len() / 2), line.points.last())
                {
                    let cross = (q[0] - p[0]) * (s[1] - p[1]) - (q[1] - p[1]) * (s[0] - p[0]);
                    let norm = ((q[0] - p[0]).hypot(q[1] - p[1])) * ((s[0] - p[0]).hypot(s[1] - p[1]));
                    prop_assert!(cross.abs() <= 1e-9 * norm.max(f64::MIN_POSITIVE), "cross product {}", cross);
                }
                // Same level set in the (XBs, BW) plane, in reciprocal coordinates.
                if !power {
                    let window =
                        Window { x_min: 1.0, x_max: 1e7, y_min: 1e8, y_max: 1e15, points: 16, ..Window::xbs_bw() };
                    let l = iso_line_xbs_bw(&m, cc, d, metric, level, &window)
                        .map_err(|e| TestCaseError::fail(e.to_string()))?;
                    for &[xbs, bw] in &l.points {
                        let at = eval(&MachineConfig { xbs, bw, ..m }, cc, d, d)?.tp_combined;
                        prop_assert!(rel(at, level) <= 1e-9, "xbs_bw ({}, {}) = {} ≠ {}", xbs, bw, at, level);
                    }
                }
                Ok(())
            },
        ),
        property(
            "crossover partition",
            (any_machine(), cc(), log_uniform(1.0, 1e3), 0.0f64..1.0),
            |(m, cc, dio_cpu, frac)| {
                let dio_comb = dio_cpu * frac;
                prop_assume!(dio_comb > 0.0);
                let x = crossover_xbs_bw(&m, cc, dio_cpu, dio_comb, &Window::xbs_bw())
                    .map_err(|e| TestCaseError::fail(e.to_string()))?;
                let w = WorkloadProfile::new("x", cc, 0.0, dio_cpu, dio_comb);
                for curve in [&x.throughput, &x.power] {
                    if let Some(k) = curve.slope {
                        // Points on the curve itself are ties.
                        prop_assume!(rel(m.xbs, k * m.bw) > 1e-9);
                    }
                    let closed = curve.region(m.xbs, m.bw);
                    let direct =
                        evaluated_region(&m, &w, curve.metric).map_err(|e| TestCaseError::fail(e.to_string()))?;
                    prop_assert_eq!(closed, direct, "{:?} at xbs {} bw {}", curve.metric, m.xbs, m.bw);
                }
                Ok(())
            },
        ),
    ];
    for r in results {
        if let Err(e) = r {
            failures.push(e);
        }
    }
    if failures.is_empty() {
        Ok(())
    } else {
        Err(failures)
    }
}

/// Table 1 reduction column, written out per row. The Filter1 entry is taken
/// from its row semantics (N·S minus the transferred N₁·S + N).
fn tabulated_reduction(uc: UseCase, n: f64) -> f64 {
    match uc {
        UseCase::CpuPure { .. } => 0.0,
        UseCase::CpuPureTwoPass { s, s1, p } => n * s - (n * s1 + n * p * s),
        UseCase::PimPure { s } => n * s,
        UseCase::Compact { s, s1 } => n * (s - s1),
        UseCase::Filter1 { s, p } => n * s - (n * p * s + n),
        UseCase::Filter2 { s, p, ceil_index } => {
            let index = if ceil_index { n.log2().ceil() } else { n.log2() };
            n * s - n * p * (s + index)
        }
        UseCase::Hybrid { s, s1, p } => n * (s - 1.0) - n * p * s1,
        UseCase::Reduction0 { s, s1 } => n * s - s1,
        UseCase::Reduction1 { s, s1, r } => n * s - (n / r).ceil() * s1,
    }
}

fn usecases() -> Outcome {
    let mut c = Checks::default();
    let strategy = (1.0f64..1e9, 1.0f64..4096.0, 0.0f64..1.0, 0.0f64..1.0, 1.0f64..65536.0, prop::bool::ANY)
        .prop_map(|(n, s, s1_frac, p, r, ceil)| (n.floor(), s, s * s1_frac, p, r.floor(), ceil));
    let result = runner().run(&strategy, |(n, s, s1, p, r, ceil)| {
        let cases = [
            UseCase::CpuPure { s },
            UseCase::CpuPureTwoPass { s, s1, p },
            UseCase::PimPure { s },
            UseCase::Compact { s, s1 },
            UseCase::Filter1 { s, p },
            UseCase::Filter2 { s, p, ceil_index: ceil },
            UseCase::Hybrid { s, s1, p },
            UseCase::Reduction0 { s, s1: s + s1 },
            UseCase::Reduction1 { s, s1: s + s1, r },
        ];
        for uc in cases {
            let total = uc.total_transfer_bits(n).map_err(|e| TestCaseError::fail(e.to_string()))?;
            let saved = uc.transfer_reduction_bits(n).map_err(|e| TestCaseError::fail(e.to_string()))?;
            let table = tabulated_reduction(uc, n);
            let ns = n * s;
            prop_assert!(
                (total + table - ns).abs() <= 1e-12 * ns.max(total.abs()),
                "{:?}: {} + {} ≠ {}",
                uc,
                total,
                table,
                ns
            );
            prop_assert!((saved - table).abs() <= 1e-12 * ns.max(table.abs()), "{:?}: {} ≠ {}", uc, saved, table);
        }
        Ok(())
    });
    if let Err(e) = result {
        c.0.push(format!("conservation: {e}"));
    }
    let dio = UseCase::Filter1 { s: 200.0, p: 0.01 }.dio_per_computation(1e6).map_err(|e| vec![e.to_string()])?;
    c.relative("Filter1 DIO at (200, 0.01)", dio, 3.0, 1e-12);
    c.done()
}

fn interface() -> Outcome {
    let mut c = Checks::default();

    // Documents survive emit → parse with every double bit-identical.
    let doc = (any_machine(), log_uniform(1e-3, 1e7), 0.0f64..1e4, log_uniform(1e-3, 1e4), 0.0f64..1e4).prop_map(
        |(m, oc, pac, dc, dp)| ConfigDocument {
            machine: MachineOverrides::full(&m),
            workload: Some(WorkloadSection::explicit(&WorkloadProfile::new("rt", oc, pac, dc, dp))),
            ..ConfigDocument::default()
        },
    );
    let result = runner().run(&doc, |doc| {
        let text = serde_json::to_string(&doc).unwrap();
        let back = parse_config(&text).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert_eq!(&back, &doc);
        let (a, b) = (doc.resolve().unwrap(), back.resolve().unwrap());
        let bits = |m: &MachineConfig| [m.xbs, m.rows, m.cycle_time, m.ebit_pim, m.bw, m.ebit_cpu].map(f64::to_bits);
        prop_assert_eq!(bits(&a.machine), bits(&b.machine));
        prop_assert_eq!(a.workload.oc.to_bits(), b.workload.oc.to_bits());
        prop_assert_eq!(a.workload.dio_combined.to_bits(), b.workload.dio_combined.to_bits());
        // Results survive the JSON table too, infinities included.
        let r = evaluate(&a.machine, &a.workload).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let rows = vec![TableRow { label: "rt".into(), machine: a.machine, workload: a.workload.clone(), result: r }];
        prop_assert_eq!(parse_table_json(&emit_table(&rows, Format::Json)).unwrap(), rows);
        Ok(())
    });
    if let Err(e) = result {
        c.0.push(format!("config round trip: {e}"));
    }

    let bin = env!("CARGO_BIN_EXE_bitlet");
    let dir = std::env::temp_dir().join(format!("bitlet-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| vec![e.to_string()])?;

    let mut s = scenarios::find("table10/floatpim-default").ok_or_else(|| vec!["missing scenario".to_string()])?;
    let status = |args: &[&str]| Command::new(bin).args(args).output().map(|o| o.status.code());
    c.holds("intact scenario exits 0", matches!(status(&["scenario", &s.id]), Ok(Some(0))));
    let e = s.expectations.iter_mut().find(|e| matches!(e.check, Check::Decimals(_))).unwrap();
    e.value += 1.0;
    let corrupt = dir.join("corrupt.json");
    std::fs::write(&corrupt, serde_json::to_string(&s).unwrap()).map_err(|e| vec![e.to_string()])?;
    let code = status(&["scenario", "--file", corrupt.to_str().unwrap()]);
    c.holds(&format!("corrupted scenario exits 1 (got {code:?})"), matches!(code, Ok(Some(1))));

    // Golden CSV for Table 6 via `compare`.
    let mut args = vec!["compare".to_string(), "--config".to_string()];
    for id in ["or16", "add16", "mult16", "mult32", "mult64"] {
        let p = dir.join(format!("{id}.json"));
        std::fs::write(&p, format!("{{\"scenario\": \"table6/{id}\"}}")).unwrap();
        args.push(p.to_string_lossy().into_owned());
    }
    args.extend(["--format".to_string(), "csv".to_string()]);
    let out = Command::new(bin).args(&args).output().map_err(|e| vec![e.to_string()])?;
    let golden = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/table6.csv"))
        .map_err(|e| vec![e.to_string()])?;
    c.holds("table6 CSV matches golden file", String::from_utf8_lossy(&out.stdout) == golden);
    c.holds(
        "CSV header is the documented contract",
        golden.lines().next()
            == Some("label,tp_pim_gops,tp_cpu_gops,tp_combined_gops,p_pim_w,p_cpu_w,p_combined_w,epc_pim_jgop,epc_cpu_jgop,epc_combined_jgop"),
    );
    let _ = std::fs::remove_dir_all(&dir);
    c.done()
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("worked example: shifted vector-add", worked_example),
        ("data transfer throughput by DIO", table3),
        ("binary operations, five columns", table6),
        ("Hadamard product", table7),
        ("convolution constants and throughput", tables8_9),
        ("FloatPIM vs defaults", table10),
        ("fixed-point dot product", fipdp),
        ("randomized model properties", properties),
        ("use case conservation", usecases),
        ("config round trip, exit codes, golden CSV", interface),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(()) => println!("PASS  criterion {:>2}: {name}", i + 1),
            Err(reasons) => {
                failed += 1;
                println!("FAIL  criterion {:>2}: {name}", i + 1);
                for r in reasons {
                    println!("        {r}");
                }
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
