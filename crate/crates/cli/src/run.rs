//! Subcommand implementations.
//!
//! Every table is emitted in `(N, t)` order regardless of evaluation
//! order, so identical configurations produce byte-identical files.

use std::collections::BTreeMap;
use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};

use rayon::prelude::*;
use rug::Float;

use regpart_core::asymptotics::{
    estimate_hagis, estimate_regime1, estimate_regime2, estimate_regime3,
    saddle_point_estimate_from_root, EstimateError, EstimateKind, RegimeEstimate,
};
use regpart_core::exact_count::{count_regular, CountTable};
use regpart_core::mu_lab::MuTables;
use regpart_core::numerics::{ln_big, Precision};
use regpart_core::saddle::{classify_regime, regime1_boundary, Regime};

use crate::config::{Cli, Command, CommonArgs, InclusiveRange};
use crate::emit::{format_real, Field, TableSink};
use crate::suites::{
    run_all_suites, run_suite, SuiteOptions, ValidationRecord, CONTAINMENT_WIDENING_C,
};

#[derive(Debug)]
pub enum RunError {
    Usage(String),
    Io { path: String, source: io::Error },
    Compute(String),
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunError::Usage(msg) => write!(f, "usage error: {msg}"),
            RunError::Io { path, source } => write!(f, "I/O error on {path}: {source}"),
            RunError::Compute(msg) => write!(f, "{msg}"),
        }
    }
}

impl std::error::Error for RunError {}

fn open_sink(common: &CommonArgs, columns: &[&str]) -> Result<TableSink<Box<dyn Write>>, RunError> {
    let out: Box<dyn Write> = match &common.out {
        Some(path) => Box::new(BufWriter::new(File::create(path).map_err(|source| {
            RunError::Io {
                path: path.display().to_string(),
                source,
            }
        })?)),
        None => Box::new(BufWriter::new(io::stdout())),
    };
    Ok(TableSink::new(common.format, columns, out))
}

fn io_err(common: &CommonArgs, source: io::Error) -> RunError {
    RunError::Io {
        path: common
            .out
            .as_ref()
            .map(|p| p.display().to_string())
            .unwrap_or_else(|| "<stdout>".to_string()),
        source,
    }
}

fn parse_decimal(prec: Precision, what: &str, s: &str) -> Result<Float, RunError> {
    prec.parse(s)
        .map_err(|e| RunError::Usage(format!("bad {what} {s:?}: {e}")))
}

/// Executes a parsed command line; returns the process exit code.
pub fn run_command(cli: Cli) -> Result<i32, RunError> {
    match cli.command {
        Command::Exact { n, t, common } => cmd_exact(n, t, &common),
        Command::Estimate {
            n,
            t,
            epsilon,
            exact_budget,
            common,
        } => cmd_estimate(n, t, &epsilon, exact_budget, &common),
        Command::Saddle { n, t, tol, common } => cmd_saddle(n, t, tol.as_deref(), &common),
        Command::Regime {
            n,
            t,
            epsilon,
            common,
        } => cmd_regime(n, t, &epsilon, &common),
        Command::Validate {
            suite,
            inv_y,
            t,
            epsilon,
            exact_budget,
            common,
        } => cmd_validate(suite.as_deref(), inv_y, t, &epsilon, exact_budget, &common),
        Command::Zeros {
            n,
            t,
            epsilon,
            f_override,
            common,
        } => cmd_zeros(n, t, &epsilon, f_override.as_deref(), &common),
    }
}

fn cmd_exact(n: InclusiveRange, t: InclusiveRange, common: &CommonArgs) -> Result<i32, RunError> {
    let _ = common.precision().map_err(RunError::Usage)?;
    if t.start < 1 {
        return Err(RunError::Usage("exact requires t >= 1".into()));
    }
    let mut sink = open_sink(common, &["N", "t", "count"])?;
    for tv in t.iter() {
        let table = count_regular(n.end, tv).map_err(|e| RunError::Compute(e.to_string()))?;
        for nv in n.iter() {
            sink.row(&[
                Field::Int(nv),
                Field::Int(tv),
                Field::Real(table.get(nv).to_string()),
            ])
            .map_err(|e| io_err(common, e))?;
        }
    }
    sink.finish().map_err(|e| io_err(common, e))?;
    Ok(0)
}

/// Containment check for the estimate table: two-sided brackets widened by
/// `C/sqrt(N)`, upper-only bounds taken strictly.
fn contained(prec: Precision, est: &RegimeEstimate, exact: &Float) -> bool {
    match est.kind {
        EstimateKind::UpperBoundOnly => *exact <= *est.log_upper.ln_abs(),
        EstimateKind::TwoSided => {
            let widen = Float::with_val(
                prec.bits(),
                prec.parse(CONTAINMENT_WIDENING_C).unwrap() / prec.real(est.n).sqrt(),
            );
            let lo = Float::with_val(prec.bits(), est.log_lower.ln_abs() - &widen);
            let hi = Float::with_val(prec.bits(), est.log_upper.ln_abs() + &widen);
            (est.log_lower.sign() == 0 || *exact >= lo) && *exact <= hi
        }
    }
}

fn cmd_estimate(
    n: InclusiveRange,
    t: InclusiveRange,
    epsilon: &str,
    exact_budget: u64,
    common: &CommonArgs,
) -> Result<i32, RunError> {
    let prec = common.precision().map_err(RunError::Usage)?;
    if t.start < 4 {
        return Err(RunError::Usage("estimate requires t >= 4".into()));
    }
    let eps = parse_decimal(prec, "epsilon", epsilon)?;

    // Exact tables per t, shared across the N range.
    let exact_max = n.end.min(exact_budget);
    let tables: BTreeMap<u64, CountTable> = t
        .iter()
        .collect::<Vec<_>>()
        .par_iter()
        .filter(|_| n.start <= exact_budget)
        .map(|&tv| (tv, count_regular(exact_max, tv).unwrap()))
        .collect();

    let cells: Vec<(u64, u64)> = n
        .iter()
        .flat_map(|nv| t.iter().map(move |tv| (nv, tv)))
        .collect();
    let rows: Vec<Vec<Field>> = cells
        .par_iter()
        .map(|&(nv, tv)| {
            let tag = match classify_regime(prec, nv, tv, &eps) {
                Ok(tag) => tag,
                Err(e) => {
                    return vec![
                        Field::Int(nv),
                        Field::Int(tv),
                        Field::Null,
                        Field::Null,
                        Field::Null,
                        Field::Null,
                        Field::Null,
                        Field::Null,
                        Field::Null,
                        Field::Str(format!("error: {e}")),
                    ]
                }
            };
            let est = match tag.regime {
                Regime::I => estimate_regime1(prec, nv, tv, &eps),
                Regime::II => estimate_regime2(prec, nv, tv, &eps),
                Regime::III => estimate_regime3(prec, nv, tv),
            };
            let hagis = estimate_hagis(prec, nv, tv);
            match est {
                Ok(est) => {
                    let exact = (nv <= exact_budget).then(|| ln_big(prec, tables[&tv].get(nv)));
                    let (exact_field, contained_field) = match &exact {
                        Some(le) => (Field::real(le), Field::Bool(contained(prec, &est, le))),
                        None => (Field::Null, Field::Null),
                    };
                    vec![
                        Field::Int(nv),
                        Field::Int(tv),
                        Field::Str(tag.regime.to_string()),
                        Field::Str(
                            match est.kind {
                                EstimateKind::TwoSided => "two_sided",
                                EstimateKind::UpperBoundOnly => "upper_bound_only",
                            }
                            .to_string(),
                        ),
                        Field::log_value(&est.log_lower),
                        Field::log_value(&est.log_upper),
                        match &hagis {
                            Ok(h) => Field::log_value(&h.log_upper),
                            Err(_) => Field::Null,
                        },
                        exact_field,
                        contained_field,
                        Field::Str(est.notes),
                    ]
                }
                Err(e) => vec![
                    Field::Int(nv),
                    Field::Int(tv),
                    Field::Str(tag.regime.to_string()),
                    Field::Null,
                    Field::Null,
                    Field::Null,
                    Field::Null,
                    Field::Null,
                    Field::Null,
                    Field::Str(format!("error: {e}")),
                ],
            }
        })
        .collect();

    let mut sink = open_sink(
        common,
        &[
            "N",
            "t",
            "regime",
            "kind",
            "log_lower",
            "log_upper",
            "log_hagis",
            "log_exact",
            "contained",
            "notes",
        ],
    )?;
    for row in rows {
        sink.row(&row).map_err(|e| io_err(common, e))?;
    }
    sink.finish().map_err(|e| io_err(common, e))?;
    Ok(0)
}

fn cmd_saddle(
    n: InclusiveRange,
    t: InclusiveRange,
    tol: Option<&str>,
    common: &CommonArgs,
) -> Result<i32, RunError> {
    let prec = common.precision().map_err(RunError::Usage)?;
    if t.start < 4 {
        return Err(RunError::Usage("saddle requires t >= 4".into()));
    }
    let tol = match tol {
        Some(s) => Some(parse_decimal(prec, "tol", s)?),
        None => None,
    };
    let tables = MuTables::new(prec);
    let cells: Vec<(u64, u64)> = n
        .iter()
        .flat_map(|nv| t.iter().map(move |tv| (nv, tv)))
        .collect();
    let solve_cell = |nv: u64, tv: u64| -> Result<_, EstimateError> {
        let saddle = regpart_core::saddle::solve_saddle(prec, &tables, nv, tv, tol.as_ref())?;
        let est = saddle_point_estimate_from_root(prec, &tables, &saddle, false)?;
        Ok((saddle, est))
    };
    let rows: Vec<Vec<Field>> = cells
        .par_iter()
        .map(|&(nv, tv)| match solve_cell(nv, tv) {
            Ok((saddle, est)) => {
                let inv_y = saddle.y.clone().recip();
                vec![
                    Field::Int(nv),
                    Field::Int(tv),
                    Field::real(&saddle.l),
                    Field::real(&saddle.y),
                    Field::real(&saddle.bracket.0),
                    Field::real(&saddle.bracket.1),
                    Field::real(&saddle.residual),
                    Field::Int(saddle.iterations as u64),
                    Field::Bool(inv_y >= 1000u32),
                    Field::log_value(&est.log_lower),
                    Field::log_value(&est.log_upper),
                    Field::Str(est.notes),
                ]
            }
            Err(e) => vec![
                Field::Int(nv),
                Field::Int(tv),
                Field::Null,
                Field::Null,
                Field::Null,
                Field::Null,
                Field::Null,
                Field::Null,
                Field::Null,
                Field::Null,
                Field::Null,
                Field::Str(format!("error: {e}")),
            ],
        })
        .collect();

    let mut sink = open_sink(
        common,
        &[
            "N",
            "t",
            "L",
            "y",
            "bracket_lower",
            "bracket_upper",
            "residual",
            "iterations",
            "hypothesis_ok",
            "log_est_lower",
            "log_est_upper",
            "notes",
        ],
    )?;
    for row in rows {
        sink.row(&row).map_err(|e| io_err(common, e))?;
    }
    sink.finish().map_err(|e| io_err(common, e))?;
    Ok(0)
}

fn cmd_regime(
    n: InclusiveRange,
    t: InclusiveRange,
    epsilon: &str,
    common: &CommonArgs,
) -> Result<i32, RunError> {
    let prec = common.precision().map_err(RunError::Usage)?;
    if t.start < 4 {
        return Err(RunError::Usage("regime requires t >= 4".into()));
    }
    let eps = parse_decimal(prec, "epsilon", epsilon)?;
    let mut sink = open_sink(common, &["N", "t", "regime", "epsilon", "regime1_boundary"])?;
    for nv in n.iter() {
        for tv in t.iter() {
            let tag = classify_regime(prec, nv, tv, &eps)
                .map_err(|e| RunError::Compute(e.to_string()))?;
            sink.row(&[
                Field::Int(nv),
                Field::Int(tv),
                Field::Str(tag.regime.to_string()),
                Field::Real(format_real(&eps)),
                Field::Real(format_real(&regime1_boundary(prec, nv, tv, &eps))),
            ])
            .map_err(|e| io_err(common, e))?;
        }
    }
    sink.finish().map_err(|e| io_err(common, e))?;
    Ok(0)
}

fn cmd_validate(
    suite: Option<&str>,
    inv_y: Vec<u64>,
    t: Option<InclusiveRange>,
    epsilon: &str,
    exact_budget: u64,
    common: &CommonArgs,
) -> Result<i32, RunError> {
    let prec = common.precision().map_err(RunError::Usage)?;
    let mut opts = SuiteOptions {
        epsilon: epsilon.to_string(),
        exact_budget,
        ..SuiteOptions::default()
    };
    if !inv_y.is_empty() {
        opts.inv_y = inv_y;
    }
    if let Some(range) = t {
        opts.quad_t = range.iter().collect();
    }
    let records = match suite {
        Some(name) => run_suite(prec, name, &opts).map_err(RunError::Usage)?,
        None => run_all_suites(prec, &opts).map_err(RunError::Usage)?,
    };
    let failures = write_validation_records(&records, common)?;
    Ok(if failures == 0 { 0 } else { 1 })
}

pub fn write_validation_records(
    records: &[ValidationRecord],
    common: &CommonArgs,
) -> Result<u64, RunError> {
    let mut sink = open_sink(common, &["suite", "cell", "observed", "bound", "pass"])?;
    let mut failures = 0u64;
    for r in records {
        if !r.pass {
            failures += 1;
        }
        sink.row(&[
            Field::Str(r.suite.clone()),
            Field::Str(r.cell.clone()),
            Field::Real(r.observed.clone()),
            Field::Real(r.bound.clone()),
            Field::Bool(r.pass),
        ])
        .map_err(|e| io_err(common, e))?;
    }
    sink.finish().map_err(|e| io_err(common, e))?;
    Ok(failures)
}

fn cmd_zeros(
    n: InclusiveRange,
    t: InclusiveRange,
    epsilon: &str,
    f_override: Option<&str>,
    common: &CommonArgs,
) -> Result<i32, RunError> {
    let prec = common.precision().map_err(RunError::Usage)?;
    let eps = parse_decimal(prec, "epsilon", epsilon)?;
    let f_val = match f_override {
        Some(s) => Some(parse_decimal(prec, "f-override", s)?),
        None => None,
    };
    let cells: Vec<(u64, u64)> = n
        .iter()
        .flat_map(|nv| t.iter().map(move |tv| (nv, tv)))
        .collect();
    let rows: Vec<Vec<Field>> = cells
        .par_iter()
        .map(|&(nv, tv)| {
            match regpart_core::asymptotics::z_lower_bound(prec, nv, tv, &eps, f_val.as_ref()) {
                Ok(report) => vec![
                    Field::Int(nv),
                    Field::Int(tv),
                    Field::Str(report.branch.to_string()),
                    Field::log_value(&report.c_t_main),
                    Field::log_value(&report.p_diff_lower),
                    Field::log_value(&report.p_diff_upper),
                    Field::log_value(&report.z_lower),
                    Field::Str(report.notes),
                ],
                Err(e @ EstimateError::Domain(_)) => vec![
                    Field::Int(nv),
                    Field::Int(tv),
                    Field::Null,
                    Field::Null,
                    Field::Null,
                    Field::Null,
                    Field::Null,
                    Field::Str(format!("range error: {e}")),
                ],
                Err(e) => vec![
                    Field::Int(nv),
                    Field::Int(tv),
                    Field::Null,
                    Field::Null,
                    Field::Null,
                    Field::Null,
                    Field::Null,
                    Field::Str(format!("error: {e}")),
                ],
            }
        })
        .collect();

    let mut sink = open_sink(
        common,
        &[
            "N",
            "t",
            "branch",
            "log_c_t_main",
            "log_p_diff_lower",
            "log_p_diff_upper",
            "log_z_lower",
            "notes",
        ],
    )?;
    for row in rows {
        sink.row(&row).map_err(|e| io_err(common, e))?;
    }
    sink.finish().map_err(|e| io_err(common, e))?;
    Ok(0)
}
