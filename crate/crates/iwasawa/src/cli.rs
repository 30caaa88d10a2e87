//! Command-line front end: fixture-driven deduction runs, individual
//! formula evaluations, and the conclusions-table report.
//!
//! Exit status: 0 on success, 1 on fixture or computation errors, 2 on
//! usage errors, 3 when the report finds a derived value contradicting an
//! exact expected value. Output is byte-identical across runs for
//! identical inputs; rows are assembled in label order.

use std::fs::File;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::ambiguous::{ambiguous_count, ChevalleyInput};
use crate::class_data::{
    classify_ramification_p2, classify_ramification_p3, load_fixtures, ExampleRecord,
    ExpectedInvariants, ExpectedValue, RamificationStatus,
};
use crate::deduction::{
    deduce, invariants_summary, DeductionResult, LambdaResult, MuResult, NuResult,
};
use crate::elem::{ElementaryModule, NuQuotient};
use crate::lambda::{parse_poly, LambdaPoly};
use crate::padic::{PadicContext, DEFAULT_PRECISION};
use crate::Error;

#[derive(Debug, Parser)]
#[command(
    name = "iwasawa",
    version,
    about = "Iwasawa invariants of Z_p-extensions from layerwise class-group data"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Derive (mu, lambda, nu) for fixture records, with the rule trace
    Deduce {
        /// Path to a JSON fixture file
        #[arg(long)]
        fixtures: PathBuf,
        /// Restrict to records with this exact label
        #[arg(long)]
        label: Option<String>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Evaluate Chevalley's ambiguous class number formula
    Chevalley {
        /// Class number of the base field
        #[arg(long)]
        h: u64,
        /// Degree of the cyclic extension
        #[arg(long)]
        deg: u64,
        /// Comma-separated ramification indices, e.g. 2,2,2
        #[arg(long, value_delimiter = ',')]
        ram: Vec<u64>,
        /// Unit index [E : E ∩ N(L^x)]
        #[arg(long = "unit-index")]
        unit_index: u64,
    },
    /// Exponent of #(E/nu_n E) for an elementary module
    Quotient {
        #[arg(long)]
        p: u64,
        /// Comma-separated summands: p^j for a p-power part, f:<poly> for
        /// a distinguished polynomial, e.g. "p^1,f:T^2+3T+3"
        #[arg(long)]
        summands: String,
        /// Layer index n
        #[arg(long)]
        level: u32,
        /// Working precision override, in p-adic digits
        #[arg(long)]
        precision: Option<u32>,
    },
    /// Ramification classifier for the first layer of the tower
    Ramify {
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..=3))]
        p: u64,
        #[arg(long)]
        d: i64,
    },
    /// Reproduce the conclusions table from a fixture file
    Report {
        #[arg(long)]
        fixtures: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
}

/// Parse argv, execute, and return the process exit status.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok((text, status)) => {
            print!("{text}");
            status
        }
        Err(e) => {
            eprintln!("error: {e}");
            // malformed flag values are usage errors, like clap's own
            match &e {
                Error::Parse { path, .. } if path == "<summands>" || path == "<poly>" => 2,
                _ => 1,
            }
        }
    }
}

fn execute(command: Command) -> Result<(String, i32), Error> {
    match command {
        Command::Deduce {
            fixtures,
            label,
            format,
        } => {
            let records = select(load(&fixtures)?, label.as_deref())?;
            let results = records
                .iter()
                .map(|rec| deduce(rec).map(|res| (rec, res)))
                .collect::<Result<Vec<_>, _>>()?;
            let text = match format {
                Format::Text => {
                    let blocks: Vec<String> = results
                        .iter()
                        .map(|(rec, res)| deduce_block(rec, res))
                        .collect();
                    format!("{}\n", blocks.join("\n"))
                }
                Format::Json => {
                    let vals: Vec<Value> = results
                        .iter()
                        .map(|(rec, res)| record_json(rec, res, None))
                        .collect();
                    render_json(&Value::Array(vals))
                }
            };
            Ok((text, 0))
        }
        Command::Chevalley {
            h,
            deg,
            ram,
            unit_index,
        } => {
            let count = ambiguous_count(&ChevalleyInput::new(h, deg, ram, unit_index)?)?;
            Ok((format!("{count}\n"), 0))
        }
        Command::Quotient {
            p,
            summands,
            level,
            precision,
        } => {
            let ctx = PadicContext::new(p, precision.unwrap_or(DEFAULT_PRECISION))?;
            let module = parse_summands(ctx, &summands)?;
            let text = match module.quotient_order_nu(level) {
                NuQuotient::Finite(v) => format!("{v}\n"),
                NuQuotient::Infinite => "infinite\n".to_string(),
                NuQuotient::IndeterminateAtPrecision(n) => {
                    format!("indeterminate at precision {n}\n")
                }
            };
            Ok((text, 0))
        }
        Command::Ramify { p, d } => {
            let text = if p == 3 {
                if d <= 0 {
                    return Err(Error::Domain("d must be positive for p = 3".into()));
                }
                let r = classify_ramification_p3(d as u64)?;
                let status = match r.status {
                    RamificationStatus::TotallyRamified => "totally ramified",
                    RamificationStatus::Unramified => "unramified",
                };
                format!(
                    "status: {status}\nv3(disc K1/Q) = {}\nv3(disc K0/Q) = {}\n",
                    r.v3_disc_k1, r.v3_disc_k0
                )
            } else {
                let r = classify_ramification_p2(d)?;
                format!(
                    "totally ramified above 2: {}\nsingle prime above 2: {}\n",
                    r.totally_ramified, r.single_prime_above_2
                )
            };
            Ok((text, 0))
        }
        Command::Report { fixtures, format } => {
            let records = select(load(&fixtures)?, None)?;
            let mut rows = Vec::new();
            let mut contradiction = false;
            for rec in &records {
                let res = deduce(rec)?;
                let bad = contradicted_fields(rec.expected.as_ref(), &res);
                contradiction |= !bad.is_empty();
                rows.push((rec, res, bad));
            }
            let status = if contradiction { 3 } else { 0 };
            let text = match format {
                Format::Text => {
                    let mut out = String::from("label | p | s | e | invariants | status\n");
                    for (rec, res, bad) in &rows {
                        out.push_str(&format!(
                            "{} | {} | {} | {} | {} | {}\n",
                            rec.label,
                            rec.p,
                            rec.s,
                            format_e(rec),
                            invariants_summary(res),
                            status_cell(rec, bad)
                        ));
                    }
                    out
                }
                Format::Json => {
                    let vals: Vec<Value> = rows
                        .iter()
                        .map(|(rec, res, bad)| record_json(rec, res, Some(status_cell(rec, bad))))
                        .collect();
                    render_json(&Value::Array(vals))
                }
            };
            Ok((text, status))
        }
    }
}

fn load(path: &Path) -> Result<Vec<ExampleRecord>, Error> {
    let file = File::open(path).map_err(|e| Error::Parse {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    load_fixtures(file)
}

/// Filter by exact label (when given) and sort by (label, p) so output
/// order never depends on fixture order.
fn select(
    mut records: Vec<ExampleRecord>,
    label: Option<&str>,
) -> Result<Vec<ExampleRecord>, Error> {
    if let Some(l) = label {
        records.retain(|r| r.label == l);
        if records.is_empty() {
            return Err(Error::Validation(format!("no record has label {l:?}")));
        }
    }
    records.sort_by(|a, b| a.label.cmp(&b.label).then(a.p.cmp(&b.p)));
    Ok(records)
}

fn format_e(rec: &ExampleRecord) -> String {
    let e: Vec<String> = rec.e_sequence().iter().map(u64::to_string).collect();
    format!("[{}]", e.join(","))
}

fn deduce_block(rec: &ExampleRecord, res: &DeductionResult) -> String {
    let mut out = format!(
        "{} | p={} | s={} | e={}\n",
        rec.label,
        rec.p,
        rec.s,
        format_e(rec)
    );
    for step in &res.trace {
        out.push_str(&format!(
            "  {} {}  [{}]\n",
            step.rule.as_str(),
            step.consequence,
            step.citation
        ));
    }
    out.push_str(&format!("  result: {}\n", invariants_summary(res)));
    out
}

fn status_cell(rec: &ExampleRecord, bad: &[&'static str]) -> String {
    let conditional = rec
        .aux
        .as_ref()
        .and_then(|a| a.conditional)
        .unwrap_or(false);
    let mut cell = if bad.is_empty() {
        "OK".to_string()
    } else {
        format!("CONTRADICTED[{}]", bad.join(","))
    };
    if conditional {
        cell.push_str(" [conditional]");
    }
    cell
}

/// Fields whose exact expected value the derived result contradicts.
fn contradicted_fields(
    expected: Option<&ExpectedInvariants>,
    res: &DeductionResult,
) -> Vec<&'static str> {
    let Some(exp) = expected else {
        return Vec::new();
    };
    let mut out = Vec::new();
    if let Some(ExpectedValue::Exact(v)) = exp.mu {
        let ok = v >= 0 && res.mu.contains(v as u64);
        if !ok {
            out.push("mu");
        }
    }
    if let Some(ExpectedValue::Exact(v)) = exp.lambda {
        let ok = v >= 0
            && match res.lambda {
                LambdaResult::Exact(w) => w == v as u64,
                LambdaResult::Constrained { divisor, max } => {
                    (v as u64).is_multiple_of(divisor) && max.is_none_or(|m| v as u64 <= m)
                }
            };
        if !ok {
            out.push("lambda");
        }
    }
    if let Some(ExpectedValue::Exact(v)) = exp.nu {
        let ok = match res.nu {
            NuResult::Exact(w) => w == v,
            NuResult::AtLeast(m) => v >= m,
            NuResult::Unknown => true,
        };
        if !ok {
            out.push("nu");
        }
    }
    out
}

fn mu_json(mu: &MuResult) -> Value {
    match *mu {
        MuResult::Exact(v) => json!(v),
        MuResult::Range { min, max } => json!({ "min": min, "max": max }),
    }
}

fn lambda_json(lambda: &LambdaResult) -> Value {
    match *lambda {
        LambdaResult::Exact(v) => json!(v),
        LambdaResult::Constrained {
            divisor: 1,
            max: None,
        } => json!("unknown"),
        LambdaResult::Constrained {
            divisor: 1,
            max: Some(m),
        } => json!({ "max": m }),
        LambdaResult::Constrained { divisor, max: None } => json!({ "divisor": divisor }),
        LambdaResult::Constrained {
            divisor,
            max: Some(m),
        } => {
            json!({ "divisor": divisor, "max": m })
        }
    }
}

fn nu_json(nu: &NuResult) -> Value {
    match *nu {
        NuResult::Exact(v) => json!(v),
        NuResult::AtLeast(m) => json!({ "min": m }),
        NuResult::Unknown => json!("unknown"),
    }
}

/// One record as JSON; exponents stay integers, powers are never expanded.
fn record_json(rec: &ExampleRecord, res: &DeductionResult, status: Option<String>) -> Value {
    let residuals: Vec<Value> = res
        .residuals
        .iter()
        .map(|(mu, r)| json!({ "mu": mu, "values": r }))
        .collect();
    let trace: Vec<Value> = res
        .trace
        .iter()
        .map(|t| {
            json!({
                "rule": t.rule.as_str(),
                "cite": t.citation,
                "note": t.consequence,
            })
        })
        .collect();
    let mut obj = json!({
        "label": rec.label,
        "p": rec.p,
        "s": rec.s,
        "e": rec.e_sequence(),
        "mu": mu_json(&res.mu),
        "lambda": lambda_json(&res.lambda),
        "nu": nu_json(&res.nu),
        "residuals": residuals,
        "asymptotic_from": res.asymptotic_from,
        "trace": trace,
    });
    if let Some(status) = status {
        obj.as_object_mut()
            .expect("record_json builds an object")
            .insert("status".into(), json!(status));
    }
    obj
}

/// Stable, key-sorted JSON rendering (the serializer orders map keys).
pub fn render_json(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("JSON rendering cannot fail");
    text.push('\n');
    text
}

/// Build an elementary module from a summand list like "p^1,f:T^2+3T+3".
fn parse_summands(ctx: PadicContext, spec: &str) -> Result<ElementaryModule, Error> {
    let mut p_exponents = Vec::new();
    let mut dist_polys: Vec<LambdaPoly> = Vec::new();
    for token in spec.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        if let Some(exp) = token.strip_prefix("p^") {
            let j: u32 = exp.parse().map_err(|_| Error::Parse {
                path: "<summands>".into(),
                message: format!("bad p-power exponent in {token:?}"),
            })?;
            p_exponents.push(j);
        } else if let Some(poly) = token.strip_prefix("f:") {
            dist_polys.push(parse_poly(ctx, poly)?);
        } else {
            return Err(Error::Parse {
                path: "<summands>".into(),
                message: format!("summand {token:?} is neither p^j nor f:<poly>"),
            });
        }
    }
    ElementaryModule::new(ctx, p_exponents, dist_polys)
}
