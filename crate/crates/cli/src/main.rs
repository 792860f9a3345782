//! Command-line front end: dataset ingestion, engine selection, report
//! emission, built-in dataset listing, and the regression runner.
//!
//! Exit codes: 0 success; 1 I/O, schema, validation, or chamber errors;
//! 2 the exact engine found an uncancelled singularity. Diagnostics go to
//! stderr, reports to stdout.

use std::fmt::Display;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;

use avindex_core::averaging::{
    compute_index, default_nodes, renormalized_class, valid_node_count, Chamber, Engine,
    RunOptions,
};
use avindex_core::localization::{builtin_dataset, builtin_names};
use avindex_core::selftest::run_filtered;
use avindex_core::series::RootMonomial;
use avindex_core::{Dataset, OperatorKind};

#[derive(Parser)]
#[command(
    name = "avindex",
    about = "Exact and numeric index computation from torus fixed-point data",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the index of a dataset.
    Index(RunArgs),
    /// Report the chamber-averaged normal/auxiliary class per component.
    Nclass(RunArgs),
    /// Run the regression checks.
    Selftest {
        /// Only run checks whose name contains this substring.
        #[arg(long)]
        filter: Option<String>,
    },
    /// List the built-in datasets.
    List,
}

#[derive(Args)]
struct RunArgs {
    /// Name of a built-in dataset.
    #[arg(long, conflicts_with = "dataset")]
    builtin: Option<String>,
    /// Path to a dataset JSON file.
    #[arg(long)]
    dataset: Option<String>,
    /// Override the dataset's operator.
    #[arg(long, value_enum)]
    operator: Option<OperatorArg>,
    /// Which engine(s) to run.
    #[arg(long, value_enum, default_value_t = EngineArg::Both)]
    engine: EngineArg,
    /// Chamber coordinates "q1,q2,..." as rationals, or "auto".
    #[arg(long, default_value = "auto")]
    chamber: String,
    /// Quadrature nodes per axis (power of two in [64, 2^20]).
    #[arg(long)]
    nodes: Option<usize>,
    /// Raise the series truncation order (debugging aid).
    #[arg(long)]
    trunc: Option<usize>,
    /// Report format.
    #[arg(long, value_enum, default_value_t = ReportArg::Text)]
    report: ReportArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum OperatorArg {
    Dirac,
    Signature,
    Euler,
}

impl From<OperatorArg> for OperatorKind {
    fn from(value: OperatorArg) -> Self {
        match value {
            OperatorArg::Dirac => OperatorKind::Dirac,
            OperatorArg::Signature => OperatorKind::Signature,
            OperatorArg::Euler => OperatorKind::Euler,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    Exact,
    Numeric,
    Both,
}

impl From<EngineArg> for Engine {
    fn from(value: EngineArg) -> Self {
        match value {
            EngineArg::Exact => Engine::Exact,
            EngineArg::Numeric => Engine::Numeric,
            EngineArg::Both => Engine::Both,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportArg {
    Text,
    Json,
}

fn fail(message: impl Display) -> ExitCode {
    eprintln!("error: {}", message);
    ExitCode::from(1)
}

fn load_dataset(args: &RunArgs) -> Result<Dataset, String> {
    let mut dataset = match (&args.builtin, &args.dataset) {
        (Some(name), None) => builtin_dataset(name).ok_or_else(|| {
            format!(
                "unknown builtin {:?}; available: {}",
                name,
                builtin_names().join(", ")
            )
        })?,
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read {}: {}", path, e))?;
            Dataset::from_json(&text).map_err(|e| e.to_string())?
        }
        _ => return Err("exactly one of --builtin or --dataset is required".into()),
    };
    if let Some(op) = args.operator {
        dataset = dataset.with_operator(op.into());
    }
    for diag in dataset.validate() {
        let scope = diag.component.as_deref().unwrap_or("dataset");
        if diag.fatal {
            return Err(format!("{}: {}", scope, diag.message));
        }
        eprintln!("warning: {}: {}", scope, diag.message);
    }
    Ok(dataset)
}

fn parse_chamber(text: &str, rank: usize) -> Result<Option<Chamber>, String> {
    if text == "auto" {
        return Ok(None);
    }
    let values: Result<Vec<BigRational>, String> = text
        .split(',')
        .map(|part| {
            BigRational::from_str(part.trim())
                .map_err(|_| format!("invalid chamber coordinate {:?}", part.trim()))
        })
        .collect();
    let values = values?;
    if values.len() != rank {
        return Err(format!(
            "chamber has {} coordinates, dataset rank is {}",
            values.len(),
            rank
        ));
    }
    Ok(Some(Chamber::new(values)))
}

fn run_options(args: &RunArgs, dataset: &Dataset) -> Result<RunOptions, String> {
    if let Some(n) = args.nodes {
        if !valid_node_count(n) {
            return Err(format!(
                "--nodes must be a power of two in [64, 1048576], got {}",
                n
            ));
        }
    }
    Ok(RunOptions {
        chamber: parse_chamber(&args.chamber, dataset.rank)?,
        nodes: args.nodes,
        truncation: args.trunc,
        mode: None,
    })
}

fn cmd_index(args: &RunArgs) -> ExitCode {
    let dataset = match load_dataset(args) {
        Ok(d) => d,
        Err(e) => return fail(e),
    };
    let options = match run_options(args, &dataset) {
        Ok(o) => o,
        Err(e) => return fail(e),
    };
    let report = match compute_index(&dataset, args.engine.into(), &options) {
        Ok(r) => r,
        Err(e) => return fail(e),
    };
    match args.report {
        ReportArg::Text => print!("{}", report),
        ReportArg::Json => println!("{}", report.to_json()),
    }
    if report.has_uncancelled_singularity() {
        eprintln!("error: singularities did not cancel; see the surviving factors above");
        return ExitCode::from(2);
    }
    ExitCode::SUCCESS
}

fn format_monomial(m: &RootMonomial) -> String {
    let parts: Vec<String> = m
        .iter()
        .enumerate()
        .filter(|(_, &p)| p > 0)
        .map(|(i, &p)| {
            if p == 1 {
                format!("x{}", i)
            } else {
                format!("x{}^{}", i, p)
            }
        })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

fn cmd_nclass(args: &RunArgs) -> ExitCode {
    let dataset = match load_dataset(args) {
        Ok(d) => d,
        Err(e) => return fail(e),
    };
    let options = match run_options(args, &dataset) {
        Ok(o) => o,
        Err(e) => return fail(e),
    };
    let chamber = options
        .chamber
        .clone()
        .unwrap_or_else(|| avindex_core::default_chamber(&dataset));
    let violations = avindex_core::chamber_validate(&chamber, &dataset);
    if !violations.is_empty() {
        let detail: Vec<String> = violations
            .iter()
            .map(|v| format!("{} (weight {:?})", v.component, v.weight.0))
            .collect();
        return fail(format!(
            "chamber lies on a weight hyperplane: {}",
            detail.join(", ")
        ));
    }
    let nodes = options.nodes.unwrap_or_else(|| default_nodes(dataset.rank));

    let mut json_components = Vec::new();
    for component in &dataset.components {
        let rows = match renormalized_class(
            component,
            dataset.operator,
            dataset.rank,
            &chamber,
            nodes,
            Default::default(),
        ) {
            Ok(r) => r,
            Err(e) => return fail(e),
        };
        match args.report {
            ReportArg::Text => {
                println!("{}:", component.name);
                for (monomial, q) in &rows {
                    println!(
                        "  {}: {:.12} (error estimate {:.3e})",
                        format_monomial(monomial),
                        q.value,
                        q.error_estimate
                    );
                }
            }
            ReportArg::Json => {
                let coeffs: Vec<serde_json::Value> = rows
                    .iter()
                    .map(|(m, q)| {
                        serde_json::json!({
                            "monomial": format_monomial(m),
                            "value": q.value,
                            "error_estimate": q.error_estimate,
                        })
                    })
                    .collect();
                json_components.push(serde_json::json!({
                    "name": component.name,
                    "coefficients": coeffs,
                }));
            }
        }
    }
    if matches!(args.report, ReportArg::Json) {
        let doc = serde_json::json!({
            "chamber": chamber.coordinate_strings(),
            "nodes": nodes,
            "components": json_components,
        });
        println!("{}", serde_json::to_string_pretty(&doc).expect("serializes"));
    }
    ExitCode::SUCCESS
}

fn cmd_selftest(filter: Option<&str>) -> ExitCode {
    let (passed, failed, lines) = run_filtered(filter);
    for line in lines {
        println!("{}", line);
    }
    println!("{} passed, {} failed", passed, failed);
    if failed > 0 || passed == 0 {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Index(args) => cmd_index(&args),
        Command::Nclass(args) => cmd_nclass(&args),
        Command::Selftest { filter } => cmd_selftest(filter.as_deref()),
        Command::List => {
            for name in builtin_names() {
                let d = builtin_dataset(name).expect("listed builtin exists");
                println!(
                    "{}  (rank {}, {} components, operator {})",
                    name,
                    d.rank,
                    d.components.len(),
                    d.operator
                );
            }
            ExitCode::SUCCESS
        }
    }
}
