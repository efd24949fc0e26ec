//! Command-line front end: analysis reports, parameter sweeps, topology
//! checks and catalog export.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use so3ir_core::catalog::{make_space, wir_admissible_mu, CatalogId, Family};
use so3ir_core::riemannian::einstein_solve;
use so3ir_core::spacefile::parse_value;
use so3ir_core::{SpaceDefinition, DEFAULT_TOL};
use thiserror::Error;

pub mod render;
pub mod report;
pub mod sweep;
pub mod topology;

pub use render::Format;
pub use report::AnalysisReport;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] so3ir_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    /// 2 for bad input, 3 for a failed invariant.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if !e.is_input_error() => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "so3ir", version, about = "Geometry of five-dimensional SO(3)-irreducible homogeneous spaces")]
pub struct Cli {
    /// Numerical tolerance for zero tests and invariant checks
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    /// Output format; defaults to csv for sweeps and json otherwise
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the output here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Full analysis of one space
    Analyze(AnalyzeArgs),
    /// Evaluate a query over a parameter grid
    Sweep(SweepArgs),
    /// Einstein metrics of a family at fixed alpha
    Einstein(EinsteinArgs),
    /// Characteristic-class and intersection-form computations
    #[command(subcommand)]
    Topology(topology::TopologyCommand),
    /// List the built-in families or export one as a space file
    #[command(subcommand)]
    Catalog(CatalogCommand),
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false, id = "source")]
pub struct SpaceSource {
    /// Catalog family: vir24, vtilde24 or wir
    #[arg(long)]
    pub space: Option<String>,
    /// Space-definition JSON file
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub source: SpaceSource,
    /// alpha,beta,gamma
    #[arg(long)]
    pub params: Option<String>,
    /// Embedding parameter of wir, or `auto`
    #[arg(long, allow_hyphen_values = true)]
    pub mu: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Query {
    Existence,
    Sasaki,
    Einstein,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub space: String,
    #[arg(long, value_enum)]
    pub query: Query,
    /// lo:hi:n applied to every axis not given explicitly
    #[arg(long)]
    pub grid: Option<String>,
    #[arg(long)]
    pub alpha: Option<String>,
    #[arg(long)]
    pub beta: Option<String>,
    #[arg(long)]
    pub gamma: Option<String>,
    /// wir only; `auto` (default) takes the smaller admissible root per point
    #[arg(long, allow_hyphen_values = true)]
    pub mu: Option<String>,
}

#[derive(Debug, Args)]
pub struct EinsteinArgs {
    #[arg(long)]
    pub space: String,
    #[arg(long)]
    pub alpha: f64,
    /// Embedding parameter (wir only)
    #[arg(long, allow_hyphen_values = true)]
    pub mu: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum CatalogCommand {
    /// Families and their metrics
    List,
    /// Space-definition file of a catalog space
    Export {
        #[arg(long)]
        space: String,
        #[arg(long)]
        params: String,
        #[arg(long, allow_hyphen_values = true)]
        mu: Option<String>,
    },
}

/// Parsed `--mu` flag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MuChoice {
    Auto,
    Value(f64),
}

/// Numbers accept the space-file value syntax, e.g. `25/36` or `sqrt(3)`.
fn parse_number(s: &str) -> std::result::Result<f64, String> {
    parse_value(s.trim()).and_then(|v| if v.is_finite() { Ok(v) } else { Err(format!("'{s}' is not finite")) })
}

pub fn parse_mu(s: &str) -> Result<MuChoice> {
    if s == "auto" {
        return Ok(MuChoice::Auto);
    }
    parse_number(s)
        .map(MuChoice::Value)
        .map_err(|e| CliError::Input(format!("--mu: expected a number or 'auto': {e}")))
}

pub fn parse_params(s: &str) -> Result<[f64; 3]> {
    let vals: Vec<f64> = s
        .split(',')
        .map(parse_number)
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| CliError::Input(format!("--params '{s}': {e}")))?;
    <[f64; 3]>::try_from(vals).map_err(|v| CliError::Input(format!("--params: expected 3 values, got {}", v.len())))
}

/// `mu` for a wir space: explicit, or the smaller admissible root.
pub fn resolve_mu(choice: MuChoice, alpha: f64, gamma: f64) -> Result<f64> {
    match choice {
        MuChoice::Value(v) => Ok(v),
        MuChoice::Auto => Ok(wir_admissible_mu(alpha, gamma)?.1),
    }
}

pub fn catalog_id(family: Family, params: [f64; 3], mu: Option<MuChoice>) -> Result<CatalogId> {
    let [a, b, g] = params;
    match (family, mu) {
        (Family::Vir24, None) => Ok(CatalogId::vir24(a, b, g)?),
        (Family::VTilde24, None) => Ok(CatalogId::vtilde24(a, b, g)?),
        (Family::Wir, Some(m)) => Ok(CatalogId::wir(a, b, g, resolve_mu(m, a, g)?)?),
        (Family::Wir, None) => Err(CliError::Input("wir needs --mu <value|auto>".into())),
        (f, Some(_)) => Err(CliError::Input(format!("--mu only applies to wir, not {f}"))),
    }
}

/// Run a parsed command and return the rendered output.
pub fn run(cli: &Cli) -> Result<String> {
    let tol = cli.tol;
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(CliError::Input(format!("--tol must be positive, got {tol}")));
    }
    let fmt = cli.format;
    match &cli.command {
        Command::Analyze(args) => {
            let report = match (&args.source.space, &args.source.file) {
                (Some(name), _) => {
                    let family: Family = name.parse()?;
                    let params = args
                        .params
                        .as_deref()
                        .ok_or_else(|| CliError::Input("--space needs --params a,b,c".into()))?;
                    let mu = args.mu.as_deref().map(parse_mu).transpose()?;
                    report::analyze_catalog(&catalog_id(family, parse_params(params)?, mu)?, tol)?
                }
                (None, Some(path)) => {
                    if args.params.is_some() || args.mu.is_some() {
                        return Err(CliError::Input("--params and --mu do not apply to --file".into()));
                    }
                    let def = so3ir_core::spacefile::load(path)?;
                    report::analyze_definition(&def, &path.display().to_string(), tol)?
                }
                (None, None) => return Err(CliError::Input("give --space or --file".into())),
            };
            render::value(&report::to_value(&report), fmt.unwrap_or(Format::Json))
        }
        Command::Sweep(args) => {
            let table = sweep::run(args, tol)?;
            Ok(render::table(&table, fmt.unwrap_or(Format::Csv)))
        }
        Command::Einstein(args) => {
            let family: Family = args.space.parse()?;
            let out = einstein_solve(family, args.alpha, args.mu, tol)?;
            let v = serde_json::json!({
                "space": family.name(),
                "alpha": args.alpha,
                "mu": args.mu,
                "tol": tol,
                "outcome": out,
            });
            render::value(&v, fmt.unwrap_or(Format::Json))
        }
        Command::Topology(t) => render::value(&topology::run(t)?, fmt.unwrap_or(Format::Json)),
        Command::Catalog(CatalogCommand::List) => {
            let list: Vec<_> = Family::ALL
                .iter()
                .map(|f| serde_json::json!({"name": f.name(), "description": f.description()}))
                .collect();
            render::value(&serde_json::Value::Array(list), fmt.unwrap_or(Format::Json))
        }
        Command::Catalog(CatalogCommand::Export { space, params, mu }) => {
            if fmt.is_some_and(|f| f != Format::Json) {
                return Err(CliError::Input("catalog export only writes json".into()));
            }
            let mu = mu.as_deref().map(parse_mu).transpose()?;
            let id = catalog_id(space.parse()?, parse_params(params)?, mu)?;
            Ok(SpaceDefinition::from_space(&make_space(&id)?).to_json())
        }
    }
}
