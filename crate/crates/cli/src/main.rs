//! Command-line front end: ingest grids, divide, snap, audit, report, render.

mod emit;
mod ingest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use redistrict::fairness::{self, FairnessInput};
use redistrict::report::{county_split_count, population_summary, render_map};
use redistrict::snap::divide_snapped_traced;
use redistrict::split::divide_simple;

use crate::emit::{audit_json, balance_json, divides_json, integrity_json, write_json, write_raw};
use crate::ingest::{load_county, load_density, load_district_map, read_audit_request};

#[derive(Parser)]
#[command(
    name = "redistrict",
    version,
    about = "Equal-population districting on raster grids"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Divide the state with straight split lines only.
    Split(SplitArgs),
    /// Divide the state, bending each cut onto county boundaries.
    Snap(SnapArgs),
    /// Audit district support ratios for packing/cracking bias.
    Audit(AuditArgs),
    /// Render a district CSV as a portable-pixmap image.
    Render(RenderArgs),
    /// Recompute balance and integrity summaries for an existing division.
    Report(ReportArgs),
}

#[derive(Args)]
struct GridInputs {
    /// Density grid: CSV, or a netpbm image (P3/P6 needs --palette,
    /// P2/P5 uses --gray-scale).
    #[arg(long)]
    density: PathBuf,
    /// County grid CSV; county id 0 marks cells outside the state.
    #[arg(long)]
    county: PathBuf,
    /// Palette file for colored density maps: one "R G B density" per line.
    #[arg(long)]
    palette: Option<PathBuf>,
    /// People per cell at full graymap brightness.
    #[arg(long, default_value_t = 1.0)]
    gray_scale: f64,
}

#[derive(Args)]
struct SplitArgs {
    #[command(flatten)]
    inputs: GridInputs,
    /// Number of districts.
    #[arg(short = 'm', long = "districts")]
    districts: u32,
    #[arg(long, default_value = ".")]
    output_dir: PathBuf,
}

#[derive(Args)]
struct SnapArgs {
    #[command(flatten)]
    inputs: GridInputs,
    /// Number of districts.
    #[arg(short = 'm', long = "districts")]
    districts: u32,
    /// Allowed population shift per cut, as a fraction of the ideal
    /// district population.
    #[arg(long, default_value_t = 0.05)]
    tolerance: f64,
    #[arg(long, default_value = ".")]
    output_dir: PathBuf,
}

#[derive(Args)]
struct AuditArgs {
    /// JSON request file; stdin when omitted.
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Args)]
struct RenderArgs {
    /// District CSV, -1 for OUTSIDE.
    #[arg(long)]
    districts: PathBuf,
    /// Output image path (binary portable-pixmap).
    #[arg(long)]
    output: PathBuf,
}

#[derive(Args)]
struct ReportArgs {
    /// District CSV, -1 for OUTSIDE.
    #[arg(long)]
    districts: PathBuf,
    #[command(flatten)]
    inputs: GridInputs,
    #[arg(long, default_value = ".")]
    output_dir: PathBuf,
}

/// Failure carrying the exit status and machine-readable code the process
/// reports: 1 for validation errors, 2 for I/O errors.
pub struct CliError {
    pub exit: u8,
    pub code: String,
    pub detail: String,
}

impl CliError {
    pub fn validation(code: impl Into<String>, detail: impl Into<String>) -> Self {
        Self {
            exit: 1,
            code: code.into(),
            detail: detail.into(),
        }
    }

    pub fn io(path: &std::path::Path, err: std::io::Error) -> Self {
        Self {
            exit: 2,
            code: "IO".into(),
            detail: format!("{}: {err}", path.display()),
        }
    }
}

macro_rules! from_module_error {
    ($ty:ty) => {
        impl From<$ty> for CliError {
            fn from(err: $ty) -> Self {
                CliError::validation(err.code(), err.to_string())
            }
        }
    };
}

from_module_error!(redistrict::grid::GridError);
from_module_error!(redistrict::split::SplitError);
from_module_error!(redistrict::snap::SnapError);
from_module_error!(redistrict::fairness::FairnessError);
from_module_error!(redistrict::report::ReportError);

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("ERROR {} {}", err.code, err.detail);
            ExitCode::from(err.exit)
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Split(args) => run_split(args),
        Command::Snap(args) => run_snap(args),
        Command::Audit(args) => run_audit(args),
        Command::Render(args) => run_render(args),
        Command::Report(args) => run_report(args),
    }
}

fn run_split(args: SplitArgs) -> Result<(), CliError> {
    let density = load_density(&args.inputs)?;
    let counties = load_county(&args.inputs.county)?;
    let mask = counties.state_mask();
    let map = divide_simple(&mask, &density, args.districts)?;
    let balance = population_summary(&map, &density)?;

    write_raw(&args.output_dir, "districts.csv", map.to_csv().as_bytes())?;
    write_json(&args.output_dir, "balance.json", &balance_json(&balance))?;
    Ok(())
}

fn run_snap(args: SnapArgs) -> Result<(), CliError> {
    let density = load_density(&args.inputs)?;
    let counties = load_county(&args.inputs.county)?;
    let mask = counties.state_mask();
    let (map, traces) =
        divide_snapped_traced(&mask, &density, &counties, args.districts, args.tolerance)?;
    let balance = population_summary(&map, &density)?;
    let integrity = county_split_count(&map, &counties)?;

    write_raw(&args.output_dir, "districts.csv", map.to_csv().as_bytes())?;
    write_json(&args.output_dir, "balance.json", &balance_json(&balance))?;
    write_json(
        &args.output_dir,
        "integrity.json",
        &integrity_json(&integrity),
    )?;
    write_json(&args.output_dir, "divides.json", &divides_json(&traces))?;
    Ok(())
}

fn run_audit(args: AuditArgs) -> Result<(), CliError> {
    let request = read_audit_request(args.input.as_deref())?;
    let state_ratio = match request.state_ratio {
        Some(p) => p,
        None => fairness::mean_ratio(&request.ratios)?,
    };
    let input = FairnessInput {
        districts: request.m,
        voters: request.n,
        ratios: request.ratios,
        state_ratio,
        alpha_allow: request.alpha_allow.unwrap_or(fairness::DEFAULT_ALPHA_ALLOW),
    };
    let report = fairness::audit(&input)?;
    let value = audit_json(&input, &report);
    println!(
        "{}",
        serde_json::to_string_pretty(&value).expect("audit report serializes")
    );
    Ok(())
}

fn run_render(args: RenderArgs) -> Result<(), CliError> {
    let map = load_district_map(&args.districts)?;
    let image = render_map(&map);
    std::fs::write(&args.output, image).map_err(|e| CliError::io(&args.output, e))?;
    Ok(())
}

fn run_report(args: ReportArgs) -> Result<(), CliError> {
    let map = load_district_map(&args.districts)?;
    let density = load_density(&args.inputs)?;
    let counties = load_county(&args.inputs.county)?;
    let balance = population_summary(&map, &density)?;
    let integrity = county_split_count(&map, &counties)?;

    write_json(&args.output_dir, "balance.json", &balance_json(&balance))?;
    write_json(
        &args.output_dir,
        "integrity.json",
        &integrity_json(&integrity),
    )?;
    Ok(())
}
