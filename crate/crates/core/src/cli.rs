//! `luxgrid compute` driver.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::engine::{DiffuseMode, IlluminanceField};
use crate::error::{LightingError, Result};
use crate::photometry::EmissionModel;
use crate::radiosity::{
    run_oracle, OracleOptions, SolverOptions, DEFAULT_QUADRATURE, DEFAULT_SUBDIVISION,
};
use crate::report;
use crate::scenario::{load_scenario, KeyPolicy, Scenario};
use crate::scene::ReflectancePolicy;
use crate::validation::{compare, CompareTarget, ReferenceDataset};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_BELOW_THRESHOLD: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "luxgrid",
    version,
    about = "Working-plane illuminance and conformance checks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute the illuminance grid of a scenario and optionally check it
    /// against measurements.
    Compute(ComputeArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum EmissionArg {
    Isotropic,
    Lambertian,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum RhoPolicyArg {
    Walls,
    All,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum DiffuseArg {
    Local,
    RoomMean,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum CompareArg {
    Global,
    Direct,
}

#[derive(Debug, clap::Args)]
pub struct ComputeArgs {
    /// Bundled scenario name (cie_config1, cie_config3) or path to a JSON scenario.
    pub scenario: String,
    /// Field CSV destination (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write an SVG heatmap of the compared component.
    #[arg(long, value_name = "FILE")]
    pub emit_svg: Option<PathBuf>,
    /// Run the radiosity interreflection cross-check.
    #[arg(long)]
    pub oracle: bool,
    /// Oracle CSV destination (default: next to --out, or ./<scenario>.oracle.csv).
    #[arg(long, value_name = "FILE")]
    pub oracle_out: Option<PathBuf>,
    /// Patches per surface edge for the oracle.
    #[arg(long, default_value_t = DEFAULT_SUBDIVISION)]
    pub subdivision: usize,
    /// Sub-samples per patch edge when integrating form factors.
    #[arg(long, default_value_t = DEFAULT_QUADRATURE)]
    pub quadrature: usize,
    /// Reference dataset CSV (overrides the scenario's `reference`).
    #[arg(long = "ref", value_name = "FILE")]
    pub reference: Option<PathBuf>,
    /// Exit with status 2 when reliability falls below this percentage.
    #[arg(long, value_name = "PCT")]
    pub min_reliability: Option<f64>,
    /// Verdict CSV destination (default: next to --out, or ./<scenario>.verdicts.csv).
    #[arg(long, value_name = "FILE")]
    pub verdicts: Option<PathBuf>,
    /// Text report destination (default: next to --out, or ./<scenario>.report.txt).
    #[arg(long, value_name = "FILE")]
    pub report: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub emission: Option<EmissionArg>,
    #[arg(long, value_enum)]
    pub rho_policy: Option<RhoPolicyArg>,
    #[arg(long, value_enum)]
    pub diffuse: Option<DiffuseArg>,
    #[arg(long, value_enum)]
    pub compare: Option<CompareArg>,
    /// Accept unknown scenario keys with a warning instead of failing.
    #[arg(long)]
    pub allow_unknown_keys: bool,
}

/// Scenario with command-line overrides applied.
pub fn apply_overrides(scenario: &mut Scenario, args: &ComputeArgs) {
    if let Some(e) = args.emission {
        scenario.model.emission = match e {
            EmissionArg::Isotropic => EmissionModel::Isotropic,
            EmissionArg::Lambertian => EmissionModel::Lambertian,
        };
    }
    if let Some(p) = args.rho_policy {
        scenario.model.rho_policy = match p {
            RhoPolicyArg::Walls => ReflectancePolicy::Walls,
            RhoPolicyArg::All => ReflectancePolicy::All,
        };
    }
    if let Some(d) = args.diffuse {
        scenario.model.diffuse_mode = match d {
            DiffuseArg::Local => DiffuseMode::Local,
            DiffuseArg::RoomMean => DiffuseMode::RoomMean,
        };
    }
    if let Some(c) = args.compare {
        scenario.compare = match c {
            CompareArg::Global => CompareTarget::Global,
            CompareArg::Direct => CompareTarget::Direct,
        };
    }
}

/// Evaluates the scenario's field with its configured model.
pub fn compute_field(scenario: &Scenario) -> Result<IlluminanceField> {
    scenario.field()
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| LightingError::io(path, e))
}

/// Sibling of `--out` (or a file in the working directory) with `suffix`.
fn artifact_path(args: &ComputeArgs, scenario: &Scenario, suffix: &str) -> PathBuf {
    match &args.out {
        Some(out) => {
            let stem = out.file_stem().and_then(|s| s.to_str()).unwrap_or("field");
            out.with_file_name(format!("{stem}.{suffix}"))
        }
        None => PathBuf::from(format!("{}.{suffix}", scenario.name)),
    }
}

fn compute(args: &ComputeArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    let keys = if args.allow_unknown_keys {
        KeyPolicy::Warn
    } else {
        KeyPolicy::Strict
    };
    let (mut scenario, warnings) = load_scenario(&args.scenario, keys)?;
    for w in &warnings {
        let _ = writeln!(stderr, "warning: {w}");
    }
    apply_overrides(&mut scenario, args);

    let field = compute_field(&scenario)?;
    let csv = report::field_csv(&scenario, &field);
    match &args.out {
        Some(path) => write_file(path, &csv)?,
        None => stdout
            .write_all(csv.as_bytes())
            .map_err(|e| LightingError::io("<stdout>", e))?,
    }
    if let Some(note) = scenario.spacing_note(&field.grid) {
        let _ = writeln!(stderr, "note: {note}");
    }

    let compared = match scenario.compare {
        CompareTarget::Global => &field.global,
        CompareTarget::Direct => &field.direct,
    };
    let mean = compared.iter().sum::<f64>() / compared.len() as f64;
    let _ = writeln!(
        stderr,
        "{}: {} points, average {} illuminance {:.2} lx (rho_moy {:.4})",
        scenario.name,
        field.len(),
        scenario.compare,
        mean,
        field.rho_moy
    );

    if let Some(path) = &args.emit_svg {
        let title = format!(
            "{}: {} illuminance (lx), {} / {} / {}",
            scenario.name,
            scenario.compare,
            field.model.emission,
            field.model.rho_policy,
            field.model.diffuse_mode
        );
        write_file(
            path,
            &report::heatmap_svg(&title, &field, compared, &scenario.luminaires),
        )?;
    }

    if args.oracle {
        let oracle = run_oracle(
            &scenario.room,
            &scenario.luminaires,
            scenario.model.emission,
            &field.grid,
            OracleOptions {
                subdivision: args.subdivision,
                quadrature: args.quadrature,
                solver: SolverOptions::default(),
            },
        )?;
        let path = args
            .oracle_out
            .clone()
            .unwrap_or_else(|| artifact_path(args, &scenario, "oracle.csv"));
        write_file(&path, &report::oracle_csv(&scenario, &field, &oracle))?;
        let _ = write!(stderr, "{}", report::oracle_text(&field, &oracle));
    }

    let reference_path = args
        .reference
        .clone()
        .or_else(|| scenario.reference.clone());
    let Some(reference_path) = reference_path else {
        if args.min_reliability.is_some() {
            let _ = writeln!(
                stderr,
                "warning: --min-reliability ignored without a reference dataset"
            );
        }
        return Ok(EXIT_OK);
    };
    let text = std::fs::read_to_string(&reference_path)
        .map_err(|e| LightingError::io(&reference_path, e))?;
    let reference = ReferenceDataset::from_csv(&text, &reference_path.display().to_string())?;
    let comparison = compare(&field, &reference, scenario.compare)?;

    let summary = report::comparison_text(&scenario, &field, &comparison);
    let verdicts = args
        .verdicts
        .clone()
        .unwrap_or_else(|| artifact_path(args, &scenario, "verdicts.csv"));
    write_file(&verdicts, &report::verdict_csv(&comparison))?;
    let report_path = args
        .report
        .clone()
        .unwrap_or_else(|| artifact_path(args, &scenario, "report.txt"));
    write_file(&report_path, &summary)?;
    let _ = write!(stderr, "{summary}");

    if let Some(threshold) = args.min_reliability {
        if comparison.reliability_pct < threshold {
            let _ = writeln!(
                stderr,
                "reliability {:.1} % is below the required {threshold} %",
                comparison.reliability_pct
            );
            return Ok(EXIT_BELOW_THRESHOLD);
        }
    }
    Ok(EXIT_OK)
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let _ = write!(stderr, "{e}");
            return code;
        }
    };
    let result = match &cli.command {
        Command::Compute(args) => compute(args, stdout, stderr),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_ERROR
        }
    }
}
