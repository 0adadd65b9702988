//! `idcyl`: config-driven runner for infinitely divisible cylindrical measures.
//!
//! Every command writes one report file under `--out` (CSV for tables, JSON for
//! verdicts) and prints a one-line JSON verdict to stdout. Exit codes: 0 pass,
//! 1 property failure, 2 config error; errors are JSON records on stderr.

mod commands;
mod config;
mod error;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use commands::{Context, Outcome, Report};
use config::RunConfig;
use error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(
    name = "idcyl",
    version,
    about = "Infinitely divisible cylindrical measures: characteristics, checks and reports"
)]
struct Cli {
    /// JSON run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory for report files.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    /// Seed for every random choice; overrides the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Main tolerance of the command; overrides the config.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tabulate the characteristic function at functionals and on projections.
    Cf,
    /// The four infinite-divisibility conditions.
    Check,
    /// Positive/negative-definiteness and Schoenberg checks on point sets.
    Definiteness,
    /// One-dimensional projected triplets with a cross-check residual.
    Project,
    /// Sample a projection; empirical against analytic characteristic function.
    Sample,
    /// The canonical drift of a measure on U with its three-region bounds.
    Dnu,
    /// Continuity distances along a sequence of functionals.
    Continuity,
    /// Built-in example constructions.
    Gallery {
        #[command(subcommand)]
        action: GalleryAction,
    },
}

#[derive(Debug, Subcommand)]
enum GalleryAction {
    /// List entries and their expected properties.
    List,
    /// Build one entry and emit its characteristics.
    Build {
        name: String,
        #[arg(long, default_value_t = idcyl_core::gallery::DEFAULT_DIM)]
        dim: usize,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Cf => "cf",
            Command::Check => "check",
            Command::Definiteness => "definiteness",
            Command::Project => "project",
            Command::Sample => "sample",
            Command::Dnu => "dnu",
            Command::Continuity => "continuity",
            Command::Gallery {
                action: GalleryAction::List,
            } => "gallery_list",
            Command::Gallery {
                action: GalleryAction::Build { .. },
            } => "gallery_build",
        }
    }
}

fn context(cli: &Cli) -> CliResult<Context> {
    let config = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => {
            return Err(CliError::Config(
                "--config <path> is required for this command".into(),
            ))
        }
    };
    let tol = cli.tol.or(config.tol);
    if let Some(t) = tol {
        if !(t.is_finite() && t > 0.0) {
            return Err(CliError::Config(format!(
                "tolerance {t} must be finite and positive"
            )));
        }
    }
    Ok(Context {
        seed: cli.seed.or(config.seed).unwrap_or(0),
        tol,
        config,
    })
}

fn write_report(path: &Path, report: &Report) -> CliResult<()> {
    let fail = |message: String| CliError::Write {
        path: path.display().to_string(),
        message,
    };
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(|e| fail(e.to_string()))?;
    }
    match report {
        Report::Table(table) => {
            let mut w = csv::Writer::from_path(path).map_err(|e| fail(e.to_string()))?;
            w.write_record(&table.header)?;
            for row in &table.rows {
                w.write_record(row)?;
            }
            w.flush().map_err(|e| fail(e.to_string()))?;
        }
        Report::Json(value) => {
            let mut text = serde_json::to_string_pretty(value)?;
            text.push('\n');
            std::fs::write(path, text).map_err(|e| fail(e.to_string()))?;
        }
    }
    Ok(())
}

fn run(cli: &Cli) -> CliResult<(Outcome, PathBuf)> {
    let (outcome, configured) = match &cli.command {
        Command::Gallery { action } => {
            let outcome = match action {
                GalleryAction::List => commands::gallery_list()?,
                GalleryAction::Build { name, dim } => commands::gallery_build(name, *dim)?,
            };
            (outcome, None)
        }
        command => {
            let ctx = context(cli)?;
            let outcome = match command {
                Command::Cf => commands::cf(&ctx)?,
                Command::Check => commands::check(&ctx)?,
                Command::Definiteness => commands::definiteness(&ctx)?,
                Command::Project => commands::project(&ctx)?,
                Command::Sample => commands::sample(&ctx)?,
                Command::Dnu => commands::dnu(&ctx)?,
                Command::Continuity => commands::continuity(&ctx)?,
                Command::Gallery { .. } => unreachable!(),
            };
            (outcome, ctx.config.output.clone())
        }
    };
    let stem = match &cli.command {
        Command::Gallery {
            action: GalleryAction::Build { name, .. },
        } => format!("gallery_{name}"),
        command => command.name().to_string(),
    };
    let file = configured.unwrap_or_else(|| format!("{stem}.{}", outcome.report.extension()));
    let path = cli.out.join(file);
    write_report(&path, &outcome.report)?;
    Ok((outcome, path))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let record = json!({ "error": { "kind": "usage", "message": e.to_string().trim(), "exit_code": 2 } });
            eprintln!("{record}");
            return ExitCode::from(2);
        }
    };
    match run(&cli) {
        Ok((outcome, path)) => {
            let mut verdict = json!({
                "command": cli.command.name(),
                "passed": outcome.passed,
                "output": path.display().to_string(),
            });
            if let (Some(v), Some(extra)) = (verdict.as_object_mut(), outcome.summary.as_object()) {
                v.extend(extra.clone());
            }
            println!("{verdict}");
            if outcome.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("{}", json!({ "error": e.record() }));
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
