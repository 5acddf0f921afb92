use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use obstruct::catalog;
use obstruct::report::{
    parse_points, render_report, run_checks, Check, CheckConfig, CheckSection, ConfigFile, Format, Subject,
};
use obstruct::{Error, Result};

/// Evaluate obstructions to smooth noncommutative deformations of a
/// Riemannian manifold with a Poisson structure.
#[derive(Parser)]
#[command(name = "obstruct", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the checks of a JSON config file.
    Check {
        config: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Run a built-in catalog entry.
    Example {
        name: String,
        #[command(flatten)]
        run: RunArgs,
    },
    /// List the built-in catalog entries.
    ListExamples,
    /// Print the config file of a catalog entry.
    ExportExample {
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Samples per axis, one value for all axes or one per axis.
    #[arg(long, value_delimiter = ',')]
    grid: Option<Vec<usize>>,
    /// Tolerance override, e.g. `curvature=1e-5`. Repeatable.
    #[arg(long = "tol", value_name = "CHECK=VALUE")]
    tol: Vec<String>,
    /// Checks to run, comma separated. Defaults to all applicable.
    #[arg(long, value_delimiter = ',')]
    checks: Option<Vec<Check>>,
    #[arg(long, default_value = "text", value_parser = parse_format)]
    format: Format,
    /// Check whose per-point magnitudes go into csv-points output.
    #[arg(long)]
    csv_check: Option<Check>,
    /// Explicit sample points, one per line.
    #[arg(long)]
    points: Option<PathBuf>,
    /// Include per-point tables in JSON output.
    #[arg(long)]
    per_point: bool,
    /// Include wall time in the report.
    #[arg(long)]
    timing: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_format(s: &str) -> std::result::Result<Format, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn read(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

fn emit(bytes: &[u8], out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, bytes).map_err(|e| Error::Config(format!("{}: {e}", p.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes).and_then(|_| stdout.flush()).map_err(|e| Error::Config(e.to_string()))
        }
    }
}

fn workers() -> Result<usize> {
    match std::env::var("OBSTRUCT_WORKERS") {
        Ok(v) => v.trim().parse().map_err(|_| Error::Config(format!("OBSTRUCT_WORKERS: not a count: `{v}`"))),
        Err(_) => Ok(0),
    }
}

fn run(subject: &Subject, section: &CheckSection, args: &RunArgs) -> Result<i32> {
    let mut config = CheckConfig::defaults_for(subject).with_section(section)?;
    if let Some(g) = &args.grid {
        config.grid = g.clone();
    }
    if let Some(c) = &args.checks {
        config.checks = c.clone();
    }
    for t in &args.tol {
        let (name, value) =
            t.split_once('=').ok_or_else(|| Error::Config(format!("--tol expects CHECK=VALUE, got `{t}`")))?;
        let value: f64 = value.trim().parse().map_err(|_| Error::Config(format!("--tol: bad value `{value}`")))?;
        config.set_tolerance(name.trim().parse()?, value)?;
    }
    if let Some(p) = &args.points {
        config.points = Some(parse_points(&read(p)?)?);
    }
    config.per_point = args.per_point;
    config.workers = workers()?;
    let start = Instant::now();
    let mut report = run_checks(subject, &config)?;
    if args.timing {
        report.wall_time_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    emit(&render_report(&report, args.format, args.csv_check)?, args.out.as_ref())?;
    Ok(report.exit_code())
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Check { config, run: args } => {
            let file = ConfigFile::parse(&read(&config)?)?;
            let subject = file.document.to_subject()?;
            run(&subject, &file.checks, &args)
        }
        Command::Example { name, run: args } => {
            let entry = catalog::load_example(&name)?;
            run(&entry.subject, &CheckSection::default(), &args)
        }
        Command::ListExamples => {
            let mut s = String::new();
            for name in catalog::list() {
                let e = catalog::load_example(name)?;
                s.push_str(&format!("{:<20} {:<12} {}\n", e.name, e.subject.kind(), e.summary));
            }
            emit(s.as_bytes(), None)?;
            Ok(0)
        }
        Command::ExportExample { name, out } => {
            let e = catalog::load_example(&name)?;
            let file = ConfigFile { document: e.document(), checks: CheckSection::default() };
            emit(file.to_json().as_bytes(), out.as_ref())?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("obstruct: {e}");
            ExitCode::from(2)
        }
    }
}
