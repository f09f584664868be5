use clap::{Parser, Subcommand};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use warpcurv::ambient::{check_conditions_on, model_library, WarpedModel};
use warpcurv::config;
use warpcurv::registry::REGISTRY;
use warpcurv::runner::{self, format_number, RunReport};

const EXIT_FAIL: u8 = 1;
const EXIT_CONFIG: u8 = 2;

#[derive(Parser)]
#[command(name = "warpcurv", version, about = "Curvature inequality and integral identity verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every suite of a config; writes report.json and one CSV per suite.
    Run {
        config: PathBuf,
        /// Output directory (overrides `output` in the config).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, env = "WARPCURV_WORKERS")]
        workers: Option<usize>,
    },
    /// Print every registered check.
    ListChecks,
    /// Print λ, V and the condition margins of a model on a radial grid, as CSV.
    ModelInspect {
        name: String,
        /// Take the model from this config instead of the built-in library.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Ambient dimension for built-in models.
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 50)]
        points: usize,
    },
}

fn print_failures(report: &RunReport) {
    let failures = report.failures();
    println!("{} failing check(s):", failures.len());
    println!("{:<24} {:<40} {:>24} {:>12}  detail", "suite", "check", "residual", "tolerance");
    for (suite, r) in failures {
        let detail = r.metadata.get("error").and_then(|e| e.as_str()).unwrap_or("");
        println!("{suite:<24} {:<40} {:>24} {:>12.3e}  {detail}", r.name, format_number(r.residual), r.tolerance);
    }
}

fn run(path: PathBuf, out: Option<PathBuf>, workers: Option<usize>) -> ExitCode {
    let resolved = match config::load(&path) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{}: {e}", path.display());
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    if workers == Some(0) {
        eprintln!("worker count must be positive");
        return ExitCode::from(EXIT_CONFIG);
    }
    let report = match runner::run(&resolved, workers) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    let dir = out.unwrap_or_else(|| PathBuf::from(&resolved.config.output));
    if let Err(e) = runner::write_outputs(&report, &dir) {
        eprintln!("cannot write {}: {e}", dir.display());
        return ExitCode::from(EXIT_FAIL);
    }
    for s in &report.suites {
        println!("{:<5} {:<12} {:<32} {} checks", if s.pass { "pass" } else { "FAIL" }, s.kind, s.name, s.checks.len());
    }
    println!("report: {}", dir.join(runner::REPORT_FILE).display());
    if report.pass {
        ExitCode::SUCCESS
    } else {
        print_failures(&report);
        ExitCode::from(EXIT_FAIL)
    }
}

fn list_checks() -> ExitCode {
    let mut out = std::io::stdout().lock();
    let mut lines = vec![format!("{:<42} {:<12} anchor", "check", "suite")];
    lines.extend(REGISTRY.iter().map(|c| format!("{:<42} {:<12} {}", c.name, c.suite, c.anchor)));
    // A closed pipe (e.g. `| head`) is not an error.
    for l in lines {
        if writeln!(out, "{l}").is_err() {
            break;
        }
    }
    ExitCode::SUCCESS
}

fn find_model(name: &str, config: Option<PathBuf>, n: usize) -> Result<WarpedModel, String> {
    match config {
        Some(path) => {
            let resolved = config::load(&path).map_err(|e| format!("{}: {e}", path.display()))?;
            resolved.models.get(name).cloned().ok_or_else(|| format!("no model `{name}` in {}", path.display()))
        }
        None => {
            let library = model_library(n).map_err(|e| e.to_string())?;
            let names: Vec<String> = library.iter().map(|m| m.name().to_string()).collect();
            library
                .into_iter()
                .find(|m| m.name() == name)
                .ok_or_else(|| format!("unknown model `{name}`; built-in models: {}", names.join(", ")))
        }
    }
}

fn model_inspect(name: String, config: Option<PathBuf>, n: usize, points: usize) -> ExitCode {
    let model = match find_model(&name, config, n) {
        Ok(m) => m,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    let report = check_conditions_on(&model, points.max(2));
    let mut w = csv::Writer::from_writer(std::io::stdout());
    // λ′ and λ″ are the (C1) and (C3) margins; the bracket is the (C2) margin.
    let header = ["r", "lambda", "lambda_prime", "lambda_second", "V", "c2_bracket", "monotone_quantity"];
    let mut rows = vec![header.iter().map(|s| s.to_string()).collect::<Vec<_>>()];
    let grid = report.grid_points;
    for i in 0..grid {
        let r = report.r_lo + (report.r_hi - report.r_lo) * i as f64 / (grid - 1) as f64;
        let row = (|| -> warpcurv::Result<Vec<f64>> {
            let wp = model.warping(r)?;
            Ok(vec![
                r,
                wp.lambda,
                wp.d1,
                wp.d2,
                model.potential(r)?,
                model.radial_bracket(r)?,
                model.scalar_monotone_quantity(r)?,
            ])
        })();
        match row {
            Ok(v) => rows.push(v.into_iter().map(format_number).collect()),
            Err(e) => {
                eprintln!("r = {r}: {e}");
                return ExitCode::from(EXIT_FAIL);
            }
        }
    }
    for row in rows {
        if w.write_record(&row).is_err() {
            return ExitCode::from(EXIT_FAIL);
        }
    }
    let _ = w.flush();
    for (label, c) in [("C1", &report.c1), ("C2", &report.c2), ("C3", &report.c3), ("C4", &report.c4)] {
        eprintln!("{label} {} margin {}", if c.holds { "holds" } else { "fails" }, format_number(c.margin));
    }
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { config, out, workers } => run(config, out, workers),
        Command::ListChecks => list_checks(),
        Command::ModelInspect { name, config, n, points } => model_inspect(name, config, n, points),
    }
}
