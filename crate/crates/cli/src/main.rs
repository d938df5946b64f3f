//! Command line front end: validate, classify, transform, and
//! tabulate scenario files.
//!
//! Exit codes form a stable contract: 0 for success, 1 for domain
//! failures (axiom violations, verdict-table breaches, indices beyond
//! the horizon), 2 for input problems (unreadable or malformed files,
//! bad flag values, empty corpus directories).

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use riesz_uncertain::orlicz::validate_orlicz_default;
use riesz_uncertain::scalar::fixed12;
use riesz_uncertain::scenarios::file::ScenarioFile;
use riesz_uncertain::scenarios::{inclusion_table, Scenario};
use riesz_uncertain::summability::{
    check_regularity, inverse_transform_at, transform_sequence,
};
use riesz_uncertain::uncertainty::MAX_ATOMS;

const ATOM_CAP_ENV: &str = "RIESZ_UNCERTAIN_MAX_ATOMS";

#[derive(Parser)]
#[command(
    name = "riesz-uncertain",
    version,
    about = "Riesz summability diagnostics for uncertain sequences"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Seed for randomized helpers.  The shipped commands are fully
    /// deterministic; the flag is reserved so batch drivers can pass
    /// one uniformly.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Md,
}

#[derive(clap::Args, Clone, Default)]
struct ConfigFlags {
    /// Override the classification horizon (at least 10).
    #[arg(long)]
    horizon: Option<usize>,
    /// Override the epsilon grid, comma separated.
    #[arg(long, value_delimiter = ',')]
    eps: Option<Vec<f64>>,
    /// Override the lambda grid, comma separated.
    #[arg(long, value_delimiter = ',')]
    lambda: Option<Vec<f64>>,
    /// Override the pass tolerance.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Check measure axioms, Orlicz admissibility, and weights.
    Validate { path: PathBuf },
    /// Classify one scenario and emit its verdict table.
    Classify {
        path: PathBuf,
        #[command(flatten)]
        config: ConfigFlags,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify every scenario in a directory and render the
    /// inclusion table; fails if any verdict arrow or golden datum
    /// breaks.
    Table {
        dir: PathBuf,
        #[command(flatten)]
        config: ConfigFlags,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print Riesz transform values per atom with roundtrip residuals.
    Transform {
        path: PathBuf,
        /// Indices to evaluate, comma separated.
        #[arg(long = "n", value_delimiter = ',', required = true)]
        indices: Vec<usize>,
    },
}

struct Failure {
    code: u8,
    message: String,
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

fn domain_error(message: impl Into<String>) -> Failure {
    Failure {
        code: 1,
        message: message.into(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            let _ = writeln!(io::stderr(), "error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

/// Writes to stdout.  A consumer that stops reading (`head`, a closed
/// pipe) ends the process quietly with the usual SIGPIPE status
/// instead of a panic; any other write failure is reported as an
/// input-side error.
fn write_stdout(text: &str) {
    let mut out = io::stdout().lock();
    let result = out.write_all(text.as_bytes()).and_then(|()| out.flush());
    if let Err(e) = result {
        drop(out);
        if e.kind() == io::ErrorKind::BrokenPipe {
            std::process::exit(141);
        }
        let _ = writeln!(io::stderr(), "error: cannot write stdout: {e}");
        std::process::exit(2);
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Validate { path } => cmd_validate(&path),
        Command::Classify {
            path,
            config,
            format,
            out,
        } => cmd_classify(&path, &config, format, out.as_deref()),
        Command::Table {
            dir,
            config,
            format,
            out,
        } => cmd_table(&dir, &config, format, out.as_deref()),
        Command::Transform { path, indices } => cmd_transform(&path, &indices),
    }
}

fn atom_cap() -> Result<usize, Failure> {
    match std::env::var(ATOM_CAP_ENV) {
        Ok(raw) => raw
            .trim()
            .parse::<usize>()
            .map_err(|_| input_error(format!("{ATOM_CAP_ENV} is not a number: {raw:?}"))),
        Err(_) => Ok(MAX_ATOMS),
    }
}

fn load_file(path: &Path) -> Result<ScenarioFile, Failure> {
    let raw = fs::read_to_string(path)
        .map_err(|e| input_error(format!("cannot read {}: {e}", path.display())))?;
    let file: ScenarioFile = serde_json::from_str(&raw)
        .map_err(|e| input_error(format!("cannot parse {}: {e}", path.display())))?;
    let cap = atom_cap()?;
    if file.space.atoms.len() > cap {
        return Err(input_error(format!(
            "{}: space has {} atoms, cap is {cap}",
            path.display(),
            file.space.atoms.len()
        )));
    }
    Ok(file)
}

fn check_flags(flags: &ConfigFlags) -> Result<(), Failure> {
    if let Some(h) = flags.horizon {
        if h < 10 {
            return Err(input_error(format!("--horizon must be at least 10, got {h}")));
        }
    }
    for (name, grid) in [("--eps", &flags.eps), ("--lambda", &flags.lambda)] {
        if let Some(values) = grid {
            if values.is_empty() {
                return Err(input_error(format!("{name} needs at least one value")));
            }
            if values.iter().any(|v| !v.is_finite() || *v <= 0.0) {
                return Err(input_error(format!("{name} values must be positive")));
            }
        }
    }
    if let Some(t) = flags.tol {
        if !t.is_finite() || t <= 0.0 {
            return Err(input_error(format!("--tol must be positive, got {t}")));
        }
    }
    Ok(())
}

fn load_scenario(path: &Path, flags: &ConfigFlags) -> Result<Scenario<f64>, Failure> {
    check_flags(flags)?;
    let file = load_file(path)?;
    let mut scenario = file
        .build()
        .map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    if let Some(h) = flags.horizon {
        scenario.config.horizon = h;
    }
    if let Some(eps) = &flags.eps {
        scenario.config.epsilon_grid = eps.clone();
    }
    if let Some(lambda) = &flags.lambda {
        scenario.config.lambda_grid = lambda.clone();
    }
    if let Some(tol) = flags.tol {
        scenario.config.tolerance = tol;
    }
    Ok(scenario)
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| input_error(format!("cannot write {}: {e}", path.display()))),
        None => {
            write_stdout(text);
            Ok(())
        }
    }
}

fn cmd_validate(path: &Path) -> Result<(), Failure> {
    let scenario = load_scenario(path, &ConfigFlags::default())?;
    let mut all_valid = true;

    let space_report = scenario.space.validate();
    write_stdout(&space_report.render());
    all_valid &= space_report.is_valid();

    match validate_orlicz_default(&scenario.orlicz) {
        Ok(report) => {
            write_stdout(&report.render());
            all_valid &= report.is_valid();
        }
        Err(e) => return Err(domain_error(format!("orlicz validation failed: {e}"))),
    }

    write_stdout(&format!(
        "weights: {} terms, strictly positive and finite (checked at load)\n",
        scenario.weights.horizon()
    ));
    match check_regularity(&scenario.weights, scenario.weights.horizon(), 1e-2) {
        Ok(verdict) => write_stdout(&format!("{}\n", verdict.render())),
        Err(e) => write_stdout(&format!("regularity probe skipped: {e}\n")),
    }

    if all_valid {
        write_stdout(&format!("scenario {}: valid\n", scenario.name));
        Ok(())
    } else {
        Err(domain_error(format!(
            "scenario {} failed validation",
            scenario.name
        )))
    }
}

fn cmd_classify(
    path: &Path,
    flags: &ConfigFlags,
    format: Format,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let scenario = load_scenario(path, flags)?;
    let space_report = scenario.space.validate();
    if !space_report.is_valid() {
        return Err(domain_error(format!(
            "scenario {} has an invalid measure:\n{}",
            scenario.name,
            space_report.render()
        )));
    }
    let report = scenario
        .classify()
        .map_err(|e| domain_error(format!("classification failed: {e}")))?;
    let text = match format {
        Format::Csv => report.to_csv(),
        Format::Md => report.render_grid(),
    };
    emit(&text, out)
}

fn cmd_table(
    dir: &Path,
    flags: &ConfigFlags,
    format: Format,
    out: Option<&Path>,
) -> Result<(), Failure> {
    check_flags(flags)?;
    let entries = fs::read_dir(dir)
        .map_err(|e| input_error(format!("cannot read {}: {e}", dir.display())))?;
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().map(|ext| ext == "json").unwrap_or(false))
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(input_error(format!(
            "no scenario files in {}",
            dir.display()
        )));
    }
    let scenarios: Vec<Scenario<f64>> = paths
        .iter()
        .map(|p| load_scenario(p, flags))
        .collect::<Result<_, _>>()?;
    let table = inclusion_table(&scenarios)
        .map_err(|e| domain_error(format!("table construction failed: {e}")))?;
    let text = match format {
        Format::Csv => table.to_csv(),
        Format::Md => table.render_markdown(),
    };
    emit(&text, out)?;
    if table.ok() {
        Ok(())
    } else {
        let mut lines = Vec::new();
        for v in &table.violations {
            lines.push(format!("{}: {} passes but {} fails", v.scenario, v.from, v.to));
        }
        lines.extend(table.golden_mismatches.iter().cloned());
        Err(domain_error(format!(
            "inclusion checks failed:\n{}",
            lines.join("\n")
        )))
    }
}

fn cmd_transform(path: &Path, indices: &[usize]) -> Result<(), Failure> {
    let scenario = load_scenario(path, &ConfigFlags::default())?;
    let horizon = scenario.sequence.horizon();
    for &n in indices {
        if n == 0 || n > horizon {
            return Err(domain_error(format!(
                "index {n} is outside 1..={horizon}"
            )));
        }
    }
    let transformed = transform_sequence(&scenario.sequence, &scenario.weights)
        .map_err(|e| domain_error(format!("transform failed: {e}")))?;
    let names = scenario.space.atom_names();
    for &n in indices {
        let nu = transformed.term(n).map_err(|e| domain_error(e.to_string()))?;
        let original = scenario
            .sequence
            .term(n)
            .map_err(|e| domain_error(e.to_string()))?;
        let inverted = inverse_transform_at(&transformed, &scenario.weights, n)
            .map_err(|e| domain_error(e.to_string()))?;
        let residual = (0..original.len())
            .map(|a| (inverted.value(a) - original.value(a)).abs())
            .fold(0.0f64, f64::max);
        for (atom, name) in names.iter().enumerate() {
            write_stdout(&format!("n={n} atom={name} nu={}\n", fixed12(nu.value(atom))));
        }
        write_stdout(&format!("n={n} roundtrip_residual={}\n", fixed12(residual)));
    }
    Ok(())
}
