//! `coherekit` command-line front end.
//!
//! Exit codes: 0 success, 2 usage or parse error, 3 invalid state,
//! 4 verification failures, 1 anything else (e.g. a solver that did not
//! converge).

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use coherekit::figures::{self, FigureGrid, DEFAULT_STEPS};
use coherekit::gaussian::{c_gr, gr_real_gap};
use coherekit::harness;
use coherekit::io::{parse_density, parse_gaussian_state};
use coherekit::measures::{self, MeasureId, SolverConfig};
use coherekit::{Error, Execution};
use serde_json::{json, Value};

const THREADS_VAR: &str = "COHEREKIT_THREADS";

#[derive(Parser)]
#[command(name = "coherekit", version, about = "Coherence and imaginarity measures, figure data and verification suites")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a coherence measure on a density-matrix JSON file.
    Measure {
        /// State file, or `-` for stdin.
        state: PathBuf,
        /// l1, relent, tsallis:<alpha>, robustness, geometric, tracenorm,
        /// weight, roofpure:shannon or roofpure:one_minus_max.
        measure: String,
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Measure on the state and on its real part, and the difference.
    Gap {
        state: PathBuf,
        measure: String,
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// l1 gap of the qubit states (x, y, 0) over the unit disk.
    Fig1 {
        #[arg(long, default_value_t = DEFAULT_STEPS)]
        steps: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Gaussian gap of coherent states over a square of amplitudes.
    Fig2 {
        #[arg(long, default_value_t = DEFAULT_STEPS)]
        steps: usize,
        #[arg(long, default_value_t = -2.0, allow_negative_numbers = true)]
        min: f64,
        #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
        max: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Gaussian gap of squeezed vacua over a square of squeezing parameters.
    Fig3 {
        #[arg(long, default_value_t = DEFAULT_STEPS)]
        steps: usize,
        #[arg(long, default_value_t = -1.5, allow_negative_numbers = true)]
        min: f64,
        #[arg(long, default_value_t = 1.5, allow_negative_numbers = true)]
        max: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Gaussian coherence and real-part gap of a Gaussian state JSON file.
    GaussianMeasure {
        state: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run the randomized verification suites.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Override every check's trial count.
        #[arg(long)]
        trials: Option<usize>,
        /// Only run checks whose id contains this string.
        #[arg(long)]
        filter: Option<String>,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Args)]
struct SolverArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, default_value_t = 500)]
    max_iters: usize,
    #[arg(long, default_value_t = 8)]
    restarts: usize,
}

impl SolverArgs {
    fn config(&self) -> SolverConfig {
        SolverConfig {
            max_iters: self.max_iters,
            tol: self.tol,
            restarts: self.restarts,
            seed: self.seed,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct OutputArgs {
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

/// An error paired with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Parse(_) | Error::InvalidArgument(_) | Error::InvalidAlpha(_) => 2,
            Error::NotConverged { .. } => 1,
            _ => 3,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

fn read_input(path: &Path) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| usage(format!("cannot read stdin: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

fn emit(output: &OutputArgs, text: &str) -> Result<(), Failure> {
    match &output.out {
        Some(path) => fs::write(path, text).map_err(|e| Failure {
            code: 1,
            message: format!("cannot write {}: {e}", path.display()),
        }),
        None => {
            let mut stdout = io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Failure {
                    code: 1,
                    message: format!("cannot write stdout: {e}"),
                })
        }
    }
}

fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

/// One header line and one data line.
fn csv_record(fields: &[(&str, String)]) -> String {
    let header: Vec<&str> = fields.iter().map(|f| f.0).collect();
    let row: Vec<&str> = fields.iter().map(|f| f.1.as_str()).collect();
    format!("{}\n{}\n", header.join(","), row.join(","))
}

fn num(v: f64) -> String {
    figures::format_number(v)
}

fn figure_json(grid: &FigureGrid) -> Value {
    let rows: Vec<Value> = grid
        .values
        .iter()
        .enumerate()
        .map(|(k, cells)| {
            let (a, b) = grid.coords(k);
            let mut row = vec![json!(a), json!(b)];
            row.extend(cells.iter().map(|c| json!(c)));
            Value::Array(row)
        })
        .collect();
    json!({ "columns": grid.header, "rows": rows })
}

fn emit_figure(grid: FigureGrid, output: &OutputArgs) -> Result<(), Failure> {
    match output.format.unwrap_or(Format::Csv) {
        Format::Csv => emit(output, &grid.to_csv()),
        Format::Json => emit(output, &json_text(&figure_json(&grid))),
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| usage(format!("{THREADS_VAR} must be a positive integer, got `{raw}`")))?;
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| usage(format!("cannot size the thread pool: {e}")))?;
    #[cfg(not(feature = "parallel"))]
    let _ = threads;
    Ok(())
}

fn run(cli: Cli) -> Result<u8, Failure> {
    configure_threads()?;
    match cli.command {
        Command::Measure {
            state,
            measure,
            solver,
            output,
        } => {
            let id: MeasureId = measure.parse()?;
            let cfg = solver.config();
            cfg.validate()?;
            let rho = parse_density(&read_input(&state)?)?;
            let e = measures::evaluate(id, &rho, &cfg)?;
            let text = match output.format.unwrap_or(Format::Json) {
                Format::Json => json_text(&json!(e)),
                Format::Csv => csv_record(&[
                    ("measure", e.measure.clone()),
                    ("value", num(e.value)),
                    ("iterations", e.iterations.to_string()),
                    ("flagged_upper_bound", e.flagged_upper_bound.to_string()),
                ]),
            };
            emit(&output, &text)?;
        }
        Command::Gap {
            state,
            measure,
            solver,
            output,
        } => {
            let id: MeasureId = measure.parse()?;
            let cfg = solver.config();
            cfg.validate()?;
            let rho = parse_density(&read_input(&state)?)?;
            let a = measures::value(id, &rho, &cfg)?;
            let b = measures::value(id, &rho.real_part(), &cfg)?;
            let text = match output.format.unwrap_or(Format::Json) {
                Format::Json => json_text(&json!({ "value_rho": a, "value_re_rho": b, "gap": a - b })),
                Format::Csv => csv_record(&[
                    ("value_rho", num(a)),
                    ("value_re_rho", num(b)),
                    ("gap", num(a - b)),
                ]),
            };
            emit(&output, &text)?;
        }
        Command::Fig1 { steps, output } => {
            emit_figure(figures::fig1(steps, Execution::Parallel)?, &output)?;
        }
        Command::Fig2 { steps, min, max, output } => {
            emit_figure(figures::fig2(steps, (min, max), Execution::Parallel)?, &output)?;
        }
        Command::Fig3 { steps, min, max, output } => {
            emit_figure(figures::fig3(steps, (min, max), Execution::Parallel)?, &output)?;
        }
        Command::GaussianMeasure { state, output } => {
            let s = parse_gaussian_state(&read_input(&state)?)?;
            let c = c_gr(&s)?;
            let g = gr_real_gap(&s)?;
            let text = match output.format.unwrap_or(Format::Json) {
                Format::Json => json_text(&json!({ "c_gr": c, "gr_real_gap": g })),
                Format::Csv => csv_record(&[
                    ("c_gr", num(c)),
                    ("gap", num(g.gap)),
                    ("thermal_term", num(g.thermal_term)),
                    ("entropy_term", num(g.entropy_term)),
                ]),
            };
            emit(&output, &text)?;
        }
        Command::Verify {
            seed,
            trials,
            filter,
            output,
        } => {
            let summary = harness::run_all(seed, filter.as_deref(), trials, Execution::Parallel)?;
            let text = match output.format.unwrap_or(Format::Json) {
                Format::Json => json_text(&json!(summary)),
                Format::Csv => {
                    let mut s = String::from("check_id,trials,failures,worst_slack,tolerance,instance_digest\n");
                    for r in &summary.checks {
                        s.push_str(&format!(
                            "{},{},{},{},{},{}\n",
                            r.check_id,
                            r.trials,
                            r.failures,
                            num(r.worst_slack),
                            num(r.tolerance),
                            r.instance_digest
                        ));
                    }
                    s
                }
            };
            emit(&output, &text)?;
            if !summary.pass {
                let failed = summary.checks.iter().filter(|r| !r.passed()).count();
                eprintln!("{failed} of {} checks failed", summary.checks.len());
                return Ok(4);
            }
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
