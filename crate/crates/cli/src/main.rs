//! `ssc`: command-line front end.
//!
//! Exit status: 0 for a definitive answer (including UNSOLVABLE), 1 for an
//! internal error, 2 for usage errors and malformed input, 3 for UNKNOWN,
//! 4 for I/O errors.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use ssc_core::encode::{encode_instance, EncodeOptions};
use ssc_core::engine::{closure_with_trace, SolveResult};
use ssc_core::grid::{parse_grid, parse_mask, serialize_grid, ClueMask, Dims, Geometry, GridFormat, StrategySet};
use ssc_core::oracle::{brute_force_solvable, classify_collection, count_solutions};
use ssc_core::sat::{Backend, SolverConfig, SOLVER_ENV};
use ssc_core::search::{find_clues, min_clues, SearchConfig, SearchError, SearchOutcome};

const EXIT_INTERNAL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_UNKNOWN: u8 = 3;
const EXIT_IO: u8 = 4;

#[derive(Parser)]
#[command(name = "ssc", version, about = "Exact search for strategy-solvable Sudoku clues")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Block order: 2 for 4x4 boards, 3 for 9x9.
    #[arg(short = 'n', long, default_value_t = 3)]
    block: usize,
    /// Comma list of strategies: ns, hs, lc.
    #[arg(short, long, default_value = "ns,hs,lc")]
    strategies: StrategySet,
    /// Write the result here instead of stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct SolverArgs {
    /// Smallest step bound tried.
    #[arg(long, default_value_t = 30)]
    k_min: usize,
    /// Largest step bound tried.
    #[arg(long, default_value_t = 649)]
    k_max: usize,
    /// Time limit per solver call, in seconds.
    #[arg(long, default_value_t = 600.0)]
    time_limit: f64,
    /// Wall-clock budget for the whole search, in seconds.
    #[arg(long)]
    budget: Option<f64>,
    /// External DIMACS solver executable (default: built-in solver).
    #[arg(long, env = SOLVER_ENV)]
    solver: Option<PathBuf>,
    /// Skip the solve that assumes a complete grid at the last step.
    #[arg(long)]
    no_probe: bool,
    /// Keep separate per-step variables for clue cells.
    #[arg(long)]
    no_reduction: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Find digits for a clue-position mask.
    Generate {
        /// Mask file (`1`/`0` per cell, or a grid whose nonzero cells are the positions); `-` for stdin.
        mask: PathBuf,
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Run the strategies on a grid and report whether they complete it.
    Check {
        grid: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Print every deduction of the strategy run on a grid.
    Trace {
        grid: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Write the CNF encoding of a mask in DIMACS format.
    Encode {
        mask: PathBuf,
        #[command(flatten)]
        common: Common,
        /// Step bound.
        #[arg(short = 'k', long, default_value_t = 30)]
        k: usize,
        /// Bound the clue count instead of fixing the positions (mask = allowed cells).
        #[arg(long)]
        theta: Option<usize>,
        /// Sidecar file listing the variable of every placement and candidate literal.
        #[arg(long)]
        map: Option<PathBuf>,
        #[arg(long)]
        no_reduction: bool,
    },
    /// Find the smallest clue count admitting a solvable puzzle.
    Minclue {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        solver: SolverArgs,
        /// First clue-count bound (default: every cell).
        #[arg(long)]
        theta_start: Option<usize>,
        /// Restrict clues to the cells of this mask.
        #[arg(long)]
        mask: Option<PathBuf>,
    },
    /// Decide a mask by enumerating every digit assignment.
    Oracle {
        mask: PathBuf,
        #[command(flatten)]
        common: Common,
        /// Refuse masks with more assignments than this.
        #[arg(long, default_value_t = 10_000_000)]
        cap: u128,
    },
    /// Classify a file of grids, one per line.
    Classify {
        collection: PathBuf,
        #[command(flatten)]
        common: Common,
        /// Per-grid verdict file.
        #[arg(long)]
        verdicts: Option<PathBuf>,
        /// Worker threads.
        #[arg(short, long)]
        jobs: Option<usize>,
    },
    /// Run generate on every mask of a file and print one timing line each.
    Bench {
        masks: PathBuf,
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        solver: SolverArgs,
        /// Masks searched concurrently.
        #[arg(short, long, default_value_t = 1)]
        jobs: usize,
    },
}

/// Error carrying the process exit code.
struct Failure {
    code: u8,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

fn io_error(path: &Path, e: io::Error) -> Failure {
    Failure {
        code: EXIT_IO,
        message: format!("{}: {e}", path.display()),
    }
}

fn search_failure(e: SearchError) -> Failure {
    let code = match &e {
        SearchError::Config(_) | SearchError::Encode(_) => EXIT_USAGE,
        SearchError::Sat(ssc_core::sat::SatError::Launch { .. }) => EXIT_IO,
        _ => EXIT_INTERNAL,
    };
    Failure {
        code,
        message: e.to_string(),
    }
}

fn read_input(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        let mut text = String::new();
        io::stdin().read_to_string(&mut text).map_err(|e| io_error(path, e))?;
        Ok(text)
    } else {
        fs::read_to_string(path).map_err(|e| io_error(path, e))
    }
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| io_error(p, e)),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| io_error(Path::new("<stdout>"), e)),
    }
}

fn geometry(common: &Common) -> Result<Geometry, Failure> {
    Dims::new(common.block)
        .map(Geometry::new)
        .map_err(|e| usage(e.to_string()))
}

fn seconds(value: f64, flag: &str) -> Result<Duration, Failure> {
    Duration::try_from_secs_f64(value)
        .ok()
        .filter(|d| !d.is_zero())
        .ok_or_else(|| usage(format!("--{flag} must be a positive number of seconds")))
}

fn search_config(args: &SolverArgs) -> Result<SearchConfig, Failure> {
    let backend = match &args.solver {
        Some(p) if !p.as_os_str().is_empty() => Backend::External(p.clone()),
        _ => Backend::InProcess,
    };
    let time_limit = seconds(args.time_limit, "time-limit")?;
    let budget = args.budget.map(|b| seconds(b, "budget")).transpose()?;
    let solver = SolverConfig::new(backend, time_limit).map_err(|e| usage(e.to_string()))?;
    Ok(SearchConfig {
        k_min: args.k_min,
        k_max: args.k_max,
        solver,
        budget,
        completion_probe: !args.no_probe,
        clue_reduction: !args.no_reduction,
    })
}

/// Reads a single mask; blank lines and `#` comments are ignored.
fn load_mask(path: &Path, dims: Dims) -> Result<ClueMask, Failure> {
    let text = read_input(path)?;
    let body: String = text
        .lines()
        .filter(|l| !l.trim_start().starts_with('#'))
        .collect::<Vec<_>>()
        .join("");
    parse_mask(&body, dims).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_grid(path: &Path, dims: Dims) -> Result<ssc_core::grid::ClueAssignment, Failure> {
    let text = read_input(path)?;
    let body: String = text
        .lines()
        .filter(|l| !l.trim_start().starts_with('#'))
        .collect::<Vec<_>>()
        .join("");
    parse_grid(&body, dims).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn outcome_code(outcome: &SearchOutcome) -> u8 {
    match outcome {
        SearchOutcome::Unknown(_) => EXIT_UNKNOWN,
        _ => 0,
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Generate { mask, common, solver } => {
            let geom = geometry(&common)?;
            let mask = load_mask(&mask, geom.dims())?;
            let config = search_config(&solver)?;
            let start = Instant::now();
            let outcome = find_clues(&mask, common.strategies, &geom, &config).map_err(search_failure)?;
            write_output(common.output.as_deref(), &outcome.report(start.elapsed()))?;
            Ok(outcome_code(&outcome))
        }
        Command::Check { grid, common } => {
            let geom = geometry(&common)?;
            let assignment = load_grid(&grid, geom.dims())?;
            let (result, trace) = closure_with_trace(&assignment, common.strategies, &geom);
            let mut out = format!("result: {}\nsteps: {}\n", result.label().to_uppercase(), result.steps());
            match &result {
                SolveResult::Solved { solution, .. } | SolveResult::Stuck { state: solution, .. } => {
                    let grid = serialize_grid(solution.placements(), geom.dims(), GridFormat::Compact);
                    let _ = writeln!(out, "grid: {grid}");
                }
                SolveResult::Contradiction(c) => {
                    let _ = writeln!(out, "contradiction: {c}");
                    if let Some(last) = trace.states.last() {
                        let grid = serialize_grid(last.placements(), geom.dims(), GridFormat::Compact);
                        let _ = writeln!(out, "grid: {grid}");
                    }
                }
            }
            write_output(common.output.as_deref(), &out)?;
            Ok(0)
        }
        Command::Trace { grid, common } => {
            let geom = geometry(&common)?;
            let assignment = load_grid(&grid, geom.dims())?;
            let (result, trace) = closure_with_trace(&assignment, common.strategies, &geom);
            let mut out = trace.to_text();
            let _ = writeln!(out, "result: {}\nsteps: {}", result.label().to_uppercase(), result.steps());
            write_output(common.output.as_deref(), &out)?;
            Ok(0)
        }
        Command::Encode {
            mask,
            common,
            k,
            theta,
            map,
            no_reduction,
        } => {
            let geom = geometry(&common)?;
            let mask = load_mask(&mask, geom.dims())?;
            let options = EncodeOptions {
                max_step: k,
                strategies: common.strategies,
                clue_reduction: !no_reduction,
                theta,
                ..EncodeOptions::default()
            };
            let (formula, vars) = encode_instance(&mask, &options, &geom).map_err(|e| usage(e.to_string()))?;
            match &common.output {
                Some(p) => {
                    let file = fs::File::create(p).map_err(|e| io_error(p, e))?;
                    formula
                        .write_dimacs(io::BufWriter::new(file))
                        .map_err(|e| io_error(p, e))?;
                }
                None => formula
                    .write_dimacs(io::BufWriter::new(io::stdout().lock()))
                    .map_err(|e| io_error(Path::new("<stdout>"), e))?,
            }
            if let Some(p) = map {
                let file = fs::File::create(&p).map_err(|e| io_error(&p, e))?;
                vars.write_sidecar(io::BufWriter::new(file)).map_err(|e| io_error(&p, e))?;
            }
            Ok(0)
        }
        Command::Minclue {
            common,
            solver,
            theta_start,
            mask,
        } => {
            let geom = geometry(&common)?;
            let allowed = mask.map(|m| load_mask(&m, geom.dims())).transpose()?;
            let config = search_config(&solver)?;
            let start = Instant::now();
            let report = min_clues(common.strategies, &geom, &config, theta_start, allowed.as_ref())
                .map_err(search_failure)?;
            write_output(common.output.as_deref(), &report.report(start.elapsed()))?;
            Ok(if report.exact { 0 } else { EXIT_UNKNOWN })
        }
        Command::Oracle { mask, common, cap } => {
            let geom = geometry(&common)?;
            let mask = load_mask(&mask, geom.dims())?;
            let start = Instant::now();
            let found =
                brute_force_solvable(&mask, common.strategies, &geom, cap).map_err(|e| usage(e.to_string()))?;
            let mut out = String::new();
            match &found {
                Some(a) => {
                    let grid = serialize_grid(a.digits(), geom.dims(), GridFormat::Compact);
                    let _ = write!(
                        out,
                        "result: CLUES\ngrid: {grid}\nsolutions: {}\n",
                        count_solutions(a, &geom, Some(2))
                    );
                }
                None => out.push_str("result: UNSOLVABLE\n"),
            }
            let _ = writeln!(out, "wall_ms: {}", start.elapsed().as_millis());
            write_output(common.output.as_deref(), &out)?;
            Ok(0)
        }
        Command::Classify {
            collection,
            common,
            verdicts,
            jobs,
        } => {
            let dims = geometry(&common)?.dims();
            let stats = classify_collection(&collection, &[common.strategies], dims, jobs).map_err(|e| match e {
                ssc_core::oracle::OracleError::Io(io) => io_error(&collection, io),
                other => Failure {
                    code: EXIT_INTERNAL,
                    message: other.to_string(),
                },
            })?;
            if let Some(p) = verdicts {
                fs::write(&p, stats.verdicts_text()).map_err(|e| io_error(&p, e))?;
            }
            write_output(common.output.as_deref(), &stats.to_text())?;
            Ok(0)
        }
        Command::Bench {
            masks,
            common,
            solver,
            jobs,
        } => {
            let geom = geometry(&common)?;
            let config = search_config(&solver)?;
            let text = read_input(&masks)?;
            let mut parsed = Vec::new();
            for (i, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let mask = parse_mask(line, geom.dims())
                    .map_err(|e| usage(format!("{}:{}: {e}", masks.display(), i + 1)))?;
                parsed.push(mask);
            }
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs.max(1))
                .build()
                .map_err(|e| Failure {
                    code: EXIT_INTERNAL,
                    message: e.to_string(),
                })?;
            let rows: Vec<Result<(SearchOutcome, Duration), Failure>> = pool.install(|| {
                parsed
                    .par_iter()
                    .map(|mask| {
                        let start = Instant::now();
                        let outcome =
                            find_clues(mask, common.strategies, &geom, &config).map_err(search_failure)?;
                        Ok((outcome, start.elapsed()))
                    })
                    .collect()
            });
            let mut out = String::from("mask_id clues result K wall_ms\n");
            let mut any_unknown = false;
            for (id, (mask, row)) in parsed.iter().zip(rows).enumerate() {
                let (outcome, wall) = row?;
                let k = match &outcome {
                    SearchOutcome::Clues { k_used, .. } => k_used.to_string(),
                    SearchOutcome::Unsolvable { k } => k.to_string(),
                    SearchOutcome::Unknown(_) => "-".into(),
                };
                any_unknown |= matches!(outcome, SearchOutcome::Unknown(_));
                let _ = writeln!(out, "{id} {} {} {k} {}", mask.len(), outcome.label(), wall.as_millis());
            }
            write_output(common.output.as_deref(), &out)?;
            Ok(if any_unknown { EXIT_UNKNOWN } else { 0 })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("ssc: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
