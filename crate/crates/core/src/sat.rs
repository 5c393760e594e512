//! Solver backends: CaDiCaL linked in-process, or any DIMACS solver run as a
//! child process. Every model is checked against the formula before it is
//! handed out.

use std::io::{self, BufWriter, Read};
use std::path::PathBuf;
use std::process::{Command, Stdio};
use std::thread;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::cnf::{parse_model, CnfFormula, Lit, Model, ParseError, SolverStatus};

/// Environment variable naming an external solver executable.
pub const SOLVER_ENV: &str = "SSC_SAT_SOLVER";

pub const DEFAULT_TIME_LIMIT: Duration = Duration::from_secs(600);

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Backend {
    InProcess,
    /// Executable invoked as `<path> <cnf-file>`.
    External(PathBuf),
}

impl Backend {
    /// External solver from [`SOLVER_ENV`] if set, otherwise in-process.
    pub fn from_env() -> Self {
        match std::env::var_os(SOLVER_ENV) {
            Some(p) if !p.is_empty() => Backend::External(p.into()),
            _ => Backend::InProcess,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolverConfig {
    pub backend: Backend,
    pub time_limit: Duration,
    pub assumptions: Vec<Lit>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            backend: Backend::InProcess,
            time_limit: DEFAULT_TIME_LIMIT,
            assumptions: Vec::new(),
        }
    }
}

impl SolverConfig {
    pub fn new(backend: Backend, time_limit: Duration) -> Result<Self, SatError> {
        if time_limit.is_zero() {
            return Err(SatError::ZeroTimeLimit);
        }
        Ok(SolverConfig {
            backend,
            time_limit,
            assumptions: Vec::new(),
        })
    }

    pub fn with_assumptions(mut self, assumptions: Vec<Lit>) -> Self {
        self.assumptions = assumptions;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolverVerdict {
    Sat(Model),
    Unsat,
    Timeout(Duration),
}

impl SolverVerdict {
    pub fn is_sat(&self) -> bool {
        matches!(self, SolverVerdict::Sat(_))
    }

    pub fn is_unsat(&self) -> bool {
        matches!(self, SolverVerdict::Unsat)
    }
}

#[derive(Debug, Error)]
pub enum SatError {
    #[error("time limit must be positive")]
    ZeroTimeLimit,
    #[error("cannot launch solver {path:?}: {source}")]
    Launch { path: PathBuf, source: io::Error },
    #[error("solver i/o: {0}")]
    Io(#[from] io::Error),
    #[error("malformed solver output: {0}")]
    Output(#[from] ParseError),
    #[error("solver model falsifies clause {0}")]
    InvalidModel(usize),
    #[error("solver model falsifies assumption {0}")]
    AssumptionViolated(Lit),
}

/// Decides `formula` under `config.assumptions`.
pub fn solve(formula: &CnfFormula, config: &SolverConfig) -> Result<SolverVerdict, SatError> {
    let mut session = SatSession::new(formula, config.backend.clone(), config.time_limit)?;
    session.solve(&config.assumptions)
}

/// Solve-call timeout for the in-process solver.
struct Deadline(Instant);

impl cadical::Callbacks for Deadline {
    fn terminate(&mut self) -> bool {
        Instant::now() >= self.0
    }
}

enum Engine {
    InProcess(Box<cadical::Solver<Deadline>>),
    External(PathBuf),
}

/// A formula loaded into a backend, solvable repeatedly under different
/// assumptions. The in-process backend keeps learnt clauses between calls;
/// the external one restarts with assumptions added as unit clauses.
pub struct SatSession<'f> {
    formula: &'f CnfFormula,
    engine: Engine,
    time_limit: Duration,
}

impl<'f> SatSession<'f> {
    pub fn new(formula: &'f CnfFormula, backend: Backend, time_limit: Duration) -> Result<Self, SatError> {
        if time_limit.is_zero() {
            return Err(SatError::ZeroTimeLimit);
        }
        let engine = match backend {
            Backend::InProcess => {
                let mut solver: cadical::Solver<Deadline> = cadical::Solver::new();
                solver.reserve(formula.num_vars() as i32);
                for clause in formula.clauses() {
                    solver.add_clause(clause.iter().copied());
                }
                Engine::InProcess(Box::new(solver))
            }
            Backend::External(path) => Engine::External(path),
        };
        Ok(SatSession {
            formula,
            engine,
            time_limit,
        })
    }

    pub fn set_time_limit(&mut self, time_limit: Duration) -> Result<(), SatError> {
        if time_limit.is_zero() {
            return Err(SatError::ZeroTimeLimit);
        }
        self.time_limit = time_limit;
        Ok(())
    }

    pub fn solve(&mut self, assumptions: &[Lit]) -> Result<SolverVerdict, SatError> {
        let start = Instant::now();
        let verdict = match &mut self.engine {
            Engine::InProcess(solver) => {
                solver.set_callbacks(Some(Deadline(start + self.time_limit)));
                match solver.solve_with(assumptions.iter().copied()) {
                    Some(true) => {
                        let mut model = Model::new(self.formula.num_vars());
                        for var in 1..=self.formula.num_vars() {
                            model.set(var, solver.value(var as Lit) == Some(true));
                        }
                        SolverVerdict::Sat(model)
                    }
                    Some(false) => SolverVerdict::Unsat,
                    None => SolverVerdict::Timeout(start.elapsed()),
                }
            }
            Engine::External(path) => run_external(path, self.formula, assumptions, self.time_limit)?,
        };
        if let SolverVerdict::Sat(model) = &verdict {
            check_model(self.formula, assumptions, model)?;
        }
        Ok(verdict)
    }
}

fn check_model(formula: &CnfFormula, assumptions: &[Lit], model: &Model) -> Result<(), SatError> {
    if let Some(i) = formula.first_violated(model) {
        return Err(SatError::InvalidModel(i));
    }
    if let Some(&a) = assumptions.iter().find(|&&a| !model.lit(a)) {
        return Err(SatError::AssumptionViolated(a));
    }
    Ok(())
}

fn run_external(
    path: &PathBuf,
    formula: &CnfFormula,
    assumptions: &[Lit],
    time_limit: Duration,
) -> Result<SolverVerdict, SatError> {
    let start = Instant::now();
    let mut file = tempfile::Builder::new().prefix("ssc-").suffix(".cnf").tempfile()?;
    {
        let mut copy;
        let to_write = if assumptions.is_empty() {
            formula
        } else {
            copy = formula.clone();
            for &a in assumptions {
                copy.add_clause(&[a]);
            }
            &copy
        };
        to_write.write_dimacs(BufWriter::new(file.as_file_mut()))?;
    }

    let mut child = Command::new(path)
        .arg(file.path())
        .stdin(Stdio::null())
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn()
        .map_err(|source| SatError::Launch {
            path: path.clone(),
            source,
        })?;
    let mut stdout = child.stdout.take().expect("piped stdout");
    let reader = thread::spawn(move || {
        let mut text = String::new();
        stdout.read_to_string(&mut text).map(|_| text)
    });

    let deadline = start + time_limit;
    loop {
        if child.try_wait()?.is_some() {
            break;
        }
        if Instant::now() >= deadline {
            let _ = child.kill();
            let _ = child.wait();
            let _ = reader.join();
            return Ok(SolverVerdict::Timeout(start.elapsed()));
        }
        thread::sleep(Duration::from_millis(2));
    }
    let text = reader
        .join()
        .map_err(|_| io::Error::other("solver output reader panicked"))??;
    let output = parse_model(&text, formula.num_vars())?;
    Ok(match output.status {
        SolverStatus::Sat => SolverVerdict::Sat(output.model.expect("SAT output carries a model")),
        SolverStatus::Unsat => SolverVerdict::Unsat,
        // A solver that gives up without a verdict is treated like a timeout.
        SolverStatus::Unknown => SolverVerdict::Timeout(start.elapsed()),
    })
}
