//! Decision procedures on top of the encoder: the incremental-K clue search
//! and the descending clue-count search.

use std::fmt::{self, Write as _};
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::encode::{decode_model, encode_instance, DecodeError, DecodedRun, EncodeError, EncodeOptions};
use crate::engine::{closure_with_trace, SolveResult};
use crate::grid::{serialize_grid, ClueAssignment, ClueMask, Geometry, GridFormat, StrategySet};
use crate::sat::{SatError, SatSession, SolverConfig, SolverVerdict};

pub const DEFAULT_K_MIN: usize = 30;
pub const DEFAULT_K_MAX: usize = 649;

#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub k_min: usize,
    /// Upper end of the K loop; clamped to the board's step bound.
    pub k_max: usize,
    /// Backend and per-solve time limit.
    pub solver: SolverConfig,
    /// Wall-clock budget for the whole search.
    pub budget: Option<Duration>,
    pub completion_probe: bool,
    pub clue_reduction: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            k_min: DEFAULT_K_MIN,
            k_max: DEFAULT_K_MAX,
            solver: SolverConfig::default(),
            budget: None,
            completion_probe: true,
            clue_reduction: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnknownReason {
    Timeout,
    /// Every K up to the maximum had a model, none of them complete.
    StepsExhausted,
}

impl fmt::Display for UnknownReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            UnknownReason::Timeout => "timeout",
            UnknownReason::StepsExhausted => "k_max exhausted",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Clues {
        assignment: ClueAssignment,
        k_used: usize,
        /// First step at which the strategy run fills the grid.
        steps_to_complete: usize,
    },
    /// Unsatisfiable at step bound `k`, hence at every larger one.
    Unsolvable { k: usize },
    Unknown(UnknownReason),
}

impl SearchOutcome {
    pub fn label(&self) -> &'static str {
        match self {
            SearchOutcome::Clues { .. } => "CLUES",
            SearchOutcome::Unsolvable { .. } => "UNSOLVABLE",
            SearchOutcome::Unknown(_) => "UNKNOWN",
        }
    }

    /// `key: value` report lines.
    pub fn report(&self, wall: Duration) -> String {
        let mut out = format!("result: {}\n", self.label());
        match self {
            SearchOutcome::Clues {
                assignment,
                k_used,
                steps_to_complete,
            } => {
                let _ = writeln!(out, "K: {k_used}");
                let _ = writeln!(out, "steps: {steps_to_complete}");
                let grid = serialize_grid(assignment.digits(), assignment.dims(), GridFormat::Compact);
                let _ = writeln!(out, "grid: {grid}");
            }
            SearchOutcome::Unsolvable { k } => {
                let _ = writeln!(out, "K: {k}");
            }
            SearchOutcome::Unknown(reason) => {
                let _ = writeln!(out, "reason: {reason}");
            }
        }
        let _ = writeln!(out, "wall_ms: {}", wall.as_millis());
        out
    }
}

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("invalid search configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Encode(#[from] EncodeError),
    #[error(transparent)]
    Sat(#[from] SatError),
    #[error(transparent)]
    Decode(#[from] DecodeError),
    /// The solver's run and the engine's run disagree.
    #[error("engine re-verification failed: {0}")]
    Verification(String),
}

fn step_range(config: &SearchConfig, geom: &Geometry) -> Result<(usize, usize), SearchError> {
    if config.k_min == 0 || config.k_min > config.k_max || config.k_max > DEFAULT_K_MAX {
        return Err(SearchError::Config(format!(
            "need 1 <= k_min <= k_max <= {DEFAULT_K_MAX}, got {}..{}",
            config.k_min, config.k_max
        )));
    }
    let bound = geom.dims().step_bound();
    let k_max = config.k_max.min(bound);
    Ok((config.k_min.min(k_max), k_max))
}

struct Clock {
    deadline: Option<Instant>,
    per_call: Duration,
}

impl Clock {
    fn new(config: &SearchConfig) -> Self {
        Clock {
            deadline: config.budget.map(|b| Instant::now() + b),
            per_call: config.solver.time_limit,
        }
    }

    /// Time limit for the next solver call, `None` once the budget is spent.
    fn next_limit(&self) -> Option<Duration> {
        match self.deadline {
            None => Some(self.per_call),
            Some(d) => {
                let left = d.saturating_duration_since(Instant::now());
                (!left.is_zero()).then(|| left.min(self.per_call))
            }
        }
    }
}

/// Runs the K loop on one clue-position set (`theta = None`) or on the
/// clue-count-bounded instance over the allowed positions `mask`.
fn k_loop(
    mask: &ClueMask,
    theta: Option<usize>,
    strategies: StrategySet,
    geom: &Geometry,
    config: &SearchConfig,
    clock: &Clock,
) -> Result<SearchOutcome, SearchError> {
    let (k_min, k_max) = step_range(config, geom)?;
    for k in k_min..=k_max {
        let Some(limit) = clock.next_limit() else {
            return Ok(SearchOutcome::Unknown(UnknownReason::Timeout));
        };
        let options = EncodeOptions {
            max_step: k,
            strategies,
            clue_reduction: config.clue_reduction,
            completion_probe: config.completion_probe,
            theta,
            fixed_digits: None,
        };
        let (formula, map) = encode_instance(mask, &options, geom)?;
        let mut session = SatSession::new(&formula, config.solver.backend.clone(), limit)?;

        if config.completion_probe {
            match session.solve(&map.completion_assumptions(k))? {
                SolverVerdict::Sat(model) => {
                    let run = decode_model(&model, &map)?;
                    return verified_clues(run, strategies, geom, k);
                }
                SolverVerdict::Timeout(_) => return Ok(SearchOutcome::Unknown(UnknownReason::Timeout)),
                SolverVerdict::Unsat => {}
            }
            let Some(limit) = clock.next_limit() else {
                return Ok(SearchOutcome::Unknown(UnknownReason::Timeout));
            };
            session.set_time_limit(limit)?;
        }

        match session.solve(&[])? {
            SolverVerdict::Unsat => return Ok(SearchOutcome::Unsolvable { k }),
            SolverVerdict::Timeout(_) => return Ok(SearchOutcome::Unknown(UnknownReason::Timeout)),
            SolverVerdict::Sat(model) => {
                let run = decode_model(&model, &map)?;
                // Only reachable complete without the probe.
                if run.final_state().is_complete() {
                    return verified_clues(run, strategies, geom, k);
                }
            }
        }
    }
    Ok(SearchOutcome::Unknown(UnknownReason::StepsExhausted))
}

/// Replays the decoded clues on the engine and checks that both runs agree
/// state by state.
fn verified_clues(
    run: DecodedRun,
    strategies: StrategySet,
    geom: &Geometry,
    k: usize,
) -> Result<SearchOutcome, SearchError> {
    if !run.final_state().is_complete() {
        return Err(SearchError::Verification(format!("model incomplete at K = {k}")));
    }
    let (result, trace) = closure_with_trace(&run.assignment, strategies, geom);
    let steps = match result {
        SolveResult::Solved { steps, .. } if steps <= k => steps,
        other => {
            return Err(SearchError::Verification(format!(
                "engine ends {} at step {} for clues completing by K = {k}",
                other.label(),
                other.steps()
            )))
        }
    };
    for (s, decoded) in run.states.iter().enumerate() {
        let expected = &trace.states[s.min(steps)];
        if decoded != expected {
            return Err(SearchError::Verification(format!("state at step {s} differs from the engine")));
        }
    }
    Ok(SearchOutcome::Clues {
        assignment: run.assignment,
        k_used: k,
        steps_to_complete: steps,
    })
}

/// Searches digits for the clue positions `mask` that make the puzzle
/// solvable with `strategies`.
pub fn find_clues(
    mask: &ClueMask,
    strategies: StrategySet,
    geom: &Geometry,
    config: &SearchConfig,
) -> Result<SearchOutcome, SearchError> {
    if mask.dims() != geom.dims() {
        return Err(SearchError::Config("mask size does not match the board".into()));
    }
    let clock = Clock::new(config);
    k_loop(mask, None, strategies, geom, config, &clock)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinClueReport {
    /// Smallest clue count with a solvable instance; an upper bound only
    /// when `exact` is false.
    pub theta_star: Option<usize>,
    pub witness: Option<ClueAssignment>,
    pub witness_k: Option<usize>,
    /// K at which the instance bounded by `theta_star - 1` was unsatisfiable.
    pub unsat_k: Option<usize>,
    pub exact: bool,
    /// Clue-count bound and verdict label of every descent stage.
    pub stages: Vec<(usize, &'static str)>,
}

impl MinClueReport {
    pub fn report(&self, wall: Duration) -> String {
        let result = match (self.exact, self.witness.is_some()) {
            (true, true) => "CLUES",
            (true, false) => "UNSOLVABLE",
            (false, _) => "UNKNOWN",
        };
        let mut out = format!("result: {result}\n");
        if let Some(t) = self.theta_star {
            let _ = writeln!(out, "theta: {t}");
        }
        let _ = writeln!(out, "exact: {}", self.exact);
        if let Some(k) = self.witness_k {
            let _ = writeln!(out, "K: {k}");
        }
        if let Some(k) = self.unsat_k {
            let _ = writeln!(out, "unsat_K: {k}");
        }
        if let Some(w) = &self.witness {
            let grid = serialize_grid(w.digits(), w.dims(), GridFormat::Compact);
            let _ = writeln!(out, "grid: {grid}");
        }
        let _ = writeln!(out, "wall_ms: {}", wall.as_millis());
        out
    }
}

/// Descends the clue-count bound from `theta_start` (default: every cell)
/// until the bounded instance becomes unsolvable. After a witness with `c`
/// clues the next bound tried is `c - 1`, so the clue count of the last
/// witness is the minimum. `allowed` restricts where clues may appear
/// (default: anywhere).
pub fn min_clues(
    strategies: StrategySet,
    geom: &Geometry,
    config: &SearchConfig,
    theta_start: Option<usize>,
    allowed: Option<&ClueMask>,
) -> Result<MinClueReport, SearchError> {
    let dims = geom.dims();
    let full = ClueMask::full(dims);
    let mask = allowed.unwrap_or(&full);
    if mask.dims() != dims {
        return Err(SearchError::Config("mask size does not match the board".into()));
    }
    let mut theta = theta_start.unwrap_or(dims.num_cells());
    if theta > dims.num_cells() {
        return Err(SearchError::Config(format!(
            "theta_start {theta} exceeds {} cells",
            dims.num_cells()
        )));
    }
    let clock = Clock::new(config);
    let mut report = MinClueReport {
        theta_star: None,
        witness: None,
        witness_k: None,
        unsat_k: None,
        exact: false,
        stages: Vec::new(),
    };
    loop {
        let outcome = k_loop(mask, Some(theta), strategies, geom, config, &clock)?;
        report.stages.push((theta, outcome.label()));
        match outcome {
            SearchOutcome::Clues { assignment, k_used, .. } => {
                let c = assignment.len();
                debug_assert!(c <= theta);
                report.theta_star = Some(c);
                report.witness = Some(assignment);
                report.witness_k = Some(k_used);
                if c == 0 {
                    report.exact = true;
                    return Ok(report);
                }
                theta = c - 1;
            }
            SearchOutcome::Unsolvable { k } => {
                report.unsat_k = Some(k);
                report.exact = true;
                if report.witness.is_none() {
                    report.theta_star = None;
                }
                return Ok(report);
            }
            SearchOutcome::Unknown(_) => return Ok(report),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Dims;

    fn config(k_min: usize) -> SearchConfig {
        SearchConfig {
            k_min,
            ..SearchConfig::default()
        }
    }

    #[test]
    fn rejects_bad_step_range() {
        let geom = Geometry::new(Dims::small());
        let mask = ClueMask::empty(Dims::small());
        for (lo, hi) in [(0, 5), (6, 5), (1, 650)] {
            let cfg = SearchConfig {
                k_min: lo,
                k_max: hi,
                ..SearchConfig::default()
            };
            assert!(matches!(
                find_clues(&mask, StrategySet::ALL, &geom, &cfg),
                Err(SearchError::Config(_))
            ));
        }
    }

    #[test]
    fn three_positions_on_small_board_are_unsolvable() {
        let dims = Dims::small();
        let geom = Geometry::new(dims);
        let mask = ClueMask::from_indices(dims, [0, 5, 10]);
        let out = find_clues(&mask, StrategySet::ALL, &geom, &config(10)).unwrap();
        assert_eq!(out, SearchOutcome::Unsolvable { k: 10 });
    }

    #[test]
    fn one_free_cell() {
        let dims = Dims::standard();
        let geom = Geometry::new(dims);
        let mask = ClueMask::from_indices(dims, 1..81);
        let out = find_clues(&mask, StrategySet::ALL, &geom, &config(30)).unwrap();
        match out {
            SearchOutcome::Clues {
                assignment,
                k_used,
                steps_to_complete,
            } => {
                assert_eq!(k_used, 30);
                assert_eq!(steps_to_complete, 1);
                assert_eq!(assignment.len(), 80);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn report_lines() {
        let out = SearchOutcome::Unsolvable { k: 30 };
        let text = out.report(Duration::from_millis(12));
        assert_eq!(text, "result: UNSOLVABLE\nK: 30\nwall_ms: 12\n");
    }
}
