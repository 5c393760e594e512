//! Baselines that do not touch the SAT path: exhaustive digit enumeration,
//! a backtracking solution counter, generate-and-test, collection
//! classification, and mask enumeration/sampling.

use std::fmt::Write as _;
use std::io;
use std::path::Path;
use std::time::Duration;

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::encode::{decode_model, encode_instance, EncodeOptions};
use crate::engine::{closure, closure_with_trace, SolveResult};
use crate::sat::{Backend, SatSession, SolverVerdict};
use crate::grid::{parse_grid, ClueAssignment, ClueMask, Dims, Digit, Geometry, GridError, StrategySet};

/// Default ceiling on enumerated assignments or masks.
pub const DEFAULT_CAP: u128 = 10_000_000;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("enumeration of up to {count} items exceeds the cap of {cap}")]
    CapExceeded { count: u128, cap: u128 },
    #[error("size {size} exceeds the {cells} cells of the board")]
    SizeTooLarge { size: usize, cells: usize },
    #[error("clue range {lo}..={hi} invalid for {cells} cells")]
    BadRange { lo: usize, hi: usize, cells: usize },
    #[error("cannot read collection: {0}")]
    Io(#[from] io::Error),
    #[error("thread pool: {0}")]
    ThreadPool(#[from] rayon::ThreadPoolBuildError),
}

/// Enumerates digit assignments to `mask` in lexicographic order (cells in
/// row-major order, digits ascending) and returns the first one whose
/// closure fills the grid. Assignments repeating a digit within a group are
/// skipped, since they are contradictory from the start. Fails once more
/// than `cap` assignments have been tested.
pub fn brute_force_solvable(
    mask: &ClueMask,
    strategies: StrategySet,
    geom: &Geometry,
    cap: u128,
) -> Result<Option<ClueAssignment>, OracleError> {
    let cells: Vec<usize> = mask.indices().collect();
    let mut search = Enumeration {
        cells,
        digits: vec![0; geom.dims().num_cells()],
        strategies,
        geom,
        tested: 0,
        cap,
    };
    search.run(0)
}

struct Enumeration<'g> {
    cells: Vec<usize>,
    digits: Vec<Digit>,
    strategies: StrategySet,
    geom: &'g Geometry,
    tested: u128,
    cap: u128,
}

impl Enumeration<'_> {
    fn run(&mut self, depth: usize) -> Result<Option<ClueAssignment>, OracleError> {
        let dims = self.geom.dims();
        if depth == self.cells.len() {
            self.tested += 1;
            if self.tested > self.cap {
                let count = (dims.side() as u128).checked_pow(self.cells.len() as u32).unwrap_or(u128::MAX);
                return Err(OracleError::CapExceeded { count, cap: self.cap });
            }
            let assignment = ClueAssignment::from_digits(dims, self.digits.clone()).expect("digits in range");
            let solved = closure(&assignment, self.strategies, self.geom).is_solved();
            return Ok(solved.then_some(assignment));
        }
        let c = self.cells[depth];
        for d in 1..=dims.max_digit() {
            if self.geom.peers(c).iter().any(|&p| self.digits[p] == d) {
                continue;
            }
            self.digits[c] = d;
            if let Some(found) = self.run(depth + 1)? {
                return Ok(Some(found));
            }
        }
        self.digits[c] = 0;
        Ok(None)
    }
}

/// Bitmask backtracking solver used for counting and sampling completions.
struct Backtracker<'g> {
    geom: &'g Geometry,
    digits: Vec<Digit>,
    // Used digits per group, bit d for digit d.
    used: Vec<u64>,
}

impl<'g> Backtracker<'g> {
    /// `None` if the clues already clash.
    fn new(digits: &[Digit], geom: &'g Geometry) -> Option<Self> {
        let mut used = vec![0u64; geom.num_groups()];
        for (c, &d) in digits.iter().enumerate() {
            if d == 0 {
                continue;
            }
            for g in geom.cell_groups(c) {
                if used[g] & (1 << d) != 0 {
                    return None;
                }
                used[g] |= 1 << d;
            }
        }
        Some(Backtracker {
            geom,
            digits: digits.to_vec(),
            used,
        })
    }

    fn free(&self, c: usize) -> u64 {
        let [a, b, k] = self.geom.cell_groups(c);
        let all = ((1u64 << (self.geom.dims().side() + 1)) - 1) & !1;
        all & !(self.used[a] | self.used[b] | self.used[k])
    }

    /// Empty cell with the fewest options.
    fn pick(&self) -> Option<(usize, u64)> {
        let mut best: Option<(usize, u64)> = None;
        for c in 0..self.digits.len() {
            if self.digits[c] != 0 {
                continue;
            }
            let f = self.free(c);
            if best.is_none_or(|(_, b)| f.count_ones() < b.count_ones()) {
                best = Some((c, f));
                if f.count_ones() <= 1 {
                    break;
                }
            }
        }
        best
    }

    fn set(&mut self, c: usize, d: Digit) {
        self.digits[c] = d;
        for g in self.geom.cell_groups(c) {
            self.used[g] |= 1 << d;
        }
    }

    fn unset(&mut self, c: usize, d: Digit) {
        self.digits[c] = 0;
        for g in self.geom.cell_groups(c) {
            self.used[g] &= !(1 << d);
        }
    }

    fn count(&mut self, limit: u64) -> u64 {
        let Some((c, free)) = self.pick() else {
            return 1;
        };
        let mut total = 0;
        for d in bits(free) {
            self.set(c, d);
            total += self.count(limit - total);
            self.unset(c, d);
            if total >= limit {
                break;
            }
        }
        total
    }

    fn fill_random<R: Rng>(&mut self, rng: &mut R) -> bool {
        let Some((c, free)) = self.pick() else {
            return true;
        };
        let mut order: Vec<Digit> = bits(free).collect();
        order.shuffle(rng);
        for d in order {
            self.set(c, d);
            if self.fill_random(rng) {
                return true;
            }
            self.unset(c, d);
        }
        false
    }
}

fn bits(set: u64) -> impl Iterator<Item = Digit> {
    (1..64u8).filter(move |&d| set & (1 << d) != 0)
}

/// Number of Sudoku completions of `assignment`, stopping at `limit`
/// (`None`: count all).
pub fn count_solutions(assignment: &ClueAssignment, geom: &Geometry, limit: Option<u64>) -> u64 {
    let limit = limit.unwrap_or(u64::MAX);
    if limit == 0 {
        return 0;
    }
    match Backtracker::new(assignment.digits(), geom) {
        Some(mut bt) => bt.count(limit),
        None => 0,
    }
}

/// A complete grid drawn by randomized backtracking.
pub fn random_solution<R: Rng>(geom: &Geometry, rng: &mut R) -> Vec<Digit> {
    let mut bt = Backtracker::new(&vec![0; geom.dims().num_cells()], geom).expect("empty grid");
    assert!(bt.fill_random(rng), "every board size has a solution");
    bt.digits
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialOutcome {
    pub result: &'static str,
    pub steps: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialLog {
    pub seed: u64,
    pub max_trials: usize,
    pub trials: usize,
    pub successes: usize,
    pub outcomes: Vec<TrialOutcome>,
}

/// The generate-and-test baseline: draw digits for the mask uniformly and
/// independently per cell, run the closure, repeat until a draw is solvable
/// or `max_trials` draws failed.
pub fn generate_and_test(
    mask: &ClueMask,
    strategies: StrategySet,
    geom: &Geometry,
    max_trials: usize,
    seed: u64,
) -> (Option<ClueAssignment>, TrialLog) {
    assert!(max_trials >= 1, "at least one trial");
    let dims = geom.dims();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut log = TrialLog {
        seed,
        max_trials,
        trials: 0,
        successes: 0,
        outcomes: Vec::new(),
    };
    for _ in 0..max_trials {
        let digits: Vec<Digit> = (0..dims.num_cells())
            .map(|c| {
                if mask.contains_index(c) {
                    rng.gen_range(1..=dims.max_digit())
                } else {
                    0
                }
            })
            .collect();
        let assignment = ClueAssignment::from_digits(dims, digits).expect("digits in range");
        let result = closure(&assignment, strategies, geom);
        log.trials += 1;
        log.outcomes.push(TrialOutcome {
            result: result.label(),
            steps: result.steps(),
        });
        if result.is_solved() {
            log.successes += 1;
            return (Some(assignment), log);
        }
    }
    (None, log)
}

/// Verdicts for one grid of a collection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridVerdict {
    /// 1-based line number in the input.
    pub line: usize,
    /// One entry per queried strategy set.
    pub solvable: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollectionStats {
    pub total: usize,
    pub strategy_sets: Vec<StrategySet>,
    pub solvable: Vec<usize>,
    pub verdicts: Vec<GridVerdict>,
    pub errors: Vec<(usize, GridError)>,
}

impl CollectionStats {
    /// `key: value` summary lines.
    pub fn to_text(&self) -> String {
        let mut out = format!("total: {}\n", self.total);
        for (s, n) in self.strategy_sets.iter().zip(&self.solvable) {
            let _ = writeln!(out, "solvable[{s}]: {n}");
        }
        let _ = writeln!(out, "errors: {}", self.errors.len());
        for (line, e) in &self.errors {
            let _ = writeln!(out, "error: line {line}: {e}");
        }
        out
    }

    /// One line per grid: line number and a verdict per strategy set.
    pub fn verdicts_text(&self) -> String {
        let mut out = String::new();
        for v in &self.verdicts {
            let _ = write!(out, "{}", v.line);
            for &s in &v.solvable {
                out.push_str(if s { " solvable" } else { " unsolvable" });
            }
            out.push('\n');
        }
        out
    }
}

/// Classifies one grid per line of `text`. Blank lines and lines starting
/// with `#` are ignored; unparsable lines are recorded, not fatal.
pub fn classify_lines(
    text: &str,
    strategy_sets: &[StrategySet],
    dims: Dims,
    threads: Option<usize>,
) -> Result<CollectionStats, OracleError> {
    let geom = Geometry::new(dims);
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .collect();
    let work = || -> Vec<(usize, Result<Vec<bool>, GridError>)> {
        lines
            .par_iter()
            .map(|&(no, line)| {
                let verdict = parse_grid(line, dims).map(|a| {
                    strategy_sets
                        .iter()
                        .map(|&s| matches!(closure(&a, s, &geom), SolveResult::Solved { .. }))
                        .collect()
                });
                (no, verdict)
            })
            .collect()
    };
    let results = match threads {
        Some(n) => rayon::ThreadPoolBuilder::new().num_threads(n).build()?.install(work),
        None => work(),
    };
    let mut stats = CollectionStats {
        total: 0,
        strategy_sets: strategy_sets.to_vec(),
        solvable: vec![0; strategy_sets.len()],
        verdicts: Vec::new(),
        errors: Vec::new(),
    };
    for (line, r) in results {
        match r {
            Ok(solvable) => {
                stats.total += 1;
                for (count, &s) in stats.solvable.iter_mut().zip(&solvable) {
                    *count += s as usize;
                }
                stats.verdicts.push(GridVerdict { line, solvable });
            }
            Err(e) => stats.errors.push((line, e)),
        }
    }
    Ok(stats)
}

/// [`classify_lines`] over a file.
pub fn classify_collection(
    path: &Path,
    strategy_sets: &[StrategySet],
    dims: Dims,
    threads: Option<usize>,
) -> Result<CollectionStats, OracleError> {
    let text = std::fs::read_to_string(path)?;
    classify_lines(&text, strategy_sets, dims, threads)
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// All masks with `size` cells, in lexicographic order of their sorted
/// cell indices.
pub fn enumerate_masks(dims: Dims, size: usize, cap: u128) -> Result<MaskCombinations, OracleError> {
    let cells = dims.num_cells();
    if size > cells {
        return Err(OracleError::SizeTooLarge { size, cells });
    }
    let count = binomial(cells, size);
    if count > cap {
        return Err(OracleError::CapExceeded { count, cap });
    }
    Ok(MaskCombinations {
        dims,
        current: Some((0..size).collect()),
    })
}

pub struct MaskCombinations {
    dims: Dims,
    current: Option<Vec<usize>>,
}

impl Iterator for MaskCombinations {
    type Item = ClueMask;

    fn next(&mut self) -> Option<ClueMask> {
        let comb = self.current.take()?;
        let mask = ClueMask::from_indices(self.dims, comb.iter().copied());
        let n = self.dims.num_cells();
        let k = comb.len();
        let mut next = comb;
        // Rightmost position that can still move right.
        if let Some(i) = (0..k).rev().find(|&i| next[i] < n - k + i) {
            next[i] += 1;
            for j in i + 1..k {
                next[j] = next[j - 1] + 1;
            }
            self.current = Some(next);
        }
        Some(mask)
    }
}

/// `count` masks, each with a size drawn uniformly from `lo..=hi` and
/// cells drawn uniformly without replacement.
pub fn random_masks(dims: Dims, count: usize, (lo, hi): (usize, usize), seed: u64) -> Result<Vec<ClueMask>, OracleError> {
    let cells = dims.num_cells();
    if lo > hi || hi > cells {
        return Err(OracleError::BadRange { lo, hi, cells });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..count)
        .map(|_| {
            let size = rng.gen_range(lo..=hi);
            ClueMask::from_indices(dims, index::sample(&mut rng, cells, size))
        })
        .collect())
}

/// Result of comparing the encoding of one fixed assignment with the engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Agreement {
    /// The engine completes within K and the formula has a complete model.
    Complete,
    /// The engine ends unsolved within K and the formula is unsatisfiable.
    Unsat,
    /// The engine is still running at K; the formula has only incomplete
    /// models.
    Running,
}

/// Encodes `assignment` (pinned via fixed digits) with bound `k` and
/// checks the solver's verdicts and decoded states against the engine run.
pub fn check_agreement(
    assignment: &ClueAssignment,
    strategies: StrategySet,
    k: usize,
    clue_reduction: bool,
    geom: &Geometry,
) -> Result<Agreement, String> {
    let options = EncodeOptions {
        max_step: k,
        strategies,
        clue_reduction,
        completion_probe: true,
        theta: None,
        fixed_digits: Some(assignment.clone()),
    };
    let (formula, map) = encode_instance(&assignment.mask(), &options, geom).map_err(|e| e.to_string())?;
    let mut session =
        SatSession::new(&formula, Backend::InProcess, Duration::from_secs(600)).map_err(|e| e.to_string())?;
    let probe = session.solve(&map.completion_assumptions(k)).map_err(|e| e.to_string())?;
    let plain = session.solve(&[]).map_err(|e| e.to_string())?;

    let (result, trace) = closure_with_trace(assignment, strategies, geom);
    let expected = match &result {
        SolveResult::Solved { steps, .. } if *steps <= k => Agreement::Complete,
        SolveResult::Stuck { steps, .. } if *steps <= k => Agreement::Unsat,
        SolveResult::Contradiction(c) if c.step <= k => Agreement::Unsat,
        _ => Agreement::Running,
    };
    let models = match (&probe, &plain) {
        (SolverVerdict::Sat(a), SolverVerdict::Sat(b)) => Some((Agreement::Complete, [a, b])),
        (SolverVerdict::Unsat, SolverVerdict::Unsat) => None,
        (SolverVerdict::Unsat, SolverVerdict::Sat(b)) => Some((Agreement::Running, [b, b])),
        other => return Err(format!("inconsistent verdicts {other:?}")),
    };
    let got = models.as_ref().map_or(Agreement::Unsat, |(a, _)| *a);
    if got != expected {
        return Err(format!(
            "formula says {got:?}, engine ends {} at step {}",
            result.label(),
            result.steps()
        ));
    }
    if let Some((_, ms)) = models {
        let last = trace.states.len() - 1;
        for model in ms {
            let run = decode_model(model, &map).map_err(|e| e.to_string())?;
            if run.assignment != *assignment {
                return Err("decoded clues differ from the fixed digits".into());
            }
            for (s, state) in run.states.iter().enumerate() {
                if *state != trace.states[s.min(last)] {
                    return Err(format!("decoded state at step {s} differs from the engine"));
                }
            }
        }
    }
    Ok(expected)
}
