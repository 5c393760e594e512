//! Acceptance suite: one PASS/FAIL line per criterion. Criterion 8 is
//! reported but does not affect the exit status; criterion 9 is skipped
//! unless `SSC_MINIMUM_COLLECTION` names the 49,151-grid collection file.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ssc_core::encode::{encode_instance, EncodeOptions};
use ssc_core::engine::{closure, closure_with_trace, step, SolveResult, StepOutcome};
use ssc_core::grid::{
    is_valid_solution, parse_grid, ClueAssignment, ClueMask, Dims, Geometry, StrategySet,
};
use ssc_core::oracle::{
    brute_force_solvable, check_agreement, classify_collection, count_solutions, enumerate_masks,
    random_masks, random_solution, DEFAULT_CAP,
};
use ssc_core::sat::{solve, SolverConfig, SolverVerdict};
use ssc_core::search::{find_clues, min_clues, SearchConfig, SearchOutcome};

const COLLECTION_ENV: &str = "SSC_MINIMUM_COLLECTION";
const MINIMUM_17: &str = include_str!("data/minimum_17.txt");

enum Status {
    Pass,
    Fail,
    Skip,
    /// Below threshold on a reported-only criterion.
    Reported,
}

type Outcome = (Status, String);

fn verdict(ok: bool, detail: String) -> Outcome {
    (if ok { Status::Pass } else { Status::Fail }, detail)
}

/// Solvable 4-cell masks found by the exhaustive check, reused by
/// criterion 2.
struct SmallBoard {
    solvable_four: Vec<ClueMask>,
    unsolvable: Vec<ClueMask>,
}

fn criterion_1(small: &mut SmallBoard) -> Outcome {
    let dims = Dims::small();
    let geom = Geometry::new(dims);
    let config = SearchConfig::default();
    let mut solvable = [0usize; 2];
    let mut totals = [0usize; 2];
    let mut problems = Vec::new();
    for (i, size) in [3usize, 4].into_iter().enumerate() {
        for mask in enumerate_masks(dims, size, DEFAULT_CAP).unwrap() {
            totals[i] += 1;
            let oracle = brute_force_solvable(&mask, StrategySet::ALL, &geom, DEFAULT_CAP).unwrap();
            let exact = match find_clues(&mask, StrategySet::ALL, &geom, &config) {
                Ok(o) => o,
                Err(e) => {
                    problems.push(format!("{}: {e}", mask.to_text()));
                    continue;
                }
            };
            match (&oracle, &exact) {
                (Some(_), SearchOutcome::Clues { assignment, .. }) => {
                    if count_solutions(assignment, &geom, Some(2)) != 1 {
                        problems.push(format!("{}: returned clues are not proper", mask.to_text()));
                    }
                    solvable[i] += 1;
                    if size == 4 {
                        small.solvable_four.push(mask.clone());
                    }
                }
                (None, SearchOutcome::Unsolvable { .. }) => small.unsolvable.push(mask.clone()),
                _ => problems.push(format!("{}: oracle {:?} vs {}", mask.to_text(), oracle.is_some(), exact.label())),
            }
        }
    }
    let ok = problems.is_empty() && totals == [560, 1820] && solvable == [0, 704];
    verdict(
        ok,
        format!(
            "3-cell: {}/{} solvable, 4-cell: {}/{} solvable, disagreements: {}{}",
            solvable[0],
            totals[0],
            solvable[1],
            totals[1],
            problems.len(),
            problems.first().map(|p| format!(" (first: {p})")).unwrap_or_default()
        ),
    )
}

fn criterion_2(small: &SmallBoard) -> Outcome {
    let geom = Geometry::new(Dims::small());
    let config = SearchConfig::default();
    let mut both = 0;
    for mask in &small.solvable_four {
        let oracle = brute_force_solvable(mask, StrategySet::NAKED_SINGLES, &geom, DEFAULT_CAP).unwrap();
        let exact = find_clues(mask, StrategySet::NAKED_SINGLES, &geom, &config);
        if oracle.is_some() && matches!(exact, Ok(SearchOutcome::Clues { .. })) {
            both += 1;
        }
    }
    let n = small.solvable_four.len();
    verdict(
        n == 704 && both == n,
        format!("{both}/{n} solvable 4-cell masks remain solvable with naked singles (oracle and SAT)"),
    )
}

fn criterion_3() -> Outcome {
    let geom = Geometry::new(Dims::small());
    let config = SearchConfig::default();
    let mut parts = Vec::new();
    let mut ok = true;
    for (name, s) in [("ns", StrategySet::NAKED_SINGLES), ("ns,hs,lc", StrategySet::ALL)] {
        match min_clues(s, &geom, &config, None, None) {
            Ok(r) => {
                let witness_ok = r.witness.as_ref().is_some_and(|w| {
                    w.len() <= 4 && closure(w, s, &geom).is_solved() && count_solutions(w, &geom, Some(2)) == 1
                });
                ok &= r.exact && r.theta_star == Some(4) && witness_ok && r.unsat_k.is_some();
                let path: Vec<String> = r.stages.iter().map(|(t, l)| format!("{t}:{l}")).collect();
                parts.push(format!("{{{name}}} theta*={:?} [{}]", r.theta_star, path.join(" ")));
            }
            Err(e) => {
                ok = false;
                parts.push(format!("{{{name}}} error: {e}"));
            }
        }
    }
    verdict(ok, parts.join("; "))
}

/// Clues from a random solution, or arbitrary random digits.
fn random_assignment(rng: &mut ChaCha8Rng, geom: &Geometry, consistent: bool) -> ClueAssignment {
    let dims = geom.dims();
    if consistent {
        let solution = random_solution(geom, rng);
        let mask = random_masks(dims, 1, (20, 60), rng.gen()).unwrap().remove(0);
        ClueAssignment::from_grid_and_mask(&solution, &mask).unwrap()
    } else {
        let mask = random_masks(dims, 1, (8, 30), rng.gen()).unwrap().remove(0);
        let digits = (0..dims.num_cells())
            .map(|c| if mask.contains_index(c) { rng.gen_range(1..=9) } else { 0 })
            .collect();
        ClueAssignment::from_digits(dims, digits).unwrap()
    }
}

fn criterion_4() -> Outcome {
    let geom = Geometry::new(Dims::standard());
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut counts = [0usize; 3];
    let mut failures = Vec::new();
    let n = 200;
    for i in 0..n {
        let a = random_assignment(&mut rng, &geom, i % 4 != 3);
        for k in [5, 15, 30] {
            match check_agreement(&a, StrategySet::ALL, k, true, &geom) {
                Ok(v) => counts[v as usize] += 1,
                Err(e) => failures.push(format!("assignment {i}, K {k}: {e}")),
            }
        }
    }
    verdict(
        failures.is_empty(),
        format!(
            "{n} assignments x K in {{5,15,30}}: complete {}, unsat {}, running {}, mismatches {}{}",
            counts[0],
            counts[1],
            counts[2],
            failures.len(),
            failures.first().map(|f| format!(" (first: {f})")).unwrap_or_default()
        ),
    )
}

fn criterion_5() -> Outcome {
    let dims = Dims::standard();
    let geom = Geometry::new(dims);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut solved = 0;
    let mut problems = Vec::new();
    for t in 0..1000 {
        let solution = random_solution(&geom, &mut rng);
        let mask = random_masks(dims, 1, (25, 60), rng.gen()).unwrap().remove(0);
        let a = ClueAssignment::from_grid_and_mask(&solution, &mask).unwrap();
        let (result, trace) = closure_with_trace(&a, StrategySet::ALL, &geom);
        let wrong = trace
            .states
            .iter()
            .any(|s| s.placements().iter().zip(&solution).any(|(&p, &d)| p != 0 && p != d));
        if wrong {
            problems.push(format!("trial {t}: placement differs from the source grid"));
        }
        match result {
            SolveResult::Solved { solution: s, .. } => {
                solved += 1;
                if !is_valid_solution(s.placements(), &geom) || count_solutions(&a, &geom, Some(2)) != 1 {
                    problems.push(format!("trial {t}: solved output invalid or not unique"));
                }
            }
            SolveResult::Stuck { .. } => {}
            SolveResult::Contradiction(c) => problems.push(format!("trial {t}: contradiction {c:?}")),
        }
    }
    verdict(
        problems.is_empty(),
        format!("1000 trials, {solved} solved, violations {}", problems.len()),
    )
}

fn criterion_6() -> Outcome {
    let geom = Geometry::new(Dims::standard());
    let bound = geom.dims().step_bound();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut max_steps = 0;
    let mut problems = 0;
    let mut fixpoints = 0;
    for i in 0..600 {
        let a = random_assignment(&mut rng, &geom, i % 3 != 0);
        for s in [StrategySet::ALL, StrategySet::NAKED_SINGLES, StrategySet::NONE] {
            let result = closure(&a, s, &geom);
            max_steps = max_steps.max(result.steps());
            if result.steps() > bound {
                problems += 1;
            }
            let end = match &result {
                SolveResult::Solved { solution, steps } => Some((solution, *steps)),
                SolveResult::Stuck { state, steps } => Some((state, *steps)),
                SolveResult::Contradiction(_) => None,
            };
            if let Some((state, k)) = end {
                fixpoints += 1;
                match step(state, s, &geom, k + 1) {
                    StepOutcome::Fixpoint { state: next, .. } if next == *state => {}
                    _ => problems += 1,
                }
            }
        }
    }
    verdict(
        bound == 649 && problems == 0,
        format!("step bound {bound}, longest run {max_steps} steps, {fixpoints} end states re-stepped, violations {problems}"),
    )
}

fn plain_verdict(mask: &ClueMask, s: StrategySet, k: usize, geom: &Geometry) -> SolverVerdict {
    let options = EncodeOptions {
        max_step: k,
        strategies: s,
        ..EncodeOptions::default()
    };
    let (formula, _) = encode_instance(mask, &options, geom).unwrap();
    solve(&formula, &SolverConfig::default()).unwrap()
}

fn criterion_7(small: &SmallBoard) -> Outcome {
    let geom = Geometry::new(Dims::small());
    let threes: Vec<&ClueMask> = small.unsolvable.iter().filter(|m| m.len() == 3).step_by(56).take(10).collect();
    let fours: Vec<&ClueMask> = small.unsolvable.iter().filter(|m| m.len() == 4).step_by(111).take(10).collect();
    let mut ks = Vec::new();
    let mut ok = threes.len() + fours.len() == 20;
    for (i, mask) in threes.iter().chain(&fours).enumerate() {
        let s = if i % 2 == 0 { StrategySet::ALL } else { StrategySet::NAKED_SINGLES };
        let Some(k) = (1..=30).find(|&k| plain_verdict(mask, s, k, &geom).is_unsat()) else {
            ok = false;
            continue;
        };
        ks.push(k);
        ok &= plain_verdict(mask, s, k + 1, &geom).is_unsat();
    }
    verdict(ok, format!("{} masks, first unsat K values {ks:?}, all unsat at K+1: {ok}", ks.len()))
}

fn criterion_8() -> Outcome {
    let dims = Dims::standard();
    let geom = Geometry::new(dims);
    let masks = random_masks(dims, 20, (30, 79), 2014).unwrap();
    let config = SearchConfig {
        budget: Some(Duration::from_secs(600)),
        ..SearchConfig::default()
    };
    let mut found = 0;
    let mut slowest = Duration::ZERO;
    let mut notes = Vec::new();
    for (i, mask) in masks.iter().enumerate() {
        let start = Instant::now();
        let out = find_clues(mask, StrategySet::ALL, &geom, &config);
        slowest = slowest.max(start.elapsed());
        match out {
            Ok(SearchOutcome::Clues { .. }) => found += 1,
            Ok(o) => notes.push(format!("mask {i} ({} clues): {}", mask.len(), o.label())),
            Err(e) => notes.push(format!("mask {i}: {e}")),
        }
    }
    let detail = format!(
        "{found}/20 found within 600 s, slowest {:.1} s{}",
        slowest.as_secs_f64(),
        if notes.is_empty() { String::new() } else { format!(" ({})", notes.join("; ")) }
    );
    if found >= 18 {
        (Status::Pass, detail)
    } else {
        (Status::Reported, detail)
    }
}

fn criterion_9() -> Outcome {
    let Some(path) = std::env::var_os(COLLECTION_ENV).map(PathBuf::from) else {
        return (Status::Skip, format!("{COLLECTION_ENV} not set"));
    };
    if !path.is_file() {
        return (Status::Skip, format!("{} not found", path.display()));
    }
    let sets = [StrategySet::ALL, StrategySet::NAKED_SINGLES];
    match classify_collection(&path, &sets, Dims::standard(), None) {
        Ok(stats) => verdict(
            stats.total == 49_151 && stats.solvable == [37_373, 0] && stats.errors.is_empty(),
            format!(
                "total {}, solvable {{ns,hs,lc}} {}, {{ns}} {}, parse errors {}",
                stats.total,
                stats.solvable[0],
                stats.solvable[1],
                stats.errors.len()
            ),
        ),
        Err(e) => (Status::Fail, e.to_string()),
    }
}

fn criterion_10() -> Outcome {
    let dims = Dims::standard();
    let geom = Geometry::new(dims);
    let line = MINIMUM_17.lines().next().expect("fixture grid");
    let puzzle = parse_grid(line, dims).unwrap();
    let mask = puzzle.mask();
    let config = SearchConfig {
        budget: Some(Duration::from_secs(60)),
        solver: SolverConfig {
            time_limit: Duration::from_secs(60),
            ..SolverConfig::default()
        },
        ..SearchConfig::default()
    };
    let start = Instant::now();
    match find_clues(&mask, StrategySet::NAKED_SINGLES, &geom, &config) {
        Ok(o) => verdict(
            !matches!(o, SearchOutcome::Clues { .. }),
            format!("{}-clue mask with {{ns}}: {} after {:.1} s", mask.len(), o.label(), start.elapsed().as_secs_f64()),
        ),
        Err(e) => (Status::Fail, e.to_string()),
    }
}

fn main() -> ExitCode {
    let mut small = SmallBoard {
        solvable_four: Vec::new(),
        unsolvable: Vec::new(),
    };
    let mut failed = false;
    let mut report = |id: u32, run: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let (status, detail) = run();
        let label = match status {
            Status::Pass => "PASS",
            Status::Fail => {
                failed = true;
                "FAIL"
            }
            Status::Skip => "SKIP",
            Status::Reported => "FAIL (reported only)",
        };
        println!("criterion {id}: {label} - {detail} [{:.1} s]", start.elapsed().as_secs_f64());
    };
    report(1, &mut || criterion_1(&mut small));
    report(2, &mut || criterion_2(&small));
    report(3, &mut criterion_3);
    report(4, &mut criterion_4);
    report(5, &mut criterion_5);
    report(6, &mut criterion_6);
    report(7, &mut || criterion_7(&small));
    report(8, &mut criterion_8);
    report(9, &mut criterion_9);
    report(10, &mut criterion_10);
    if failed {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
