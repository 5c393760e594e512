//! Forward simulation of the strategy transition relation.
//!
//! One transition fires every enabled strategy at once. Placements and
//! locked-candidate removals read the candidate sets of the previous state;
//! the forced removals caused by placements use the placements of the new
//! state. The encoder constrains its per-step variables in exactly the same
//! way, so runs of the two can be compared step for step.

use std::fmt::{self, Write as _};

use crate::grid::{
    is_valid_solution, make_initial_state, validate_state, Candidates, Cell, ClueAssignment, Digit,
    Geometry, GridError, GridState, StrategySet,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PlacementRule {
    NakedSingle,
    HiddenSingle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RemovalCause {
    /// Forced by a placement in the cell itself or in a peer.
    Forced,
    LockedCandidate,
}

impl fmt::Display for PlacementRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PlacementRule::NakedSingle => "naked_single",
            PlacementRule::HiddenSingle => "hidden_single",
        })
    }
}

impl fmt::Display for RemovalCause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RemovalCause::Forced => "s2",
            RemovalCause::LockedCandidate => "locked_candidate",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Placement {
    pub cell: Cell,
    pub digit: Digit,
    pub rule: PlacementRule,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Removal {
    pub cell: Cell,
    pub digit: Digit,
    pub cause: RemovalCause,
}

/// What one transition placed and removed.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StepDeductions {
    pub placements: Vec<Placement>,
    pub removals: Vec<Removal>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ContradictionKind {
    DuplicateClue { digit: Digit, first: Cell, second: Cell },
    /// Two different digits were deduced for one cell in the same step.
    ConflictingPlacement { cell: Cell, digits: Vec<Digit> },
    NoCandidates { cell: Cell },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Contradiction {
    pub step: usize,
    pub kind: ContradictionKind,
}

impl fmt::Display for Contradiction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ContradictionKind::DuplicateClue { digit, first, second } => {
                write!(f, "step {}: clue {digit} repeated at {first} and {second}", self.step)
            }
            ContradictionKind::ConflictingPlacement { cell, digits } => {
                write!(f, "step {}: digits {digits:?} deduced for {cell}", self.step)
            }
            ContradictionKind::NoCandidates { cell } => {
                write!(f, "step {}: no candidate left at {cell}", self.step)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepOutcome {
    /// Candidate sets changed.
    Changed { state: GridState, deductions: StepDeductions },
    /// Candidate sets are unchanged; the state will not change again.
    Fixpoint { state: GridState, deductions: StepDeductions },
    Contradiction(Contradiction),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveResult {
    Solved { solution: GridState, steps: usize },
    Stuck { state: GridState, steps: usize },
    Contradiction(Contradiction),
}

impl SolveResult {
    pub fn is_solved(&self) -> bool {
        matches!(self, SolveResult::Solved { .. })
    }

    /// The step at which the run ended.
    pub fn steps(&self) -> usize {
        match self {
            SolveResult::Solved { steps, .. } | SolveResult::Stuck { steps, .. } => *steps,
            SolveResult::Contradiction(c) => c.step,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            SolveResult::Solved { .. } => "solved",
            SolveResult::Stuck { .. } => "stuck",
            SolveResult::Contradiction(_) => "contradiction",
        }
    }
}

/// States `q_0..q_k` and the deductions of each transition
/// (`deductions[s]` leads from `states[s]` to `states[s + 1]`).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Trace {
    pub states: Vec<GridState>,
    pub deductions: Vec<StepDeductions>,
}

impl Trace {
    /// Line-oriented export: a `step k` header per transition followed by
    /// `k i j n rule` placement lines and `k i j n cause` removal lines.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (s, d) in self.deductions.iter().enumerate() {
            let k = s + 1;
            let _ = writeln!(out, "step {k}");
            for p in &d.placements {
                let _ = writeln!(out, "{k} {} {} {} {}", p.cell.row, p.cell.col, p.digit, p.rule);
            }
            for r in &d.removals {
                let _ = writeln!(out, "{k} {} {} {} {}", r.cell.row, r.cell.col, r.digit, r.cause);
            }
            out.push('\n');
        }
        out
    }
}

/// Empty cells whose candidate set is a singleton.
pub fn naked_single_placements(state: &GridState) -> Vec<(Cell, Digit)> {
    let dims = state.dims();
    (0..dims.num_cells())
        .filter(|&c| state.placed[c] == 0)
        .filter_map(|c| state.candidates[c].as_single().map(|d| (dims.cell(c), d)))
        .collect()
}

/// Per-cell bitset of digits for which some group of the cell has the digit
/// in no other cell's candidates. Covers filled cells and digits missing
/// from the cell itself, both of which the transition must see.
fn hidden_single_evidence(state: &GridState, geom: &Geometry) -> Vec<Candidates> {
    let dims = state.dims();
    let mut out = vec![Candidates::EMPTY; dims.num_cells()];
    for g in 0..geom.num_groups() {
        let cells = geom.group_cells(g);
        for n in 1..=dims.max_digit() {
            let mut holders = cells.iter().filter(|&&c| state.candidates[c].contains(n));
            match (holders.next(), holders.next()) {
                (None, _) => cells.iter().for_each(|&c| out[c].insert(n)),
                (Some(&only), None) => out[only].insert(n),
                _ => {}
            }
        }
    }
    out
}

/// Empty cells `(c, n)` such that no other cell of some group of `c` has `n`
/// as a candidate.
pub fn hidden_single_placements(state: &GridState, geom: &Geometry) -> Vec<(Cell, Digit)> {
    let dims = state.dims();
    let evidence = hidden_single_evidence(state, geom);
    let mut out = Vec::new();
    for c in 0..dims.num_cells() {
        if state.placed[c] == 0 {
            out.extend(evidence[c].iter().map(|n| (dims.cell(c), n)));
        }
    }
    out
}

/// Per-cell bitset of digits that some locked pair rules out.
fn locked_candidate_evidence(state: &GridState, geom: &Geometry) -> Vec<Candidates> {
    let dims = state.dims();
    let mut out = vec![Candidates::EMPTY; dims.num_cells()];
    for pair in geom.locked_pairs() {
        let present = pair
            .a_only
            .iter()
            .fold(0u64, |acc, &c| acc | state.candidates[c].bits());
        let absent = Candidates::from_bits(Candidates::full(dims).bits() & !present);
        for &c in &pair.b_only {
            out[c] = Candidates::from_bits(out[c].bits() | absent.bits());
        }
    }
    out
}

/// `(c, n)` with `n` a current candidate of `c` that a locked pair rules out.
pub fn locked_candidate_removals(state: &GridState, geom: &Geometry) -> Vec<(Cell, Digit)> {
    let dims = state.dims();
    let evidence = locked_candidate_evidence(state, geom);
    let mut out = Vec::new();
    for c in 0..dims.num_cells() {
        let hit = Candidates::from_bits(evidence[c].bits() & state.candidates[c].bits());
        out.extend(hit.iter().map(|n| (dims.cell(c), n)));
    }
    out
}

/// Applies one transition to `state`, which is the state at step `step - 1`.
pub fn step(state: &GridState, strategies: StrategySet, geom: &Geometry, step: usize) -> StepOutcome {
    let dims = state.dims();
    let cells = dims.num_cells();
    let prev_g = &state.candidates;

    let hidden = if strategies.hidden_single {
        hidden_single_evidence(state, geom)
    } else {
        vec![Candidates::EMPTY; cells]
    };

    let mut placed = state.placed.clone();
    let mut deductions = StepDeductions::default();
    for c in 0..cells {
        let mut derived = Candidates::EMPTY;
        if state.placed[c] != 0 {
            derived.insert(state.placed[c]);
        }
        let naked = if strategies.naked_single {
            prev_g[c].as_single()
        } else {
            None
        };
        if let Some(n) = naked {
            derived.insert(n);
        }
        derived = Candidates::from_bits(derived.bits() | hidden[c].bits());
        match derived.len() {
            0 => {}
            1 => {
                let d = derived.as_single().unwrap();
                if state.placed[c] == 0 {
                    placed[c] = d;
                    let rule = if naked == Some(d) {
                        PlacementRule::NakedSingle
                    } else {
                        PlacementRule::HiddenSingle
                    };
                    deductions.placements.push(Placement {
                        cell: dims.cell(c),
                        digit: d,
                        rule,
                    });
                }
            }
            _ => {
                return StepOutcome::Contradiction(Contradiction {
                    step,
                    kind: ContradictionKind::ConflictingPlacement {
                        cell: dims.cell(c),
                        digits: derived.iter().collect(),
                    },
                });
            }
        }
    }

    let locked = if strategies.locked_candidate {
        locked_candidate_evidence(state, geom)
    } else {
        vec![Candidates::EMPTY; cells]
    };

    let mut candidates = prev_g.clone();
    for c in 0..cells {
        let mut forced = Candidates::EMPTY;
        if placed[c] != 0 {
            forced = Candidates::from_bits(Candidates::full(dims).bits() & !(1u64 << placed[c]));
        }
        for &p in geom.peers(c) {
            if placed[p] != 0 {
                forced.insert(placed[p]);
            }
        }
        let before = prev_g[c];
        let forced_hit = before.bits() & forced.bits();
        let locked_hit = before.bits() & locked[c].bits() & !forced_hit;
        for n in Candidates::from_bits(forced_hit).iter() {
            deductions.removals.push(Removal {
                cell: dims.cell(c),
                digit: n,
                cause: RemovalCause::Forced,
            });
        }
        for n in Candidates::from_bits(locked_hit).iter() {
            deductions.removals.push(Removal {
                cell: dims.cell(c),
                digit: n,
                cause: RemovalCause::LockedCandidate,
            });
        }
        candidates[c] = Candidates::from_bits(before.bits() & !forced_hit & !locked_hit);
        if candidates[c].is_empty() {
            return StepOutcome::Contradiction(Contradiction {
                step,
                kind: ContradictionKind::NoCandidates { cell: dims.cell(c) },
            });
        }
    }

    let stable = candidates == *prev_g;
    let next = GridState::from_parts(dims, placed, candidates);
    if stable {
        StepOutcome::Fixpoint {
            state: next,
            deductions,
        }
    } else {
        StepOutcome::Changed {
            state: next,
            deductions,
        }
    }
}

fn initial_contradiction(err: GridError) -> Contradiction {
    let kind = match err {
        GridError::DuplicateClue { digit, first, second } => {
            ContradictionKind::DuplicateClue { digit, first, second }
        }
        GridError::NoCandidates(cell) => ContradictionKind::NoCandidates { cell },
        other => panic!("unexpected initial-state error: {other}"),
    };
    Contradiction { step: 0, kind }
}

/// Runs transitions from the initial state of `assignment` until the grid
/// completes, the candidates stop changing, or a contradiction appears.
pub fn closure(assignment: &ClueAssignment, strategies: StrategySet, geom: &Geometry) -> SolveResult {
    run(assignment, strategies, geom, None)
}

/// [`closure`] that also records every state and deduction.
pub fn closure_with_trace(
    assignment: &ClueAssignment,
    strategies: StrategySet,
    geom: &Geometry,
) -> (SolveResult, Trace) {
    let mut trace = Trace::default();
    let result = run(assignment, strategies, geom, Some(&mut trace));
    (result, trace)
}

fn run(
    assignment: &ClueAssignment,
    strategies: StrategySet,
    geom: &Geometry,
    mut trace: Option<&mut Trace>,
) -> SolveResult {
    let mut state = match make_initial_state(assignment, geom) {
        Ok(s) => s,
        Err(e) => return SolveResult::Contradiction(initial_contradiction(e)),
    };
    if let Some(t) = trace.as_deref_mut() {
        t.states.push(state.clone());
    }
    if state.is_complete() {
        return finish_solved(state, 0, geom);
    }
    let bound = geom.dims().step_bound();
    for k in 1..=bound {
        let (next, deductions, stable) = match step(&state, strategies, geom, k) {
            StepOutcome::Contradiction(c) => return SolveResult::Contradiction(c),
            StepOutcome::Changed { state, deductions } => (state, deductions, false),
            StepOutcome::Fixpoint { state, deductions } => (state, deductions, true),
        };
        debug_assert!(next.candidate_count() <= state.candidate_count());
        if let Some(t) = trace.as_deref_mut() {
            t.states.push(next.clone());
            t.deductions.push(deductions);
        }
        state = next;
        if state.is_complete() {
            return finish_solved(state, k, geom);
        }
        if stable {
            return SolveResult::Stuck { state, steps: k };
        }
    }
    unreachable!("candidate sets changed for more than {} steps", bound - 1)
}

fn finish_solved(state: GridState, steps: usize, geom: &Geometry) -> SolveResult {
    assert!(
        validate_state(&state, geom).is_ok() && is_valid_solution(state.placements(), geom),
        "a completed state must be a Sudoku solution"
    );
    SolveResult::Solved {
        solution: state,
        steps,
    }
}

/// Whether repeated strategy application completes the grid.
pub fn is_strategy_solvable(assignment: &ClueAssignment, strategies: StrategySet, geom: &Geometry) -> bool {
    closure(assignment, strategies, geom).is_solved()
}
