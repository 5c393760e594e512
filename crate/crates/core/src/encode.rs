//! CNF encoding of the clue problem: given clue positions, a strategy set
//! and a maximum step `K`, the formula is satisfiable iff some digits for the
//! positions start a strategy run that never stalls on an incomplete grid
//! within `K` steps.
//!
//! Variables per step `k`: a one-hot placement `x[c][v][k]` (`v = 0` for an
//! empty cell) and a candidate flag `y[c][n][k]`. Every placement and removal
//! is tied by a biconditional to the disjunction of its justifying
//! conditions, each condition being its own auxiliary ("justification")
//! variable registered in [`VarMap`].

use std::io::{self, Write};
use std::ops::Range;

use thiserror::Error;

use crate::cnf::{CnfFormula, Lit, Model};
use crate::grid::{Candidates, ClueAssignment, ClueMask, Dims, Digit, Geometry, GridState, StrategySet};

/// Maximum step used unless configured otherwise.
pub const DEFAULT_MAX_STEP: usize = 30;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EncodeError {
    #[error("maximum step {max_step} outside 1..={bound}")]
    StepOutOfRange { max_step: usize, bound: usize },
    #[error("clue threshold {theta} exceeds the cell count {cells}")]
    ThetaOutOfRange { theta: usize, cells: usize },
    #[error("fixed digit at cell index {0} is not a clue position")]
    FixedDigitOutsideMask(usize),
    #[error("board size of the mask or fixed digits does not match the geometry")]
    DimsMismatch,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecodeError {
    #[error("cell index {cell} at step {step} has {count} true placement literals")]
    OneHot { cell: usize, step: usize, count: usize },
    #[error("model has {model} variables, formula needs {needed}")]
    ModelTooSmall { model: u32, needed: u32 },
}

#[derive(Debug, Clone)]
pub struct EncodeOptions {
    pub max_step: usize,
    pub strategies: StrategySet,
    /// Alias clue-cell variables of later steps to step 0.
    pub clue_reduction: bool,
    /// Consumed by the search driver: solve first assuming a complete grid
    /// at the last step.
    pub completion_probe: bool,
    /// Min-clue mode: the clue count is bounded by `theta` instead of being
    /// fixed by the mask.
    pub theta: Option<usize>,
    /// Pins the step-0 digit of every listed clue cell.
    pub fixed_digits: Option<ClueAssignment>,
}

impl Default for EncodeOptions {
    fn default() -> Self {
        EncodeOptions {
            max_step: DEFAULT_MAX_STEP,
            strategies: StrategySet::ALL,
            clue_reduction: true,
            completion_probe: true,
            theta: None,
            fixed_digits: None,
        }
    }
}

/// Which condition a justification variable stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum JustKind {
    /// The digit was already placed in the previous step (alias of that
    /// placement literal).
    KeepPlacement,
    /// Every other digit was ruled out in the previous step.
    NakedSingle,
    /// No other cell of the group (`aux`) had the digit as a candidate.
    HiddenSingle,
    /// The candidate was already ruled out (alias of the negated flag).
    KeepRemoval,
    /// A different digit is placed in the cell itself.
    OwnPlacement,
    /// A peer in group `aux` holds the digit.
    PeerPlacement,
    /// No cell of `A∖B` of locked pair `aux` had the digit; shared by all
    /// cells of `B∖A`, so `cell` is unused.
    LockedCandidate,
}

/// One registered justification.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Justification {
    pub kind: JustKind,
    pub step: u16,
    pub cell: u16,
    pub digit: u8,
    pub aux: u16,
    pub lit: Lit,
}

/// Variable ids of an encoding.
#[derive(Debug, Clone)]
pub struct VarMap {
    dims: Dims,
    max_step: usize,
    next: u32,
    x: Vec<Lit>,
    y: Vec<Lit>,
    x_distinct: usize,
    y_distinct: usize,
    reduced: Option<ClueMask>,
    clue_cells: Option<ClueMask>,
    justifications: Vec<Justification>,
    u: Vec<Lit>,
    counter: Vec<Lit>,
    stability: Vec<Lit>,
    stable: Vec<Lit>,
}

impl VarMap {
    /// Dense ids for every placement and candidate literal, step by step.
    pub fn allocate(dims: Dims, max_step: usize) -> Self {
        Self::build(dims, max_step, None)
    }

    fn build(dims: Dims, max_step: usize, alias: Option<&ClueMask>) -> Self {
        let cells = dims.num_cells();
        let side = dims.side();
        let steps = max_step + 1;
        let mut next = 0u32;
        let mut x = vec![0; steps * cells * (side + 1)];
        let mut y = vec![0; steps * cells * side];
        let (mut x_distinct, mut y_distinct) = (0, 0);
        for k in 0..steps {
            for c in 0..cells {
                let aliased = k > 0 && alias.is_some_and(|m| m.contains_index(c));
                for v in 0..=side {
                    let i = (k * cells + c) * (side + 1) + v;
                    x[i] = if aliased {
                        x[c * (side + 1) + v]
                    } else {
                        next += 1;
                        x_distinct += 1;
                        next as Lit
                    };
                }
            }
            for c in 0..cells {
                let aliased = k > 0 && alias.is_some_and(|m| m.contains_index(c));
                for n in 0..side {
                    let i = (k * cells + c) * side + n;
                    y[i] = if aliased {
                        y[c * side + n]
                    } else {
                        next += 1;
                        y_distinct += 1;
                        next as Lit
                    };
                }
            }
        }
        VarMap {
            dims,
            max_step,
            next,
            x,
            y,
            x_distinct,
            y_distinct,
            reduced: alias.cloned(),
            clue_cells: None,
            justifications: Vec::new(),
            u: Vec::new(),
            counter: Vec::new(),
            stability: Vec::new(),
            stable: Vec::new(),
        }
    }

    fn fresh(&mut self) -> Lit {
        self.next += 1;
        self.next as Lit
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn max_step(&self) -> usize {
        self.max_step
    }

    pub fn num_vars(&self) -> u32 {
        self.next
    }

    /// Literal for "cell holds `value` at `step`" (`value = 0`: empty).
    pub fn x(&self, cell: usize, value: Digit, step: usize) -> Lit {
        let side = self.dims.side();
        self.x[(step * self.dims.num_cells() + cell) * (side + 1) + value as usize]
    }

    /// Literal for "`digit` is a candidate of the cell at `step`".
    pub fn y(&self, cell: usize, digit: Digit, step: usize) -> Lit {
        let side = self.dims.side();
        self.y[(step * self.dims.num_cells() + cell) * side + digit as usize - 1]
    }

    /// Number of distinct placement literals.
    pub fn x_count(&self) -> usize {
        self.x_distinct
    }

    /// Number of distinct candidate literals.
    pub fn y_count(&self) -> usize {
        self.y_distinct
    }

    /// Clue mask whose later-step variables alias step 0, if reduced.
    pub fn reduced_mask(&self) -> Option<&ClueMask> {
        self.reduced.as_ref()
    }

    pub fn justifications(&self) -> &[Justification] {
        &self.justifications
    }

    pub fn count_justifications(&self, kind: JustKind, step: usize) -> usize {
        self.justifications
            .iter()
            .filter(|j| j.kind == kind && j.step as usize == step)
            .count()
    }

    /// Clue-indicator literal of a cell (min-clue mode only).
    pub fn u(&self, cell: usize) -> Option<Lit> {
        self.u.get(cell).copied().filter(|&l| l != 0)
    }

    /// Literal true iff no candidate changed between `step - 1` and `step`.
    pub fn stable(&self, step: usize) -> Lit {
        self.stable[step - 1]
    }

    /// Number of emitted progress filters.
    pub fn filter_count(&self) -> usize {
        self.stable.len()
    }

    /// Assumptions stating that every non-clue cell is filled at `step`.
    pub fn completion_assumptions(&self, step: usize) -> Vec<Lit> {
        (0..self.dims.num_cells())
            .filter(|&c| !self.clue_cells.as_ref().is_some_and(|m| m.contains_index(c)))
            .map(|c| -self.x(c, 0, step))
            .collect()
    }

    /// Sidecar map: `kind row col digit step id` per line for the
    /// placement (`x`, digit 0 = empty), candidate (`y`) and clue-indicator
    /// (`u`) literals.
    pub fn write_sidecar<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "c kind row col digit step id")?;
        let side = self.dims.side() as Digit;
        for k in 0..=self.max_step {
            for c in 0..self.dims.num_cells() {
                let cell = self.dims.cell(c);
                for v in 0..=side {
                    writeln!(out, "x {} {} {v} {k} {}", cell.row, cell.col, self.x(c, v, k))?;
                }
                for n in 1..=side {
                    writeln!(out, "y {} {} {n} {k} {}", cell.row, cell.col, self.y(c, n, k))?;
                }
            }
        }
        for c in 0..self.dims.num_cells() {
            if let Some(u) = self.u(c) {
                let cell = self.dims.cell(c);
                writeln!(out, "u {} {} 0 0 {u}", cell.row, cell.col)?;
            }
        }
        Ok(())
    }
}

/// Re-allocates a fresh map so that clue-cell literals of steps `≥ 1` alias
/// their step-0 ids. Ids stay dense.
pub fn apply_clue_reduction(map: VarMap, mask: &ClueMask) -> VarMap {
    assert!(
        map.justifications.is_empty() && map.u.is_empty() && map.stable.is_empty(),
        "clue reduction applies to a freshly allocated map"
    );
    VarMap::build(map.dims, map.max_step, Some(mask))
}

/// Incremental builder; each `encode_*` method appends clauses and returns
/// the index range it produced.
pub struct Encoder<'g> {
    geom: &'g Geometry,
    mask: ClueMask,
    options: EncodeOptions,
    reduce: bool,
    formula: CnfFormula,
    map: VarMap,
    locked_by_cell: Vec<Vec<usize>>,
}

impl<'g> Encoder<'g> {
    pub fn new(mask: &ClueMask, options: EncodeOptions, geom: &'g Geometry) -> Result<Self, EncodeError> {
        let dims = geom.dims();
        if mask.dims() != dims {
            return Err(EncodeError::DimsMismatch);
        }
        let bound = dims.step_bound();
        if options.max_step == 0 || options.max_step > bound {
            return Err(EncodeError::StepOutOfRange {
                max_step: options.max_step,
                bound,
            });
        }
        if let Some(theta) = options.theta {
            if theta > dims.num_cells() {
                return Err(EncodeError::ThetaOutOfRange {
                    theta,
                    cells: dims.num_cells(),
                });
            }
        }
        if let Some(fixed) = &options.fixed_digits {
            if fixed.dims() != dims {
                return Err(EncodeError::DimsMismatch);
            }
            if let Some((c, _)) = fixed
                .digits()
                .iter()
                .enumerate()
                .find(|(c, &d)| d != 0 && !mask.contains_index(*c))
            {
                return Err(EncodeError::FixedDigitOutsideMask(c));
            }
        }
        // In min-clue mode the clue cells are not known in advance.
        let reduce = options.clue_reduction && options.theta.is_none();
        let mut map = VarMap::allocate(dims, options.max_step);
        if reduce {
            map = apply_clue_reduction(map, mask);
        }
        if options.theta.is_none() {
            map.clue_cells = Some(mask.clone());
        }
        let mut formula = CnfFormula::new();
        formula.reserve_vars(map.num_vars());
        let mut locked_by_cell = vec![Vec::new(); dims.num_cells()];
        for (p, pair) in geom.locked_pairs().iter().enumerate() {
            for &c in &pair.b_only {
                locked_by_cell[c].push(p);
            }
        }
        Ok(Encoder {
            geom,
            mask: mask.clone(),
            options,
            reduce,
            formula,
            map,
            locked_by_cell,
        })
    }

    fn fresh(&mut self) -> Lit {
        let v = self.map.fresh();
        self.formula.reserve_vars(self.map.num_vars());
        v
    }

    fn register(&mut self, kind: JustKind, step: usize, cell: usize, digit: Digit, aux: usize, lit: Lit) {
        self.map.justifications.push(Justification {
            kind,
            step: step as u16,
            cell: cell as u16,
            digit,
            aux: aux as u16,
            lit,
        });
    }

    /// A fresh literal `z ↔ ⋀ lits`.
    fn define_and(&mut self, lits: &[Lit]) -> Lit {
        let z = self.fresh();
        let mut big = Vec::with_capacity(lits.len() + 1);
        big.push(z);
        for &l in lits {
            self.formula.add_clause(&[-z, l]);
            big.push(-l);
        }
        self.formula.add_clause(&big);
        z
    }

    /// A fresh literal `z ↔ ⋁ lits`.
    fn define_or(&mut self, lits: &[Lit]) -> Lit {
        let z = self.fresh();
        let mut big = Vec::with_capacity(lits.len() + 1);
        big.push(-z);
        for &l in lits {
            self.formula.add_clause(&[z, -l]);
            big.push(l);
        }
        self.formula.add_clause(&big);
        z
    }

    /// `target ↔ ⋁ justs`.
    fn tie(&mut self, target: Lit, justs: &[Lit]) {
        let mut big = Vec::with_capacity(justs.len() + 1);
        big.push(-target);
        big.extend_from_slice(justs);
        self.formula.add_clause(&big);
        for &z in justs {
            self.formula.add_clause(&[-z, target]);
        }
    }

    fn is_skipped(&self, cell: usize, step: usize) -> bool {
        self.reduce && step > 0 && self.mask.contains_index(cell)
    }

    fn side(&self) -> Digit {
        self.geom.dims().max_digit()
    }

    /// Clue cells must hold a digit at step 0 and all other cells must be
    /// empty; fixed digits are pinned with unit clauses.
    pub fn encode_initial(&mut self) -> Range<usize> {
        let start = self.formula.num_clauses();
        for c in 0..self.geom.dims().num_cells() {
            let empty = self.map.x(c, 0, 0);
            if self.mask.contains_index(c) {
                self.formula.add_clause(&[-empty]);
            } else {
                self.formula.add_clause(&[empty]);
            }
        }
        self.encode_fixed_digits();
        start..self.formula.num_clauses()
    }

    fn encode_fixed_digits(&mut self) {
        if let Some(fixed) = self.options.fixed_digits.clone() {
            for (c, &d) in fixed.digits().iter().enumerate() {
                if d != 0 {
                    let lit = self.map.x(c, d, 0);
                    self.formula.add_clause(&[lit]);
                }
            }
        }
    }

    /// Placement biconditionals for step `k ≥ 1`.
    pub fn encode_placement_rules(&mut self, k: usize) -> Range<usize> {
        assert!(k >= 1, "placement rules start at step 1");
        let start = self.formula.num_clauses();
        let strategies = self.options.strategies;
        let geom = self.geom;
        for c in 0..geom.dims().num_cells() {
            if self.is_skipped(c, k) {
                continue;
            }
            for n in 1..=self.side() {
                let mut justs = Vec::with_capacity(5);
                let keep = self.map.x(c, n, k - 1);
                self.register(JustKind::KeepPlacement, k, c, n, 0, keep);
                justs.push(keep);
                if strategies.naked_single {
                    let others: Vec<Lit> = (1..=self.side())
                        .filter(|&m| m != n)
                        .map(|m| -self.map.y(c, m, k - 1))
                        .collect();
                    let z = self.define_and(&others);
                    self.register(JustKind::NakedSingle, k, c, n, 0, z);
                    justs.push(z);
                }
                if strategies.hidden_single {
                    for g in geom.cell_groups(c) {
                        let others: Vec<Lit> = geom
                            .group_cells(g)
                            .iter()
                            .filter(|&&o| o != c)
                            .map(|&o| -self.map.y(o, n, k - 1))
                            .collect();
                        let z = self.define_and(&others);
                        self.register(JustKind::HiddenSingle, k, c, n, g, z);
                        justs.push(z);
                    }
                }
                let target = self.map.x(c, n, k);
                self.tie(target, &justs);
            }
        }
        start..self.formula.num_clauses()
    }

    /// Removal biconditionals for step `k`. At step 0 only the removals
    /// forced by placements can justify a missing candidate.
    pub fn encode_removal_rules(&mut self, k: usize) -> Range<usize> {
        let start = self.formula.num_clauses();
        let geom = self.geom;
        let dims = geom.dims();
        let side = self.side();

        let mut locked: Vec<Vec<Lit>> = Vec::new();
        if k >= 1 && self.options.strategies.locked_candidate {
            for (p, pair) in geom.locked_pairs().iter().enumerate() {
                let mut per_digit = Vec::with_capacity(side as usize);
                for n in 1..=side {
                    let absent: Vec<Lit> = pair.a_only.iter().map(|&o| -self.map.y(o, n, k - 1)).collect();
                    let z = self.define_and(&absent);
                    self.register(JustKind::LockedCandidate, k, u16::MAX as usize, n, p, z);
                    per_digit.push(z);
                }
                locked.push(per_digit);
            }
        }

        for c in 0..dims.num_cells() {
            if self.is_skipped(c, k) {
                continue;
            }
            for n in 1..=side {
                let mut justs = Vec::with_capacity(16);
                if k >= 1 {
                    let keep = -self.map.y(c, n, k - 1);
                    self.register(JustKind::KeepRemoval, k, c, n, 0, keep);
                    justs.push(keep);
                }
                // A different digit placed here: not empty and not n.
                let own = self.define_and(&[-self.map.x(c, 0, k), -self.map.x(c, n, k)]);
                self.register(JustKind::OwnPlacement, k, c, n, 0, own);
                justs.push(own);
                for g in geom.cell_groups(c) {
                    let holders: Vec<Lit> = geom
                        .group_cells(g)
                        .iter()
                        .filter(|&&o| o != c)
                        .map(|&o| self.map.x(o, n, k))
                        .collect();
                    let z = self.define_or(&holders);
                    self.register(JustKind::PeerPlacement, k, c, n, g, z);
                    justs.push(z);
                }
                if !locked.is_empty() {
                    for &p in &self.locked_by_cell[c] {
                        justs.push(locked[p][n as usize - 1]);
                    }
                }
                let target = -self.map.y(c, n, k);
                self.tie(target, &justs);
            }
        }
        start..self.formula.num_clauses()
    }

    /// Exactly one placement value per cell, and at least one candidate.
    pub fn encode_state_conditions(&mut self, k: usize) -> Range<usize> {
        let start = self.formula.num_clauses();
        let side = self.side();
        for c in 0..self.geom.dims().num_cells() {
            if self.is_skipped(c, k) {
                continue;
            }
            let values: Vec<Lit> = (0..=side).map(|v| self.map.x(c, v, k)).collect();
            self.formula.add_clause(&values);
            for i in 0..values.len() {
                for j in i + 1..values.len() {
                    self.formula.add_clause(&[-values[i], -values[j]]);
                }
            }
            let cands: Vec<Lit> = (1..=side).map(|n| self.map.y(c, n, k)).collect();
            self.formula.add_clause(&cands);
        }
        start..self.formula.num_clauses()
    }

    /// If no candidate changed from `k - 1` to `k`, every non-clue cell
    /// must be filled at `k`.
    pub fn encode_progress_filter(&mut self, k: usize) -> Range<usize> {
        assert!(k >= 1, "progress filters start at step 1");
        let start = self.formula.num_clauses();
        let side = self.side();
        let cells = self.geom.dims().num_cells();
        let watched: Vec<usize> = (0..cells).filter(|&c| !self.is_skipped(c, k)).collect();
        let mut same = Vec::with_capacity(watched.len() * side as usize);
        for &c in &watched {
            for n in 1..=side {
                let a = self.map.y(c, n, k - 1);
                let b = self.map.y(c, n, k);
                let d = self.fresh();
                self.formula.add_clause(&[-d, -a, b]);
                self.formula.add_clause(&[-d, a, -b]);
                self.formula.add_clause(&[d, a, b]);
                self.formula.add_clause(&[d, -a, -b]);
                self.map.stability.push(d);
                same.push(d);
            }
        }
        let stable = self.define_and(&same);
        self.map.stable.push(stable);
        let clue_cells = self.map.clue_cells.clone();
        for &c in &watched {
            if clue_cells.as_ref().is_some_and(|m| m.contains_index(c)) {
                continue;
            }
            let empty = self.map.x(c, 0, k);
            self.formula.add_clause(&[-stable, -empty]);
        }
        start..self.formula.num_clauses()
    }

    /// Min-clue mode: replaces the fixed clue positions with indicator
    /// literals `u ↔ x⁰ ≠ 0` over the mask cells and bounds their sum by
    /// `theta` with a sequential counter. Cells outside the mask stay empty.
    pub fn encode_cardinality(&mut self, theta: usize) -> Result<Range<usize>, EncodeError> {
        let cells = self.geom.dims().num_cells();
        if theta > cells {
            return Err(EncodeError::ThetaOutOfRange { theta, cells });
        }
        let start = self.formula.num_clauses();
        self.map.u = vec![0; cells];
        let mut us = Vec::new();
        for c in 0..cells {
            let empty = self.map.x(c, 0, 0);
            if !self.mask.contains_index(c) {
                self.formula.add_clause(&[empty]);
                continue;
            }
            let u = self.fresh();
            self.formula.add_clause(&[-u, -empty]);
            self.formula.add_clause(&[u, empty]);
            self.map.u[c] = u;
            us.push(u);
        }
        self.encode_at_most(&us, theta);
        self.encode_fixed_digits();
        Ok(start..self.formula.num_clauses())
    }

    /// Sequential counter for `Σ lits ≤ bound`.
    fn encode_at_most(&mut self, lits: &[Lit], bound: usize) {
        let n = lits.len();
        if bound >= n {
            return;
        }
        if bound == 0 {
            for &l in lits {
                self.formula.add_clause(&[-l]);
            }
            return;
        }
        // s[i][j]: at least j + 1 of the first i + 1 literals are true.
        let mut prev: Vec<Lit> = Vec::new();
        for (i, &x) in lits.iter().enumerate().take(n - 1) {
            let row: Vec<Lit> = (0..bound).map(|_| self.fresh()).collect();
            self.map.counter.extend_from_slice(&row);
            self.formula.add_clause(&[-x, row[0]]);
            if i == 0 {
                for &s in &row[1..] {
                    self.formula.add_clause(&[-s]);
                }
            } else {
                for j in 0..bound {
                    self.formula.add_clause(&[-prev[j], row[j]]);
                    if j > 0 {
                        self.formula.add_clause(&[-x, -prev[j - 1], row[j]]);
                    }
                }
                self.formula.add_clause(&[-x, -prev[bound - 1]]);
            }
            prev = row;
        }
        self.formula.add_clause(&[-lits[n - 1], -prev[bound - 1]]);
    }

    pub fn formula(&self) -> &CnfFormula {
        &self.formula
    }

    pub fn var_map(&self) -> &VarMap {
        &self.map
    }

    pub fn finish(self) -> (CnfFormula, VarMap) {
        (self.formula, self.map)
    }
}

/// Encodes a full instance up to `options.max_step`.
pub fn encode_instance(
    mask: &ClueMask,
    options: &EncodeOptions,
    geom: &Geometry,
) -> Result<(CnfFormula, VarMap), EncodeError> {
    let max_step = options.max_step;
    let theta = options.theta;
    let mut enc = Encoder::new(mask, options.clone(), geom)?;
    match theta {
        Some(t) => {
            enc.encode_cardinality(t)?;
        }
        None => {
            enc.encode_initial();
        }
    }
    for k in 0..=max_step {
        enc.encode_state_conditions(k);
        enc.encode_removal_rules(k);
        if k >= 1 {
            enc.encode_placement_rules(k);
            enc.encode_progress_filter(k);
        }
    }
    Ok(enc.finish())
}

/// Clue digits and per-step states read off a model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodedRun {
    pub assignment: ClueAssignment,
    /// States at steps `0..=K`.
    pub states: Vec<GridState>,
}

impl DecodedRun {
    pub fn final_state(&self) -> &GridState {
        self.states.last().expect("at least the initial state")
    }
}

pub fn decode_model(model: &Model, map: &VarMap) -> Result<DecodedRun, DecodeError> {
    if model.num_vars() < map.num_vars() {
        return Err(DecodeError::ModelTooSmall {
            model: model.num_vars(),
            needed: map.num_vars(),
        });
    }
    let dims = map.dims();
    let side = dims.max_digit();
    let mut states = Vec::with_capacity(map.max_step() + 1);
    for k in 0..=map.max_step() {
        let mut placed = Vec::with_capacity(dims.num_cells());
        let mut cands = Vec::with_capacity(dims.num_cells());
        for c in 0..dims.num_cells() {
            let values: Vec<Digit> = (0..=side).filter(|&v| model.lit(map.x(c, v, k))).collect();
            if values.len() != 1 {
                return Err(DecodeError::OneHot {
                    cell: c,
                    step: k,
                    count: values.len(),
                });
            }
            placed.push(values[0]);
            let mut set = Candidates::EMPTY;
            for n in 1..=side {
                if model.lit(map.y(c, n, k)) {
                    set.insert(n);
                }
            }
            cands.push(set);
        }
        states.push(GridState::from_parts(dims, placed, cands));
    }
    let assignment = ClueAssignment::from_digits(dims, states[0].placements().to_vec())
        .expect("decoded digits are in range");
    Ok(DecodedRun { assignment, states })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts(max_step: usize, reduce: bool) -> EncodeOptions {
        EncodeOptions {
            max_step,
            clue_reduction: reduce,
            ..EncodeOptions::default()
        }
    }

    #[test]
    fn literal_counts_without_reduction() {
        let geom = Geometry::new(Dims::standard());
        let mask = ClueMask::from_indices(Dims::standard(), 0..17);
        let map = Encoder::new(&mask, opts(30, false), &geom).unwrap().finish().1;
        assert_eq!(map.x_count(), 25_110);
        assert_eq!(map.y_count(), 22_599);

        let geom = Geometry::new(Dims::small());
        let map = Encoder::new(&ClueMask::empty(Dims::small()), opts(5, false), &geom)
            .unwrap()
            .finish()
            .1;
        assert_eq!(map.x_count(), 480);
    }

    #[test]
    fn literal_counts_with_reduction() {
        let geom = Geometry::new(Dims::standard());
        let mask = ClueMask::from_indices(Dims::standard(), (0..81).step_by(5));
        let c = mask.len();
        assert_eq!(c, 17);
        let map = Encoder::new(&mask, opts(30, true), &geom).unwrap().finish().1;
        assert_eq!(map.y_count(), 81 * 9 + (81 - c) * 9 * 30);
        assert_eq!(22_599 - map.y_count(), 17 * 9 * 30);
        assert_eq!(map.x(0, 3, 7), map.x(0, 3, 0));
        assert_ne!(map.x(1, 3, 7), map.x(1, 3, 0));
    }

    #[test]
    fn initial_constraints() {
        let dims = Dims::standard();
        let geom = Geometry::new(dims);
        let mut enc = Encoder::new(&ClueMask::full(dims), opts(1, true), &geom).unwrap();
        let r = enc.encode_initial();
        assert_eq!(r.len(), 81);
        let f = enc.formula();
        assert!(r.clone().all(|i| f.clause(i).len() == 1 && f.clause(i)[0] < 0));

        let mut enc = Encoder::new(&ClueMask::empty(dims), opts(1, true), &geom).unwrap();
        let r = enc.encode_initial();
        assert!(r.clone().all(|i| enc.formula().clause(i)[0] > 0));

        let mut fixed = ClueAssignment::empty(dims);
        fixed.set(crate::grid::Cell::new(0, 0), 4).unwrap();
        let mask = fixed.mask();
        let options = EncodeOptions {
            fixed_digits: Some(fixed),
            ..opts(1, true)
        };
        let mut enc = Encoder::new(&mask, options, &geom).unwrap();
        assert_eq!(enc.encode_initial().len(), 82);
    }

    #[test]
    fn fixed_digits_must_lie_in_mask() {
        let dims = Dims::small();
        let geom = Geometry::new(dims);
        let fixed = ClueAssignment::from_digits(dims, {
            let mut d = vec![0; 16];
            d[5] = 2;
            d
        })
        .unwrap();
        let options = EncodeOptions {
            fixed_digits: Some(fixed),
            ..opts(3, true)
        };
        assert_eq!(
            Encoder::new(&ClueMask::empty(dims), options, &geom).err(),
            Some(EncodeError::FixedDigitOutsideMask(5))
        );
    }

    #[test]
    fn option_ranges() {
        let geom = Geometry::new(Dims::small());
        let mask = ClueMask::empty(Dims::small());
        assert!(Encoder::new(&mask, opts(0, true), &geom).is_err());
        assert!(Encoder::new(&mask, opts(50, true), &geom).is_err());
        assert!(Encoder::new(&mask, opts(49, true), &geom).is_ok());
        let options = EncodeOptions {
            theta: Some(17),
            ..opts(3, true)
        };
        assert!(Encoder::new(&mask, options, &geom).is_err());
    }

    #[test]
    fn justification_counts() {
        let dims = Dims::standard();
        let geom = Geometry::new(dims);
        let (_, map) = encode_instance(&ClueMask::empty(dims), &opts(2, true), &geom).unwrap();
        assert_eq!(map.count_justifications(JustKind::HiddenSingle, 1), 81 * 9 * 3);
        assert_eq!(map.count_justifications(JustKind::LockedCandidate, 1), 108 * 9);
        assert_eq!(map.count_justifications(JustKind::LockedCandidate, 0), 0);
        assert_eq!(map.count_justifications(JustKind::PeerPlacement, 0), 81 * 9 * 3);
        assert_eq!(map.count_justifications(JustKind::KeepRemoval, 0), 0);
        assert_eq!(map.filter_count(), 2);

        let options = EncodeOptions {
            strategies: StrategySet::NONE,
            ..opts(2, true)
        };
        let (_, map) = encode_instance(&ClueMask::empty(dims), &options, &geom).unwrap();
        assert_eq!(map.count_justifications(JustKind::NakedSingle, 1), 0);
        assert_eq!(map.count_justifications(JustKind::HiddenSingle, 1), 0);
        assert_eq!(map.count_justifications(JustKind::LockedCandidate, 1), 0);
        assert_eq!(map.count_justifications(JustKind::KeepPlacement, 1), 81 * 9);
    }

    #[test]
    fn state_condition_widths() {
        let geom = Geometry::new(Dims::standard());
        let mut enc = Encoder::new(&ClueMask::empty(Dims::standard()), opts(1, true), &geom).unwrap();
        let r = enc.encode_state_conditions(0);
        let f = enc.formula();
        assert_eq!(r.clone().filter(|&i| f.clause(i).len() == 9).count(), 81);

        let geom = Geometry::new(Dims::small());
        let mut enc = Encoder::new(&ClueMask::empty(Dims::small()), opts(1, true), &geom).unwrap();
        let r = enc.encode_state_conditions(0);
        let f = enc.formula();
        // Per cell: one 5-wide at-least-one, ten pairwise, one 4-wide.
        assert_eq!(r.len(), 16 * 12);
        assert_eq!(r.clone().filter(|&i| f.clause(i).len() == 4).count(), 16);
    }

    #[test]
    fn full_mask_filters_watch_nothing() {
        let dims = Dims::small();
        let geom = Geometry::new(dims);
        let mut enc = Encoder::new(&ClueMask::full(dims), opts(2, true), &geom).unwrap();
        let r = enc.encode_placement_rules(1);
        assert!(r.is_empty());
        let r = enc.encode_progress_filter(1);
        // Only the clause defining the empty conjunction.
        assert_eq!(r.len(), 1);
    }

    #[test]
    fn sidecar_lists_literals() {
        let dims = Dims::small();
        let geom = Geometry::new(dims);
        let (_, map) = encode_instance(&ClueMask::empty(dims), &opts(1, true), &geom).unwrap();
        let mut buf = Vec::new();
        map.write_sidecar(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 1 + 2 * 16 * 9);
        assert!(text.contains(&format!("x 0 0 0 0 {}", map.x(0, 0, 0))));
    }
}
