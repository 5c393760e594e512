//! Board geometry, clue masks and assignments, text formats, and the
//! normal-form grid state `(placements, candidates)`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// A digit value. `0` means "no digit"; clues and candidates are `1..=N`.
pub type Digit = u8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GridError {
    #[error("block order must be between 2 and 7, got {0}")]
    InvalidBlockOrder(usize),
    #[error("text formats support side length at most 9, board has side {0}")]
    UnsupportedTextSide(usize),
    #[error("expected {expected} symbols, found {found}")]
    SymbolCount { expected: usize, found: usize },
    #[error("bad symbol {symbol:?} at position {position}")]
    BadSymbol { symbol: char, position: usize },
    #[error("digit {digit} at position {position} exceeds the maximum {max}")]
    DigitOutOfRange { digit: u32, max: usize, position: usize },
    #[error("ambiguous or mixed grid format: {0}")]
    MixedFormat(String),
    #[error("cell {0} lies outside the board")]
    CellOutOfRange(Cell),
    #[error("digit {digit} appears at both {first} and {second}, which share a group")]
    DuplicateClue { digit: Digit, first: Cell, second: Cell },
    #[error("cell {0} has no candidate left in the initial state")]
    NoCandidates(Cell),
}

/// Board dimensions: block order `n` and side length `N = n²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dims {
    block: usize,
}

impl Dims {
    pub fn new(block: usize) -> Result<Self, GridError> {
        // Candidate sets are u64 bitsets indexed by digit, so N ≤ 63.
        if !(2..=7).contains(&block) {
            return Err(GridError::InvalidBlockOrder(block));
        }
        Ok(Dims { block })
    }

    /// The ordinary 9×9 board.
    pub fn standard() -> Self {
        Dims { block: 3 }
    }

    /// The 4×4 board.
    pub fn small() -> Self {
        Dims { block: 2 }
    }

    pub fn block(&self) -> usize {
        self.block
    }

    pub fn side(&self) -> usize {
        self.block * self.block
    }

    pub fn num_cells(&self) -> usize {
        self.side() * self.side()
    }

    pub fn max_digit(&self) -> Digit {
        self.side() as Digit
    }

    pub fn index(&self, cell: Cell) -> usize {
        cell.row * self.side() + cell.col
    }

    pub fn cell(&self, index: usize) -> Cell {
        Cell::new(index / self.side(), index % self.side())
    }

    pub fn contains(&self, cell: Cell) -> bool {
        cell.row < self.side() && cell.col < self.side()
    }

    pub fn block_of(&self, cell: Cell) -> usize {
        (cell.row / self.block) * self.block + cell.col / self.block
    }

    /// Upper bound on the number of transitions before candidates stabilize,
    /// plus one: candidate triples start at most at N³ and end at least at N²,
    /// and every non-stuttering transition removes one. 649 for 9×9.
    pub fn step_bound(&self) -> usize {
        let side = self.side();
        side * side * side - side * side + 1
    }

    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        (0..self.num_cells()).map(move |i| self.cell(i))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    pub row: usize,
    pub col: usize,
}

impl Cell {
    pub const fn new(row: usize, col: usize) -> Self {
        Cell { row, col }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row, self.col)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupKind {
    Row,
    Column,
    Block,
}

/// A row, column, or block together with its member cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Group {
    pub kind: GroupKind,
    pub index: usize,
    pub members: Vec<Cell>,
}

/// All rows, then all columns, then all blocks (row-major).
pub fn groups(dims: Dims) -> Vec<Group> {
    let side = dims.side();
    let b = dims.block();
    let mut out = Vec::with_capacity(3 * side);
    for r in 0..side {
        out.push(Group {
            kind: GroupKind::Row,
            index: r,
            members: (0..side).map(|c| Cell::new(r, c)).collect(),
        });
    }
    for c in 0..side {
        out.push(Group {
            kind: GroupKind::Column,
            index: c,
            members: (0..side).map(|r| Cell::new(r, c)).collect(),
        });
    }
    for blk in 0..side {
        let (r0, c0) = ((blk / b) * b, (blk % b) * b);
        out.push(Group {
            kind: GroupKind::Block,
            index: blk,
            members: (0..side)
                .map(|k| Cell::new(r0 + k / b, c0 + k % b))
                .collect(),
        });
    }
    out
}

/// All ordered pairs `(A, B)` of groups whose intersection has exactly `n`
/// cells, i.e. every line/block pair in both directions.
pub fn locked_pairs(dims: Dims) -> Vec<(Group, Group)> {
    let all = groups(dims);
    let mut out = Vec::new();
    for a in &all {
        for b in &all {
            if a != b && intersection_len(a, b) == dims.block() {
                out.push((a.clone(), b.clone()));
            }
        }
    }
    out
}

fn intersection_len(a: &Group, b: &Group) -> usize {
    a.members.iter().filter(|c| b.members.contains(c)).count()
}

/// A locked pair in index form: `a_only` is `A∖B` and `b_only` is `B∖A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LockedPair {
    pub a: usize,
    pub b: usize,
    pub a_only: Vec<usize>,
    pub b_only: Vec<usize>,
}

/// Precomputed index tables for one board size, shared by the engine and
/// the encoder.
#[derive(Debug, Clone)]
pub struct Geometry {
    dims: Dims,
    groups: Vec<Group>,
    group_cells: Vec<Vec<usize>>,
    cell_groups: Vec<[usize; 3]>,
    peers: Vec<Vec<usize>>,
    locked: Vec<LockedPair>,
}

impl Geometry {
    pub fn new(dims: Dims) -> Self {
        let groups = groups(dims);
        let group_cells: Vec<Vec<usize>> = groups
            .iter()
            .map(|g| g.members.iter().map(|&c| dims.index(c)).collect())
            .collect();
        let side = dims.side();
        let cell_groups = dims
            .cells()
            .map(|c| [c.row, side + c.col, 2 * side + dims.block_of(c)])
            .collect::<Vec<_>>();
        let peers = (0..dims.num_cells())
            .map(|i| {
                let mut p: Vec<usize> = cell_groups[i]
                    .iter()
                    .flat_map(|&g| group_cells[g].iter().copied())
                    .filter(|&j| j != i)
                    .collect();
                p.sort_unstable();
                p.dedup();
                p
            })
            .collect();
        let mut locked = Vec::new();
        for a in 0..groups.len() {
            for b in 0..groups.len() {
                if a == b {
                    continue;
                }
                let inter = group_cells[a]
                    .iter()
                    .filter(|c| group_cells[b].contains(c))
                    .count();
                if inter != dims.block() {
                    continue;
                }
                let a_only = group_cells[a]
                    .iter()
                    .copied()
                    .filter(|c| !group_cells[b].contains(c))
                    .collect();
                let b_only = group_cells[b]
                    .iter()
                    .copied()
                    .filter(|c| !group_cells[a].contains(c))
                    .collect();
                locked.push(LockedPair { a, b, a_only, b_only });
            }
        }
        Geometry {
            dims,
            groups,
            group_cells,
            cell_groups,
            peers,
            locked,
        }
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn groups(&self) -> &[Group] {
        &self.groups
    }

    pub fn group_cells(&self, group: usize) -> &[usize] {
        &self.group_cells[group]
    }

    pub fn num_groups(&self) -> usize {
        self.group_cells.len()
    }

    /// Row, column and block group indices of a cell.
    pub fn cell_groups(&self, cell: usize) -> [usize; 3] {
        self.cell_groups[cell]
    }

    pub fn peers(&self, cell: usize) -> &[usize] {
        &self.peers[cell]
    }

    pub fn locked_pairs(&self) -> &[LockedPair] {
        &self.locked
    }
}

/// Candidate digits of one cell as a bitset; bit `d` stands for digit `d`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Candidates(u64);

impl Candidates {
    pub const EMPTY: Candidates = Candidates(0);

    pub fn full(dims: Dims) -> Self {
        Candidates(((1u64 << dims.side()) - 1) << 1)
    }

    pub fn single(digit: Digit) -> Self {
        Candidates(1 << digit)
    }

    pub fn from_bits(bits: u64) -> Self {
        Candidates(bits & !1)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, digit: Digit) -> bool {
        self.0 >> digit & 1 == 1
    }

    pub fn insert(&mut self, digit: Digit) {
        self.0 |= 1 << digit;
    }

    pub fn remove(&mut self, digit: Digit) {
        self.0 &= !(1 << digit);
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// The only digit, if exactly one remains.
    pub fn as_single(self) -> Option<Digit> {
        (self.len() == 1).then(|| self.0.trailing_zeros() as Digit)
    }

    pub fn iter(self) -> impl Iterator<Item = Digit> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let d = bits.trailing_zeros();
            bits &= bits - 1;
            Some(d as Digit)
        })
    }
}

impl fmt::Debug for Candidates {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// The set of clue positions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ClueMask {
    dims: Dims,
    cells: Vec<bool>,
}

impl ClueMask {
    pub fn empty(dims: Dims) -> Self {
        ClueMask {
            dims,
            cells: vec![false; dims.num_cells()],
        }
    }

    pub fn full(dims: Dims) -> Self {
        ClueMask {
            dims,
            cells: vec![true; dims.num_cells()],
        }
    }

    pub fn from_cells<I: IntoIterator<Item = Cell>>(dims: Dims, cells: I) -> Result<Self, GridError> {
        let mut mask = ClueMask::empty(dims);
        for c in cells {
            if !dims.contains(c) {
                return Err(GridError::CellOutOfRange(c));
            }
            mask.cells[dims.index(c)] = true;
        }
        Ok(mask)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(dims: Dims, indices: I) -> Self {
        let mut mask = ClueMask::empty(dims);
        for i in indices {
            mask.cells[i] = true;
        }
        mask
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn contains(&self, cell: Cell) -> bool {
        self.cells[self.dims.index(cell)]
    }

    pub fn contains_index(&self, index: usize) -> bool {
        self.cells[index]
    }

    pub fn len(&self) -> usize {
        self.cells.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.cells.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i)
    }

    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        self.indices().map(|i| self.dims.cell(i))
    }

    /// Mask text: `1` for a clue position, `0` otherwise, row by row.
    pub fn to_text(&self) -> String {
        self.cells.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }
}

/// Digits assigned to clue positions. The implied mask is the set of
/// nonzero cells.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ClueAssignment {
    dims: Dims,
    digits: Vec<Digit>,
}

impl ClueAssignment {
    pub fn empty(dims: Dims) -> Self {
        ClueAssignment {
            dims,
            digits: vec![0; dims.num_cells()],
        }
    }

    /// Builds an assignment from a row-major digit vector (`0` = no clue).
    pub fn from_digits(dims: Dims, digits: Vec<Digit>) -> Result<Self, GridError> {
        if digits.len() != dims.num_cells() {
            return Err(GridError::SymbolCount {
                expected: dims.num_cells(),
                found: digits.len(),
            });
        }
        if let Some((position, &d)) = digits.iter().enumerate().find(|(_, &d)| d > dims.max_digit()) {
            return Err(GridError::DigitOutOfRange {
                digit: d as u32,
                max: dims.side(),
                position,
            });
        }
        Ok(ClueAssignment { dims, digits })
    }

    /// Restricts a full grid to the cells of a mask.
    pub fn from_grid_and_mask(grid: &[Digit], mask: &ClueMask) -> Result<Self, GridError> {
        let digits = grid
            .iter()
            .enumerate()
            .map(|(i, &d)| if mask.contains_index(i) { d } else { 0 })
            .collect();
        let out = ClueAssignment::from_digits(mask.dims(), digits)?;
        if out.len() != mask.len() {
            return Err(GridError::MixedFormat("mask covers an empty grid cell".into()));
        }
        Ok(out)
    }

    pub fn set(&mut self, cell: Cell, digit: Digit) -> Result<(), GridError> {
        if !self.dims.contains(cell) {
            return Err(GridError::CellOutOfRange(cell));
        }
        if digit > self.dims.max_digit() {
            return Err(GridError::DigitOutOfRange {
                digit: digit as u32,
                max: self.dims.side(),
                position: self.dims.index(cell),
            });
        }
        let i = self.dims.index(cell);
        self.digits[i] = digit;
        Ok(())
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn get(&self, cell: Cell) -> Digit {
        self.digits[self.dims.index(cell)]
    }

    pub fn digits(&self) -> &[Digit] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.iter().filter(|&&d| d != 0).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn mask(&self) -> ClueMask {
        ClueMask {
            dims: self.dims,
            cells: self.digits.iter().map(|&d| d != 0).collect(),
        }
    }

    pub fn clues(&self) -> impl Iterator<Item = (Cell, Digit)> + '_ {
        self.digits
            .iter()
            .enumerate()
            .filter(|(_, &d)| d != 0)
            .map(|(i, &d)| (self.dims.cell(i), d))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GridFormat {
    /// `N²` symbols, `0` or `.` for an empty cell.
    #[default]
    Compact,
    /// `N` runs of `N` digits joined by periods.
    Dotted,
}

impl FromStr for GridFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "compact" => Ok(GridFormat::Compact),
            "dotted" => Ok(GridFormat::Dotted),
            other => Err(format!("unknown grid format {other:?}")),
        }
    }
}

fn check_text_side(dims: Dims) -> Result<(), GridError> {
    if dims.side() > 9 {
        return Err(GridError::UnsupportedTextSide(dims.side()));
    }
    Ok(())
}

/// Detects the format of a grid string after whitespace is stripped.
pub fn detect_format(text: &str, dims: Dims) -> Result<GridFormat, GridError> {
    let symbols: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
    let side = dims.side();
    let cells = dims.num_cells();
    let dotted_len = cells + side - 1;
    if symbols.len() == cells {
        return Ok(GridFormat::Compact);
    }
    if symbols.len() == dotted_len {
        let separators_ok = symbols
            .iter()
            .enumerate()
            .all(|(i, &c)| (c == '.') == ((i + 1) % (side + 1) == 0));
        if separators_ok {
            return Ok(GridFormat::Dotted);
        }
        return Err(GridError::MixedFormat(
            "length matches the dotted layout but separators are misplaced".into(),
        ));
    }
    Err(GridError::SymbolCount {
        expected: cells,
        found: symbols.len(),
    })
}

/// Parses a grid in compact or dotted form; nonzero digits become clues.
pub fn parse_grid(text: &str, dims: Dims) -> Result<ClueAssignment, GridError> {
    check_text_side(dims)?;
    let format = detect_format(text, dims)?;
    let mut digits = Vec::with_capacity(dims.num_cells());
    let mut position = 0;
    for ch in text.chars().filter(|c| !c.is_whitespace()) {
        match (format, ch) {
            (GridFormat::Dotted, '.') => continue,
            (GridFormat::Compact, '.') => digits.push(0),
            (_, c) if c.is_ascii_digit() => {
                let d = c.to_digit(10).unwrap();
                if d as usize > dims.side() {
                    return Err(GridError::DigitOutOfRange {
                        digit: d,
                        max: dims.side(),
                        position,
                    });
                }
                digits.push(d as Digit);
            }
            (_, symbol) => return Err(GridError::BadSymbol { symbol, position }),
        }
        position += 1;
    }
    ClueAssignment::from_digits(dims, digits)
}

/// Writes a row-major digit vector in the requested format.
pub fn serialize_grid(digits: &[Digit], dims: Dims, format: GridFormat) -> String {
    let side = dims.side();
    let mut out = String::with_capacity(dims.num_cells() + side);
    for (i, &d) in digits.iter().enumerate() {
        if format == GridFormat::Dotted && i > 0 && i % side == 0 {
            out.push('.');
        }
        out.push(char::from_digit(d as u32, 10).unwrap_or('?'));
    }
    out
}

/// Parses a clue-position mask: `1`/`*` mark a clue cell and `0`/`-` a free
/// one. Any other text that parses as a grid yields the mask of its nonzero
/// cells.
pub fn parse_mask(text: &str, dims: Dims) -> Result<ClueMask, GridError> {
    let symbols: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
    let pure = symbols.iter().all(|c| matches!(c, '0' | '1' | '*' | '-'));
    if pure {
        if symbols.len() != dims.num_cells() {
            return Err(GridError::SymbolCount {
                expected: dims.num_cells(),
                found: symbols.len(),
            });
        }
        let cells = symbols.iter().map(|&c| c == '1' || c == '*').collect();
        return Ok(ClueMask { dims, cells });
    }
    parse_grid(text, dims).map(|a| a.mask())
}

/// Placements and candidate sets of every cell.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GridState {
    dims: Dims,
    pub(crate) placed: Vec<Digit>,
    pub(crate) candidates: Vec<Candidates>,
}

/// The first violated state condition found by [`validate_state`].
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StateViolation {
    #[error("S1: cell {0} has no candidate")]
    EmptyCandidates(Cell),
    #[error("S2: digit {digit} is still a candidate at {cell} although {reason}")]
    UnremovedCandidate {
        cell: Cell,
        digit: Digit,
        reason: String,
    },
    #[error("filled cell {cell} holds {digit} but has candidates {candidates:?}")]
    FilledCellForm {
        cell: Cell,
        digit: Digit,
        candidates: Candidates,
    },
    #[error("cells {first} and {second} of one group both hold {digit}")]
    DuplicateDigit { digit: Digit, first: Cell, second: Cell },
}

impl GridState {
    /// Assembles a state from raw parts without checking S1/S2.
    pub fn from_parts(dims: Dims, placed: Vec<Digit>, candidates: Vec<Candidates>) -> Self {
        assert_eq!(placed.len(), dims.num_cells());
        assert_eq!(candidates.len(), dims.num_cells());
        GridState {
            dims,
            placed,
            candidates,
        }
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn placed(&self, cell: Cell) -> Digit {
        self.placed[self.dims.index(cell)]
    }

    pub fn candidates(&self, cell: Cell) -> Candidates {
        self.candidates[self.dims.index(cell)]
    }

    pub fn placements(&self) -> &[Digit] {
        &self.placed
    }

    pub fn candidate_sets(&self) -> &[Candidates] {
        &self.candidates
    }

    pub fn is_complete(&self) -> bool {
        self.placed.iter().all(|&d| d != 0)
    }

    /// Total number of `(cell, digit)` candidate pairs.
    pub fn candidate_count(&self) -> usize {
        self.candidates.iter().map(|c| c.len()).sum()
    }
}

/// Builds the initial state of a clue assignment: clue digits placed and
/// exactly the forced removals applied.
pub fn make_initial_state(assignment: &ClueAssignment, geom: &Geometry) -> Result<GridState, GridError> {
    let dims = geom.dims();
    assert_eq!(assignment.dims(), dims, "assignment and geometry disagree on board size");
    let placed = assignment.digits().to_vec();
    for g in 0..geom.num_groups() {
        let mut seen: Vec<Option<usize>> = vec![None; dims.side() + 1];
        for &c in geom.group_cells(g) {
            let d = placed[c];
            if d == 0 {
                continue;
            }
            if let Some(prev) = seen[d as usize] {
                return Err(GridError::DuplicateClue {
                    digit: d,
                    first: dims.cell(prev),
                    second: dims.cell(c),
                });
            }
            seen[d as usize] = Some(c);
        }
    }
    let full = Candidates::full(dims);
    let mut candidates = vec![full; dims.num_cells()];
    for (c, cand) in candidates.iter_mut().enumerate() {
        if placed[c] != 0 {
            *cand = Candidates::single(placed[c]);
        }
        for &p in geom.peers(c) {
            if placed[p] != 0 {
                cand.remove(placed[p]);
            }
        }
        if cand.is_empty() {
            return Err(GridError::NoCandidates(dims.cell(c)));
        }
    }
    Ok(GridState {
        dims,
        placed,
        candidates,
    })
}

/// Checks S1, S2, the filled-cell form, and that no group holds a digit
/// twice.
pub fn validate_state(state: &GridState, geom: &Geometry) -> Result<(), StateViolation> {
    let dims = state.dims;
    for c in 0..dims.num_cells() {
        let cell = dims.cell(c);
        let cand = state.candidates[c];
        if cand.is_empty() {
            return Err(StateViolation::EmptyCandidates(cell));
        }
        let f = state.placed[c];
        if f != 0 {
            if cand != Candidates::single(f) {
                // Under S1 and S2 the only possibility left is {f}.
                let stray = cand.iter().find(|&d| d != f);
                if let Some(digit) = stray {
                    return Err(StateViolation::UnremovedCandidate {
                        cell,
                        digit,
                        reason: format!("{f} is placed there"),
                    });
                }
                return Err(StateViolation::FilledCellForm {
                    cell,
                    digit: f,
                    candidates: cand,
                });
            }
        }
        for &p in geom.peers(c) {
            let d = state.placed[p];
            if d == 0 {
                continue;
            }
            if f == d {
                return Err(StateViolation::DuplicateDigit {
                    digit: d,
                    first: dims.cell(c.min(p)),
                    second: dims.cell(c.max(p)),
                });
            }
            if cand.contains(d) {
                return Err(StateViolation::UnremovedCandidate {
                    cell,
                    digit: d,
                    reason: format!("peer {} holds it", dims.cell(p)),
                });
            }
        }
    }
    Ok(())
}

/// Whether a complete digit vector is a Sudoku solution.
pub fn is_valid_solution(digits: &[Digit], geom: &Geometry) -> bool {
    let dims = geom.dims();
    if digits.len() != dims.num_cells() {
        return false;
    }
    let full = Candidates::full(dims);
    (0..geom.num_groups()).all(|g| {
        let mut seen = Candidates::EMPTY;
        for &c in geom.group_cells(g) {
            let d = digits[c];
            if d == 0 || d > dims.max_digit() || seen.contains(d) {
                return false;
            }
            seen.insert(d);
        }
        seen == full
    })
}

/// Which strategies may fire.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StrategySet {
    pub naked_single: bool,
    pub hidden_single: bool,
    pub locked_candidate: bool,
}

impl StrategySet {
    pub const ALL: StrategySet = StrategySet {
        naked_single: true,
        hidden_single: true,
        locked_candidate: true,
    };
    pub const NAKED_SINGLES: StrategySet = StrategySet {
        naked_single: true,
        hidden_single: false,
        locked_candidate: false,
    };
    pub const NONE: StrategySet = StrategySet {
        naked_single: false,
        hidden_single: false,
        locked_candidate: false,
    };

    pub fn is_empty(&self) -> bool {
        !(self.naked_single || self.hidden_single || self.locked_candidate)
    }

    /// `self` enables every strategy `other` enables.
    pub fn includes(&self, other: &StrategySet) -> bool {
        (self.naked_single || !other.naked_single)
            && (self.hidden_single || !other.hidden_single)
            && (self.locked_candidate || !other.locked_candidate)
    }
}

impl Default for StrategySet {
    fn default() -> Self {
        StrategySet::ALL
    }
}

impl FromStr for StrategySet {
    type Err = String;

    /// Comma list of `ns`, `hs`, `lc`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut set = StrategySet::NONE;
        for name in s.split(',').map(str::trim).filter(|n| !n.is_empty()) {
            match name {
                "ns" => set.naked_single = true,
                "hs" => set.hidden_single = true,
                "lc" => set.locked_candidate = true,
                other => return Err(format!("unknown strategy {other:?} (expected ns, hs, lc)")),
            }
        }
        if set.is_empty() {
            return Err("at least one strategy is required".into());
        }
        Ok(set)
    }
}

impl fmt::Display for StrategySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut names = Vec::new();
        if self.naked_single {
            names.push("ns");
        }
        if self.hidden_single {
            names.push("hs");
        }
        if self.locked_candidate {
            names.push("lc");
        }
        write!(f, "{}", names.join(","))
    }
}
