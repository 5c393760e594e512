//! Clause storage, truth assignments, and the DIMACS text formats.

use std::fmt::Write as _;
use std::io::{self, Write};

use thiserror::Error;

/// A signed variable id; negative means negated.
pub type Lit = i32;

/// A CNF formula with clauses stored back to back.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CnfFormula {
    num_vars: u32,
    lits: Vec<Lit>,
    ends: Vec<u32>,
}

impl CnfFormula {
    pub fn new() -> Self {
        Self::default()
    }

    /// Allocates a fresh variable and returns its (positive) id.
    pub fn new_var(&mut self) -> Lit {
        self.num_vars += 1;
        self.num_vars as Lit
    }

    /// Raises the variable count to at least `n`.
    pub fn reserve_vars(&mut self, n: u32) {
        self.num_vars = self.num_vars.max(n);
    }

    pub fn add_clause(&mut self, clause: &[Lit]) {
        assert!(!clause.is_empty(), "empty clause");
        debug_assert!(clause
            .iter()
            .all(|&l| l != 0 && l.unsigned_abs() <= self.num_vars));
        self.lits.extend_from_slice(clause);
        self.ends.push(self.lits.len() as u32);
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn num_clauses(&self) -> usize {
        self.ends.len()
    }

    pub fn num_literals(&self) -> usize {
        self.lits.len()
    }

    pub fn clause(&self, index: usize) -> &[Lit] {
        let start = if index == 0 { 0 } else { self.ends[index - 1] as usize };
        &self.lits[start..self.ends[index] as usize]
    }

    pub fn clauses(&self) -> impl Iterator<Item = &[Lit]> + '_ {
        (0..self.ends.len()).map(move |i| self.clause(i))
    }

    /// Index of the first clause the model falsifies.
    pub fn first_violated(&self, model: &Model) -> Option<usize> {
        self.clauses().position(|c| !c.iter().any(|&l| model.lit(l)))
    }

    pub fn write_dimacs<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "p cnf {} {}", self.num_vars, self.num_clauses())?;
        let mut line = String::new();
        for clause in self.clauses() {
            line.clear();
            for l in clause {
                let _ = write!(line, "{l} ");
            }
            line.push_str("0\n");
            out.write_all(line.as_bytes())?;
        }
        Ok(())
    }

    pub fn to_dimacs(&self) -> String {
        let mut buf = Vec::new();
        self.write_dimacs(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("ascii output")
    }
}

/// A truth assignment indexed by variable id (index 0 unused).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Model {
    values: Vec<bool>,
}

impl Model {
    pub fn new(num_vars: u32) -> Self {
        Model {
            values: vec![false; num_vars as usize + 1],
        }
    }

    pub fn from_values(values: Vec<bool>) -> Self {
        Model { values }
    }

    pub fn num_vars(&self) -> u32 {
        (self.values.len() - 1) as u32
    }

    pub fn set(&mut self, var: u32, value: bool) {
        self.values[var as usize] = value;
    }

    pub fn var(&self, var: u32) -> bool {
        self.values[var as usize]
    }

    /// Truth value of a signed literal.
    pub fn lit(&self, lit: Lit) -> bool {
        self.values[lit.unsigned_abs() as usize] == (lit > 0)
    }

    /// The model as `v`-lines terminated by `0`.
    pub fn to_v_lines(&self) -> String {
        let mut out = String::from("v");
        for var in 1..=self.num_vars() {
            let l = if self.var(var) { var as i64 } else { -(var as i64) };
            let _ = write!(out, " {l}");
        }
        out.push_str(" 0\n");
        out
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn parse_error(line: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        message: message.into(),
    }
}

/// Status line of a solver run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverStatus {
    Sat,
    Unsat,
    Unknown,
}

/// Parsed solver output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolverOutput {
    pub status: SolverStatus,
    pub model: Option<Model>,
}

/// Parses solver output: a status given as `s SATISFIABLE` /
/// `s UNSATISFIABLE` / `s UNKNOWN` or bare `SAT` / `UNSAT`, followed by
/// signed literals on `v` lines (or bare lines after `SAT`) ending in `0`.
/// Variables the output does not mention are false.
pub fn parse_model(text: &str, num_vars: u32) -> Result<SolverOutput, ParseError> {
    let mut status = None;
    let mut model = Model::new(num_vars);
    let mut saw_literals = false;
    let mut terminated = false;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let (tag, rest) = match line.split_once(char::is_whitespace) {
            Some((t, r)) => (t, r.trim()),
            None => (line, ""),
        };
        match tag {
            "s" | "SAT" | "UNSAT" | "UNSATISFIABLE" | "SATISFIABLE" | "INDET" | "UNKNOWN" => {
                let word = if tag == "s" { rest } else { tag };
                let parsed = match word {
                    "SATISFIABLE" | "SAT" => SolverStatus::Sat,
                    "UNSATISFIABLE" | "UNSAT" => SolverStatus::Unsat,
                    "UNKNOWN" | "INDET" => SolverStatus::Unknown,
                    other => return Err(parse_error(line_no, format!("unknown status {other:?}"))),
                };
                if status.is_some() {
                    return Err(parse_error(line_no, "duplicate status line"));
                }
                status = Some(parsed);
            }
            _ => {
                let body = if tag == "v" { rest } else { line };
                if status != Some(SolverStatus::Sat) {
                    return Err(parse_error(line_no, "literals before a SAT status"));
                }
                for tok in body.split_whitespace() {
                    let lit: i64 = tok
                        .parse()
                        .map_err(|_| parse_error(line_no, format!("bad literal {tok:?}")))?;
                    if terminated {
                        return Err(parse_error(line_no, "literal after terminating 0"));
                    }
                    if lit == 0 {
                        terminated = true;
                        continue;
                    }
                    let var = lit.unsigned_abs();
                    if var > num_vars as u64 {
                        return Err(parse_error(line_no, format!("variable {var} out of range")));
                    }
                    model.set(var as u32, lit > 0);
                    saw_literals = true;
                }
            }
        }
    }
    let status = status.ok_or_else(|| parse_error(text.lines().count().max(1), "no status line"))?;
    let model = match status {
        SolverStatus::Sat => {
            if !saw_literals && num_vars > 0 {
                return Err(parse_error(text.lines().count().max(1), "SAT without a model"));
            }
            Some(model)
        }
        _ => None,
    };
    Ok(SolverOutput { status, model })
}

/// Reads a DIMACS CNF text into a formula.
pub fn parse_dimacs(text: &str) -> Result<CnfFormula, ParseError> {
    let mut formula = CnfFormula::new();
    let mut declared: Option<(u32, usize)> = None;
    let mut current = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("p") {
            let parts: Vec<&str> = rest.split_whitespace().collect();
            if parts.len() != 3 || parts[0] != "cnf" {
                return Err(parse_error(line_no, "malformed problem line"));
            }
            let vars = parts[1].parse().map_err(|_| parse_error(line_no, "bad variable count"))?;
            let clauses = parts[2].parse().map_err(|_| parse_error(line_no, "bad clause count"))?;
            formula.reserve_vars(vars);
            declared = Some((vars, clauses));
            continue;
        }
        let Some((vars, _)) = declared else {
            return Err(parse_error(line_no, "clause before problem line"));
        };
        for tok in line.split_whitespace() {
            let lit: Lit = tok
                .parse()
                .map_err(|_| parse_error(line_no, format!("bad literal {tok:?}")))?;
            if lit == 0 {
                if current.is_empty() {
                    return Err(parse_error(line_no, "empty clause"));
                }
                formula.add_clause(&current);
                current.clear();
            } else {
                if lit.unsigned_abs() > vars {
                    return Err(parse_error(line_no, format!("variable {} out of range", lit.abs())));
                }
                current.push(lit);
            }
        }
    }
    if !current.is_empty() {
        formula.add_clause(&current);
    }
    if let Some((_, clauses)) = declared {
        if clauses != formula.num_clauses() {
            return Err(parse_error(
                text.lines().count(),
                format!("header declares {clauses} clauses, found {}", formula.num_clauses()),
            ));
        }
    }
    Ok(formula)
}
