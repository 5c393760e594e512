//! Minimal DPLL solver speaking the DIMACS conventions: `ssc-dpll <file.cnf>`
//! prints `s SATISFIABLE` with `v` lines, or `s UNSATISFIABLE`. Meant for
//! small formulas and for cross-checking the in-process backend.

use std::process::ExitCode;

use ssc_core::cnf::{parse_dimacs, Lit, Model};

fn value(assign: &[i8], lit: Lit) -> i8 {
    let v = assign[lit.unsigned_abs() as usize];
    if lit > 0 {
        v
    } else {
        -v
    }
}

/// Returns false on conflict; records assigned variables in `trail`.
fn propagate(clauses: &[Vec<Lit>], assign: &mut [i8], trail: &mut Vec<usize>) -> bool {
    loop {
        let mut changed = false;
        for clause in clauses {
            let mut unassigned = None;
            let mut open = 0;
            let mut satisfied = false;
            for &l in clause {
                match value(assign, l) {
                    1 => {
                        satisfied = true;
                        break;
                    }
                    0 => {
                        open += 1;
                        unassigned = Some(l);
                    }
                    _ => {}
                }
            }
            if satisfied {
                continue;
            }
            match (open, unassigned) {
                (0, _) => return false,
                (1, Some(l)) => {
                    let v = l.unsigned_abs() as usize;
                    assign[v] = if l > 0 { 1 } else { -1 };
                    trail.push(v);
                    changed = true;
                }
                _ => {}
            }
        }
        if !changed {
            return true;
        }
    }
}

fn dpll(clauses: &[Vec<Lit>], assign: &mut Vec<i8>) -> bool {
    let mut trail = Vec::new();
    if !propagate(clauses, assign, &mut trail) {
        for v in trail {
            assign[v] = 0;
        }
        return false;
    }
    let Some(var) = (1..assign.len()).find(|&v| assign[v] == 0) else {
        return true;
    };
    for phase in [1, -1] {
        assign[var] = phase;
        if dpll(clauses, assign) {
            return true;
        }
    }
    assign[var] = 0;
    for v in trail {
        assign[v] = 0;
    }
    false
}

fn main() -> ExitCode {
    let Some(path) = std::env::args().nth(1) else {
        eprintln!("usage: ssc-dpll <file.cnf>");
        return ExitCode::from(2);
    };
    let text = match std::fs::read_to_string(&path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("{path}: {e}");
            return ExitCode::from(2);
        }
    };
    let formula = match parse_dimacs(&text) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("{path}: {e}");
            return ExitCode::from(2);
        }
    };
    let clauses: Vec<Vec<Lit>> = formula.clauses().map(<[Lit]>::to_vec).collect();
    let mut assign = vec![0i8; formula.num_vars() as usize + 1];
    if dpll(&clauses, &mut assign) {
        let mut model = Model::new(formula.num_vars());
        for v in 1..=formula.num_vars() {
            model.set(v, assign[v as usize] > 0);
        }
        print!("s SATISFIABLE\n{}", model.to_v_lines());
        ExitCode::from(10)
    } else {
        println!("s UNSATISFIABLE");
        ExitCode::from(20)
    }
}
