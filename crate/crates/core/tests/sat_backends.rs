use std::time::Duration;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ssc_core::cnf::{parse_dimacs, parse_model, CnfFormula, Model, SolverStatus};
use ssc_core::encode::{encode_instance, EncodeOptions};
use ssc_core::grid::{ClueMask, Dims, Geometry};
use ssc_core::sat::{solve, Backend, SolverConfig, SolverVerdict};

fn dpll() -> Backend {
    Backend::External(env!("CARGO_BIN_EXE_ssc-dpll").into())
}

fn random_formula(rng: &mut ChaCha8Rng) -> CnfFormula {
    let vars = rng.gen_range(3..=18);
    let ratio = rng.gen_range(2.0..7.5);
    let clauses = (vars as f64 * ratio) as usize;
    let mut f = CnfFormula::new();
    f.reserve_vars(vars);
    for _ in 0..clauses {
        let width = if rng.gen_bool(0.9) { 3 } else { 2 };
        let clause: Vec<i32> = (0..width)
            .map(|_| {
                let v = rng.gen_range(1..=vars) as i32;
                if rng.gen() {
                    v
                } else {
                    -v
                }
            })
            .collect();
        f.add_clause(&clause);
    }
    f
}

#[test]
fn backends_agree_on_random_formulas() {
    let mut rng = ChaCha8Rng::seed_from_u64(100);
    let external = SolverConfig::new(dpll(), Duration::from_secs(30)).unwrap();
    let internal = SolverConfig::default();
    let mut sat = 0;
    for i in 0..100 {
        let f = random_formula(&mut rng);
        let a = solve(&f, &internal).unwrap();
        let b = solve(&f, &external).unwrap();
        assert_eq!(a.is_sat(), b.is_sat(), "formula {i}");
        assert!(a.is_sat() || a.is_unsat(), "formula {i}: {a:?}");
        sat += a.is_sat() as usize;
    }
    // The clause/variable ratios straddle the threshold, so both verdicts occur.
    assert!(sat > 10 && sat < 90, "{sat} satisfiable");
}

#[test]
fn external_backend_respects_assumptions() {
    let mut f = CnfFormula::new();
    f.reserve_vars(2);
    f.add_clause(&[1, 2]);
    let cfg = SolverConfig::new(dpll(), Duration::from_secs(10)).unwrap();
    assert!(solve(&f, &cfg.clone().with_assumptions(vec![-1, -2])).unwrap().is_unsat());
    match solve(&f, &cfg.with_assumptions(vec![-1])).unwrap() {
        SolverVerdict::Sat(m) => assert!(m.var(2)),
        v => panic!("{v:?}"),
    }
}

#[test]
fn three_positions_unsat_at_k10() {
    let dims = Dims::small();
    let geom = Geometry::new(dims);
    let mask = ClueMask::from_indices(dims, [0, 7, 13]);
    let options = EncodeOptions {
        max_step: 10,
        ..EncodeOptions::default()
    };
    let (f, _) = encode_instance(&mask, &options, &geom).unwrap();
    assert!(solve(&f, &SolverConfig::default()).unwrap().is_unsat());
}

#[test]
fn tiny_time_limit_reports_timeout_not_unsat() {
    // A hard-ish pigeonhole instance: 9 pigeons, 8 holes.
    let (p, h) = (9, 8);
    let var = |i: usize, j: usize| (i * h + j + 1) as i32;
    let mut f = CnfFormula::new();
    f.reserve_vars((p * h) as u32);
    for i in 0..p {
        f.add_clause(&(0..h).map(|j| var(i, j)).collect::<Vec<_>>());
    }
    for j in 0..h {
        for a in 0..p {
            for b in a + 1..p {
                f.add_clause(&[-var(a, j), -var(b, j)]);
            }
        }
    }
    let cfg = SolverConfig::new(Backend::InProcess, Duration::from_millis(1)).unwrap();
    match solve(&f, &cfg).unwrap() {
        SolverVerdict::Timeout(_) | SolverVerdict::Unsat => {}
        v => panic!("{v:?}"),
    }
}

proptest! {
    #[test]
    fn dimacs_round_trip(seed: u64) {
        let f = random_formula(&mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(parse_dimacs(&f.to_dimacs()).unwrap(), f);
    }

    #[test]
    fn model_round_trip(values in prop::collection::vec(any::<bool>(), 1..60)) {
        let mut all = vec![false];
        all.extend(values);
        let m = Model::from_values(all);
        let text = format!("s SATISFIABLE\n{}", m.to_v_lines());
        let out = parse_model(&text, m.num_vars()).unwrap();
        prop_assert_eq!(out.status, SolverStatus::Sat);
        prop_assert_eq!(out.model.unwrap(), m);
    }
}
