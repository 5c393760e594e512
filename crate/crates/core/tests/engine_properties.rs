use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ssc_core::engine::{closure, closure_with_trace, step, SolveResult, StepOutcome};
use ssc_core::grid::{
    make_initial_state, validate_state, ClueAssignment, Dims, Geometry, StrategySet,
};
use ssc_core::oracle::{count_solutions, random_masks, random_solution};

fn strategy_set() -> impl Strategy<Value = StrategySet> {
    (any::<bool>(), any::<bool>(), any::<bool>()).prop_map(|(n, h, l)| StrategySet {
        naked_single: n,
        hidden_single: h,
        locked_candidate: l,
    })
}

/// Clues drawn from a random complete grid of the given board.
fn puzzle(dims: Dims, seed: u64, lo: usize, hi: usize) -> (ClueAssignment, Vec<u8>) {
    let geom = Geometry::new(dims);
    let solution = random_solution(&geom, &mut ChaCha8Rng::seed_from_u64(seed));
    let mask = random_masks(dims, 1, (lo, hi), seed ^ 0x5eed).unwrap().remove(0);
    (ClueAssignment::from_grid_and_mask(&solution, &mask).unwrap(), solution)
}

fn arbitrary(dims: Dims) -> impl Strategy<Value = ClueAssignment> {
    let max = dims.max_digit();
    prop::collection::vec(prop_oneof![3 => Just(0u8), 1 => 1..=max], dims.num_cells())
        .prop_map(move |d| ClueAssignment::from_digits(dims, d).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    /// Placements persist, candidates only shrink, and every state before a
    /// contradiction satisfies the state conditions.
    #[test]
    fn runs_are_monotone(a in arbitrary(Dims::standard()), s in strategy_set()) {
        let geom = Geometry::new(Dims::standard());
        let (result, trace) = closure_with_trace(&a, s, &geom);
        for w in trace.states.windows(2) {
            for c in 0..81 {
                let (p, q) = (w[0].placements()[c], w[1].placements()[c]);
                prop_assert!(p == 0 || p == q);
                let (g, h) = (w[0].candidate_sets()[c], w[1].candidate_sets()[c]);
                prop_assert_eq!(g.bits() & h.bits(), h.bits());
            }
        }
        for st in &trace.states {
            prop_assert!(validate_state(st, &geom).is_ok());
        }
        prop_assert!(result.steps() <= Dims::standard().step_bound());
    }

    /// Clues from a real solution never lead to a wrong placement.
    #[test]
    fn sound_on_consistent_clues(seed: u64, s in strategy_set()) {
        let dims = Dims::standard();
        let geom = Geometry::new(dims);
        let (a, solution) = puzzle(dims, seed, 20, 60);
        let (result, trace) = closure_with_trace(&a, s, &geom);
        let is_contradiction = matches!(result, SolveResult::Contradiction(_));
        prop_assert!(!is_contradiction);
        for st in &trace.states {
            for (c, &p) in st.placements().iter().enumerate() {
                prop_assert!(p == 0 || p == solution[c]);
                prop_assert!(st.candidate_sets()[c].contains(solution[c]));
            }
        }
        if result.is_solved() {
            prop_assert_eq!(count_solutions(&a, &geom, Some(2)), 1);
        }
    }

    /// Stepping an end state changes nothing.
    #[test]
    fn end_states_are_fixpoints(a in arbitrary(Dims::small()), s in strategy_set()) {
        let geom = Geometry::new(Dims::small());
        match closure(&a, s, &geom) {
            SolveResult::Solved { solution: st, steps } | SolveResult::Stuck { state: st, steps } => {
                match step(&st, s, &geom, steps + 1) {
                    StepOutcome::Fixpoint { state, .. } => prop_assert_eq!(state, st),
                    other => prop_assert!(false, "{other:?}"),
                }
            }
            SolveResult::Contradiction(_) => {}
        }
    }

    /// More strategies never hurt.
    #[test]
    fn stronger_sets_solve_at_least_as_much(seed: u64) {
        let dims = Dims::standard();
        let geom = Geometry::new(dims);
        let (a, _) = puzzle(dims, seed, 24, 45);
        let ns = closure(&a, StrategySet::NAKED_SINGLES, &geom).is_solved();
        let all = closure(&a, StrategySet::ALL, &geom).is_solved();
        prop_assert!(!ns || all);
    }

    /// The closure is a function of the clues.
    #[test]
    fn deterministic(a in arbitrary(Dims::small()), s in strategy_set()) {
        let geom = Geometry::new(Dims::small());
        prop_assert_eq!(closure(&a, s, &geom), closure(&a, s, &geom));
    }
}

#[test]
fn initial_state_has_only_forced_removals() {
    let dims = Dims::standard();
    let geom = Geometry::new(dims);
    let (a, _) = puzzle(dims, 1, 30, 30);
    let st = make_initial_state(&a, &geom).unwrap();
    for c in 0..81 {
        let expected = if a.digits()[c] != 0 {
            1
        } else {
            let used: std::collections::BTreeSet<u8> =
                geom.peers(c).iter().map(|&p| a.digits()[p]).filter(|&d| d != 0).collect();
            9 - used.len()
        };
        assert_eq!(st.candidate_sets()[c].len(), expected, "cell {c}");
    }
}

#[test]
fn empty_rules_never_progress() {
    let dims = Dims::standard();
    let geom = Geometry::new(dims);
    let (a, _) = puzzle(dims, 2, 40, 60);
    match closure(&a, StrategySet::NONE, &geom) {
        SolveResult::Stuck { steps, .. } => assert_eq!(steps, 1),
        other => panic!("{other:?}"),
    }
}
