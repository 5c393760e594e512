//! Exact generation of strategy-solvable Sudoku clues by SAT encoding.
//!
//! The crate is organised bottom-up: [`grid`] holds the board model,
//! [`engine`] the deterministic strategy closure, [`encode`] the CNF
//! unrolling of that closure, [`sat`] the solver backends, [`search`] the
//! decision procedures on top, and [`oracle`] independent baselines used to
//! cross-check them.

pub mod cnf;
pub mod encode;
pub mod engine;
pub mod grid;
pub mod oracle;
pub mod sat;
pub mod search;

pub use cnf::{CnfFormula, Lit, Model};
pub use encode::{decode_model, encode_instance, DecodedRun, EncodeOptions, VarMap};

pub use engine::{closure, is_strategy_solvable, SolveResult};
pub use grid::{ClueAssignment, ClueMask, Dims, Geometry, GridState, StrategySet};
pub use sat::{Backend, SolverConfig, SolverVerdict};
pub use search::{find_clues, min_clues, MinClueReport, SearchConfig, SearchOutcome};
