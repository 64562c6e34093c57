//! Executable self-reducibility arguments for SAT and #SAT.
//!
//! Each decider walks the self-reducibility tree of a propositional formula
//! (split on the least variable, simplify, repeat) and uses a hypothetical
//! oracle to keep the walk polynomially narrow:
//!
//! * [`selector::decide_via_selector`]: a selector for SAT picks one child
//!   per level, so a single root-to-leaf path suffices.
//! * [`pruning::decide_via_tally`]: a many-one reduction of SAT to a tally set
//!   lets each level be pruned to one node per distinct tally image.
//! * [`pruning::decide_via_sparse`]: a reduction of unsatisfiability to a
//!   sparse set gives the same duplicate pruning, and a level with more
//!   distinct images than the sparse set has short strings proves
//!   satisfiability outright.
//! * [`enumerate::count_via_enumerator`]: a 2-enumerator for #SAT, queried on
//!   combined formulas, links each node's count to one child's and yields
//!   the exact count.
//!
//! The oracles in [`oracle`] are simulated with exact counting, so every
//! result can be checked against [`count::brute_force_count`].

pub mod corpus;
pub mod count;
pub mod enumerate;
pub mod error;
pub mod formula;
pub mod harness;
pub mod oracle;
pub mod parse;
pub mod pruning;
pub mod selector;

pub use count::{brute_force_count, brute_force_sat, count_models, ModelCount};
pub use enumerate::{combine, combine3, count_via_enumerator, decode, decode3, demonstrate_naive_failure};
pub use error::{Error, Result};
pub use formula::{Assignment, Formula, SelfReduction, TreeNode, Var};
pub use parse::{parse, parse_dimacs};
pub use pruning::{decide_via_sparse, decide_via_tally, SparseMode};
pub use selector::decide_via_selector;
