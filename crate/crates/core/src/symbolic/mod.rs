//! Exact symbolic verification of the matrix identities that realise the
//! relations of `M(E,w)` by idempotent matrices over `L_K(E,w)`.
//!
//! Elements of `L_K(E,w)` are represented as rational combinations of words in
//! `v`, `e_i` and `e_i*`, and identities are checked by rewriting the entries
//! of `lhs − rhs` with the defining relations until a fixed point is reached.

mod matrix;
mod poly;
mod reduce;
mod witnesses;

use alloc::string::String;
use thiserror::Error;

use crate::graph::GraphError;

pub use matrix::{a_of_strata, block, block_of_strata, build_a, star_transpose, BlockMatrix};
pub use poly::{Letter, StarMonomial, StarPolynomial};
pub use reduce::{reduce, verify_identity, IdentityVerdict, ReductionRuleSet, ScanOrder};
pub use witnesses::{
    epsilon, epsilon_definition, verify_all_witnesses, verify_theorem_witnesses,
    verify_witnesses_with, CheckVerdict, WitnessCheck, WitnessIdentity, WitnessReport,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymbolicError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("vertex `{vertex}` emits no edges")]
    EmptySource { vertex: String },
    #[error("block indices rows {rows:?}, columns {cols:?} are invalid for k = {k}")]
    IndexOutOfRange {
        rows: (usize, usize),
        cols: (usize, usize),
        k: usize,
    },
    #[error("matrix shapes {left:?} and {right:?} do not fit")]
    DimensionMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("reduction did not reach a fixed point within {passes} passes")]
    NonTermination { passes: usize },
}
