//! Nonstable K-theory of weighted Leavitt path algebras.
//!
//! Builds the V-monoid presentation `M(E,w)` of a row-finite weighted graph,
//! decides equality in finitely presented commutative monoids, computes K₀ via
//! Smith normal form, and symbolically verifies the matrix identities that
//! realise the defining relations of `M(E,w)` inside `L_K(E,w)`.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

#[cfg(feature = "serde")]
mod bigint_serde;

pub mod engine;
pub mod graph;
pub mod k0;
pub mod lattice;
pub mod presentation;
pub mod symbolic;

pub use engine::{Bounds, CongruenceEngine, Decision, EngineError, Verdict};
pub use graph::{GraphError, GraphSpec, VertexStrata, WeightedGraph};
pub use k0::{k0_consistency, k0_invariants, ConsistencyReport};
pub use lattice::{
    group_iso_check, smith_normal_form, AbelianGroupInvariants, IntMatrix, SnfDecomposition,
};
pub use presentation::{
    build_graph_monoid_classic, build_k0, build_v_monoid, group_completion, Element, GeneratorName,
    GroupPresentation, MonoidPresentation, Relation,
};
pub use symbolic::{verify_theorem_witnesses, WitnessReport};
