use alloc::string::String;
use alloc::vec::Vec;

use super::matrix::{a_of_strata, block_of_strata, star_transpose, vertex_poly, BlockMatrix};
use super::poly::StarPolynomial;
use super::reduce::{verify_identity, IdentityVerdict, ReductionRuleSet};
use super::SymbolicError;
use crate::graph::{VertexStrata, WeightedGraph};

/// The matrix identities checked at a vertex `v`, with `A = A(v)`,
/// `B_l = A^{n_0,n_l}_{w_0,w_l}`, `C_l = A^{n_l,n_k}_{w_0,w_l}`,
/// `G_l = A^{n_{l-1},n_l}_{w_0,w_l}`, `ε_l = diag(v) − B_l B_l*`,
/// `X_l = (ε_l  G_l)` and `Y_l = X_l*`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum WitnessIdentity {
    /// `A A* = diag(v, …, v)`.
    RowsOrthonormal,
    /// `A* A = diag(r(e^1), …, r(e^n))`.
    ColumnsOrthonormal,
    /// `C_l C_l* = ε_l`.
    EpsilonComplement,
    /// `B_l* B_l = diag(r(e^1), …, r(e^{n_l}))`.
    BlockColumnsOrthonormal,
    /// `ε_l ε_l = ε_l`.
    EpsilonIdempotent,
    /// `ε_l G_l = 0`.
    EpsilonAnnihilatesBlock,
    /// `X_l Y_l = diag(ε_{l-1}, v, …, v)`.
    XyDiagonal,
    /// `Y_l X_l = diag(ε_l, r(e^{n_{l-1}+1}), …, r(e^{n_l}))`.
    YxDiagonal,
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "verdict", rename_all = "snake_case"))]
pub enum CheckVerdict {
    Verified,
    Counterexample {
        row: usize,
        col: usize,
        residual: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WitnessCheck {
    /// Stratum index; zero for the identities about the whole of `A`.
    pub l: usize,
    pub identity: WitnessIdentity,
    pub verdict: CheckVerdict,
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WitnessReport {
    pub vertex: String,
    pub checks: Vec<WitnessCheck>,
}

impl WitnessReport {
    pub fn all_verified(&self) -> bool {
        self.checks
            .iter()
            .all(|c| c.verdict == CheckVerdict::Verified)
    }

    pub fn get(&self, l: usize, identity: WitnessIdentity) -> Option<&CheckVerdict> {
        self.checks
            .iter()
            .find(|c| c.l == l && c.identity == identity)
            .map(|c| &c.verdict)
    }
}

/// Every identity for `v`, with the default edge order and full rule set.
pub fn verify_theorem_witnesses(
    g: &WeightedGraph,
    v: &str,
) -> Result<WitnessReport, SymbolicError> {
    let s = g.strata(v)?;
    verify_witnesses_with(g, &s, &ReductionRuleSet::new(g))
}

/// Reports for every emitting vertex, in declaration order.
pub fn verify_all_witnesses(g: &WeightedGraph) -> Result<Vec<WitnessReport>, SymbolicError> {
    let rules = ReductionRuleSet::new(g);
    g.emitting_vertices()
        .map(|v| verify_witnesses_with(g, &g.strata_at(v), &rules))
        .collect()
}

/// `ε_l` in its complement form `diag(v) − B_l B_l*`; empty for `l = 0` and `l = k`.
pub fn epsilon(
    g: &WeightedGraph,
    s: &VertexStrata,
    l: usize,
) -> Result<BlockMatrix, SymbolicError> {
    if l == 0 || l == s.k {
        return Ok(BlockMatrix::zeros(0, 0));
    }
    let b = block_of_strata(g, s, (0, l), (0, l))?;
    BlockMatrix::scalar(s.weights[l] as usize, &vertex_poly(s.vertex))
        .sub(&b.mul(&star_transpose(&b))?)
}

/// `ε_l = C_l C_l*` as originally defined.
pub fn epsilon_definition(
    g: &WeightedGraph,
    s: &VertexStrata,
    l: usize,
) -> Result<BlockMatrix, SymbolicError> {
    let c = block_of_strata(g, s, (0, l), (l, s.k))?;
    c.mul(&star_transpose(&c))
}

fn ranges(g: &WeightedGraph, s: &VertexStrata, from: usize, to: usize) -> BlockMatrix {
    let entries: Vec<StarPolynomial> = s.ordered_edges[from..to]
        .iter()
        .map(|&e| vertex_poly(g.edge(e).range))
        .collect();
    BlockMatrix::diagonal(&entries)
}

/// Checks every identity at the vertex of `s`, using its edge order and the
/// given rules.
pub fn verify_witnesses_with(
    g: &WeightedGraph,
    s: &VertexStrata,
    rules: &ReductionRuleSet,
) -> Result<WitnessReport, SymbolicError> {
    let name = g.vertex_name(s.vertex);
    if s.out_degree() == 0 {
        return Err(SymbolicError::EmptySource {
            vertex: name.into(),
        });
    }
    let mut checks = Vec::new();
    let mut check =
        |l: usize, identity, lhs: &BlockMatrix, rhs: &BlockMatrix| -> Result<(), SymbolicError> {
            let verdict = match verify_identity(lhs, rhs, rules)? {
                IdentityVerdict::Verified => CheckVerdict::Verified,
                IdentityVerdict::Counterexample { row, col, residual } => {
                    CheckVerdict::Counterexample {
                        row,
                        col,
                        residual: residual.render(g),
                    }
                }
            };
            checks.push(WitnessCheck {
                l,
                identity,
                verdict,
            });
            Ok(())
        };
    let v = vertex_poly(s.vertex);
    let diag_v = |n: u32| BlockMatrix::scalar(n as usize, &v);
    let a = a_of_strata(g, s);
    let a_star = star_transpose(&a);
    check(
        0,
        WitnessIdentity::RowsOrthonormal,
        &a.mul(&a_star)?,
        &diag_v(s.max_weight()),
    )?;
    check(
        0,
        WitnessIdentity::ColumnsOrthonormal,
        &a_star.mul(&a)?,
        &ranges(g, s, 0, s.out_degree()),
    )?;
    for l in 1..s.k {
        let eps = epsilon(g, s, l)?;
        let b = block_of_strata(g, s, (0, l), (0, l))?;
        let blk = block_of_strata(g, s, (0, l), (l - 1, l))?;
        check(
            l,
            WitnessIdentity::EpsilonComplement,
            &epsilon_definition(g, s, l)?,
            &eps,
        )?;
        check(
            l,
            WitnessIdentity::BlockColumnsOrthonormal,
            &star_transpose(&b).mul(&b)?,
            &ranges(g, s, 0, s.counts[l]),
        )?;
        check(l, WitnessIdentity::EpsilonIdempotent, &eps.mul(&eps)?, &eps)?;
        check(
            l,
            WitnessIdentity::EpsilonAnnihilatesBlock,
            &eps.mul(&blk)?,
            &BlockMatrix::zeros(eps.rows(), blk.cols()),
        )?;
    }
    for l in 1..=s.k {
        let eps = epsilon(g, s, l)?;
        let eps_prev = epsilon(g, s, l - 1)?;
        let blk = block_of_strata(g, s, (0, l), (l - 1, l))?;
        let x = if l == s.k { blk } else { eps.hcat(&blk)? };
        let y = star_transpose(&x);
        let xy_rhs =
            BlockMatrix::direct_sum(&[&eps_prev, &diag_v(s.weights[l] - s.weights[l - 1])]);
        check(l, WitnessIdentity::XyDiagonal, &x.mul(&y)?, &xy_rhs)?;
        let yx_rhs = BlockMatrix::direct_sum(&[&eps, &ranges(g, s, s.counts[l - 1], s.counts[l])]);
        check(l, WitnessIdentity::YxDiagonal, &y.mul(&x)?, &yx_rhs)?;
    }
    Ok(WitnessReport {
        vertex: name.into(),
        checks,
    })
}
