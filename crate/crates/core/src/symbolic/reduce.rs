use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use num_rational::BigRational;

use super::matrix::BlockMatrix;
use super::poly::{Letter, StarMonomial, StarPolynomial};
use super::SymbolicError;
use crate::graph::{EdgeIdx, VertexIdx, WeightedGraph};

/// Order in which complete sums are contracted.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ScanOrder {
    #[default]
    Forward,
    Reverse,
}

/// Rewriting rules of `L_K(E,w)` for one graph.
///
/// Words are first normalised letter by letter: vertices multiply
/// idempotently and orthogonally, edges absorb their endpoint vertices, two
/// adjacent letters whose endpoints disagree give zero, and so do indices above
/// an edge's weight. Then complete sums are contracted:
///
/// * `Σ_{e ∈ s⁻¹(v)} X e_i e_j* Y = δ_ij X v Y`, the sum running over every
///   edge of weight at least `max(i, j)`;
/// * `Σ_{h=1}^{w(v)} X e_h* f_h Y = δ_ef X r(e) Y`, the sum running over
///   `h ≤ min(w(e), w(f))`.
///
/// A sum contracts only when every member is present with one common
/// coefficient.
#[derive(Clone, Debug)]
pub struct ReductionRuleSet {
    source: Vec<VertexIdx>,
    range: Vec<VertexIdx>,
    weight: Vec<u32>,
    out: Vec<Vec<EdgeIdx>>,
    no_source_sum: BTreeSet<VertexIdx>,
    no_weight_sum: BTreeSet<VertexIdx>,
    order: ScanOrder,
    pass_cap: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum GroupKey {
    Source {
        prefix: Vec<Letter>,
        suffix: Vec<Letter>,
        vertex: VertexIdx,
        i: u32,
        j: u32,
    },
    Weight {
        prefix: Vec<Letter>,
        suffix: Vec<Letter>,
        e: EdgeIdx,
        f: EdgeIdx,
    },
}

impl ReductionRuleSet {
    pub fn new(g: &WeightedGraph) -> Self {
        Self {
            source: g.edges().iter().map(|e| e.source).collect(),
            range: g.edges().iter().map(|e| e.range).collect(),
            weight: g.edges().iter().map(|e| e.weight).collect(),
            out: (0..g.vertex_count())
                .map(|v| g.out_edges(v).to_vec())
                .collect(),
            no_source_sum: BTreeSet::new(),
            no_weight_sum: BTreeSet::new(),
            order: ScanOrder::Forward,
            pass_cap: 10_000,
        }
    }

    /// Drops the sum over edges leaving `v`.
    pub fn without_source_sum(mut self, v: VertexIdx) -> Self {
        self.no_source_sum.insert(v);
        self
    }

    /// Drops the sums over edge indices for pairs of edges leaving `v`.
    pub fn without_weight_sum(mut self, v: VertexIdx) -> Self {
        self.no_weight_sum.insert(v);
        self
    }

    pub fn with_scan_order(mut self, order: ScanOrder) -> Self {
        self.order = order;
        self
    }

    pub fn with_pass_cap(mut self, cap: usize) -> Self {
        self.pass_cap = cap;
        self
    }

    fn ends(&self, l: Letter) -> (VertexIdx, VertexIdx) {
        match l {
            Letter::Vertex(v) => (v, v),
            Letter::Edge(e, _) => (self.source[e], self.range[e]),
            Letter::Star(e, _) => (self.range[e], self.source[e]),
        }
    }

    /// Letter-level normal form of a word, or `None` if it is zero.
    pub fn normalize_word(&self, w: &[Letter]) -> Option<StarMonomial> {
        for &l in w {
            if let Letter::Edge(e, i) | Letter::Star(e, i) = l {
                if i == 0 || i > self.weight[e] {
                    return None;
                }
            }
        }
        if w.windows(2).any(|p| self.ends(p[0]).1 != self.ends(p[1]).0) {
            return None;
        }
        let kept: Vec<Letter> = w
            .iter()
            .copied()
            .filter(|l| !matches!(l, Letter::Vertex(_)))
            .collect();
        Some(if kept.is_empty() {
            StarMonomial::letter(w[0])
        } else {
            StarMonomial::new(kept)
        })
    }

    fn normalize(&self, p: &StarPolynomial) -> StarPolynomial {
        let mut out = StarPolynomial::zero();
        for (m, c) in p.terms() {
            if let Some(n) = self.normalize_word(m.letters()) {
                out.add_term(n, c.clone());
            }
        }
        out
    }

    fn groups(&self, p: &StarPolynomial) -> BTreeMap<GroupKey, BTreeMap<usize, BigRational>> {
        let mut groups: BTreeMap<GroupKey, BTreeMap<usize, BigRational>> = BTreeMap::new();
        for (m, c) in p.terms() {
            let w = m.letters();
            for pos in 0..w.len().saturating_sub(1) {
                let prefix = || w[..pos].to_vec();
                let suffix = || w[pos + 2..].to_vec();
                match (w[pos], w[pos + 1]) {
                    (Letter::Edge(e, i), Letter::Star(f, j)) if e == f => {
                        let vertex = self.source[e];
                        if self.no_source_sum.contains(&vertex) {
                            continue;
                        }
                        let key = GroupKey::Source {
                            prefix: prefix(),
                            suffix: suffix(),
                            vertex,
                            i,
                            j,
                        };
                        groups.entry(key).or_default().insert(e, c.clone());
                    }
                    (Letter::Star(e, h), Letter::Edge(f, h2)) if h == h2 => {
                        if self.no_weight_sum.contains(&self.source[e]) {
                            continue;
                        }
                        let key = GroupKey::Weight {
                            prefix: prefix(),
                            suffix: suffix(),
                            e,
                            f,
                        };
                        groups.entry(key).or_default().insert(h as usize, c.clone());
                    }
                    _ => {}
                }
            }
        }
        groups
    }

    fn is_complete(&self, key: &GroupKey, members: &BTreeMap<usize, BigRational>) -> bool {
        let mut coeffs = members.values();
        let first = coeffs.next().expect("groups are nonempty");
        if coeffs.any(|c| c != first) {
            return false;
        }
        match key {
            GroupKey::Source { vertex, i, j, .. } => {
                let need = (*i).max(*j);
                let expected: Vec<usize> = self.out[*vertex]
                    .iter()
                    .copied()
                    .filter(|&e| self.weight[e] >= need)
                    .collect();
                members.keys().copied().eq(expected)
            }
            GroupKey::Weight { e, f, .. } => {
                let top = self.weight[*e].min(self.weight[*f]) as usize;
                members.keys().copied().eq(1..=top)
            }
        }
    }

    fn contract(
        &self,
        p: &mut StarPolynomial,
        key: &GroupKey,
        members: &BTreeMap<usize, BigRational>,
    ) {
        let c = members
            .values()
            .next()
            .expect("groups are nonempty")
            .clone();
        let rebuild = |prefix: &[Letter], mid: &[Letter], suffix: &[Letter]| {
            let mut w = prefix.to_vec();
            w.extend_from_slice(mid);
            w.extend_from_slice(suffix);
            w
        };
        let (prefix, suffix, result) = match key {
            GroupKey::Source {
                prefix,
                suffix,
                vertex,
                i,
                j,
            } => {
                for &e in members.keys() {
                    let w = rebuild(prefix, &[Letter::Edge(e, *i), Letter::Star(e, *j)], suffix);
                    p.add_term(StarMonomial::new(w), -c.clone());
                }
                (prefix, suffix, (i == j).then_some(Letter::Vertex(*vertex)))
            }
            GroupKey::Weight {
                prefix,
                suffix,
                e,
                f,
            } => {
                for &h in members.keys() {
                    let h = h as u32;
                    let w = rebuild(prefix, &[Letter::Star(*e, h), Letter::Edge(*f, h)], suffix);
                    p.add_term(StarMonomial::new(w), -c.clone());
                }
                (
                    prefix,
                    suffix,
                    (e == f).then_some(Letter::Vertex(self.range[*e])),
                )
            }
        };
        if let Some(l) = result {
            if let Some(m) = self.normalize_word(&rebuild(prefix, &[l], suffix)) {
                p.add_term(m, c);
            }
        }
    }
}

/// Rewrites `p` to a fixed point of the rule set.
pub fn reduce(
    p: &StarPolynomial,
    rules: &ReductionRuleSet,
) -> Result<StarPolynomial, SymbolicError> {
    let mut cur = rules.normalize(p);
    for _ in 0..rules.pass_cap {
        let groups = rules.groups(&cur);
        let found = match rules.order {
            ScanOrder::Forward => groups.iter().find(|(k, m)| rules.is_complete(k, m)),
            ScanOrder::Reverse => groups.iter().rev().find(|(k, m)| rules.is_complete(k, m)),
        };
        let Some((key, members)) = found else {
            return Ok(cur);
        };
        rules.contract(&mut cur, key, members);
    }
    Err(SymbolicError::NonTermination {
        passes: rules.pass_cap,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IdentityVerdict {
    Verified,
    /// First entry, in row-major order, whose difference does not reduce to zero.
    Counterexample {
        row: usize,
        col: usize,
        residual: StarPolynomial,
    },
}

impl IdentityVerdict {
    pub fn is_verified(&self) -> bool {
        matches!(self, Self::Verified)
    }
}

/// Reduces every entry of `lhs − rhs`.
pub fn verify_identity(
    lhs: &BlockMatrix,
    rhs: &BlockMatrix,
    rules: &ReductionRuleSet,
) -> Result<IdentityVerdict, SymbolicError> {
    let diff = lhs.sub(rhs)?;
    for (row, col, p) in diff.entries() {
        let residual = reduce(p, rules)?;
        if !residual.is_zero() {
            return Ok(IdentityVerdict::Counterexample { row, col, residual });
        }
    }
    Ok(IdentityVerdict::Verified)
}
