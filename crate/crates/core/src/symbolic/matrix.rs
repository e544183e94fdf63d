use alloc::vec::Vec;

use super::poly::{Letter, StarPolynomial};
use super::SymbolicError;
use crate::graph::{VertexIdx, VertexStrata, WeightedGraph};

/// Rectangular matrix of star polynomials, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<StarPolynomial>,
}

impl BlockMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: alloc::vec![StarPolynomial::zero(); rows * cols],
        }
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> StarPolynomial,
    ) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self {
            rows,
            cols,
            entries,
        }
    }

    /// `diag(p, …, p)` of size `n`.
    pub fn scalar(n: usize, p: &StarPolynomial) -> Self {
        Self::from_fn(n, n, |i, j| {
            if i == j {
                p.clone()
            } else {
                StarPolynomial::zero()
            }
        })
    }

    /// Diagonal matrix with the given entries.
    pub fn diagonal(entries: &[StarPolynomial]) -> Self {
        let n = entries.len();
        Self::from_fn(n, n, |i, j| {
            if i == j {
                entries[i].clone()
            } else {
                StarPolynomial::zero()
            }
        })
    }

    /// Block-diagonal matrix.
    pub fn direct_sum(blocks: &[&BlockMatrix]) -> Self {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    *out.get_mut(r0 + i, c0 + j) = b.get(i, j).clone();
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// `(self | other)`.
    pub fn hcat(&self, other: &Self) -> Result<Self, SymbolicError> {
        if self.rows != other.rows {
            return Err(SymbolicError::DimensionMismatch {
                left: self.shape(),
                right: other.shape(),
            });
        }
        Ok(Self::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                other.get(i, j - self.cols).clone()
            }
        }))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> &StarPolynomial {
        &self.entries[i * self.cols + j]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut StarPolynomial {
        &mut self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &StarPolynomial)> {
        self.entries
            .iter()
            .enumerate()
            .map(move |(k, p)| (k / self.cols.max(1), k % self.cols.max(1), p))
    }

    pub fn mul(&self, other: &Self) -> Result<Self, SymbolicError> {
        if self.cols != other.rows {
            return Err(SymbolicError::DimensionMismatch {
                left: self.shape(),
                right: other.shape(),
            });
        }
        Ok(Self::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).fold(StarPolynomial::zero(), |acc, k| {
                acc.add(&self.get(i, k).mul(other.get(k, j)))
            })
        }))
    }

    fn zip(
        &self,
        other: &Self,
        f: impl Fn(&StarPolynomial, &StarPolynomial) -> StarPolynomial,
    ) -> Result<Self, SymbolicError> {
        if self.shape() != other.shape() {
            return Err(SymbolicError::DimensionMismatch {
                left: self.shape(),
                right: other.shape(),
            });
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self, SymbolicError> {
        self.zip(other, StarPolynomial::add)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SymbolicError> {
        self.zip(other, StarPolynomial::sub)
    }
}

/// Transpose followed by the involution on every entry.
pub fn star_transpose(m: &BlockMatrix) -> BlockMatrix {
    BlockMatrix::from_fn(m.cols, m.rows, |i, j| m.get(j, i).star())
}

fn emitting_strata(g: &WeightedGraph, v: &str) -> Result<VertexStrata, SymbolicError> {
    let s = g.strata(v)?;
    if s.out_degree() == 0 {
        return Err(SymbolicError::EmptySource { vertex: v.into() });
    }
    Ok(s)
}

/// Entry `e^{j}_{i}` of `A(v)` (both 1-based), zero when `i > w(e^j)`.
fn a_entry(g: &WeightedGraph, s: &VertexStrata, i: u32, j: usize) -> StarPolynomial {
    let e = s.ordered_edges[j - 1];
    if i > g.edge(e).weight {
        StarPolynomial::zero()
    } else {
        StarPolynomial::letter(Letter::Edge(e, i))
    }
}

/// `A(v)`: the `w(v) × n(v)` matrix with entry `(i, j) = e^{j}_i`.
pub fn build_a(g: &WeightedGraph, v: &str) -> Result<BlockMatrix, SymbolicError> {
    let s = emitting_strata(g, v)?;
    Ok(a_of_strata(g, &s))
}

pub fn a_of_strata(g: &WeightedGraph, s: &VertexStrata) -> BlockMatrix {
    BlockMatrix::from_fn(s.max_weight() as usize, s.out_degree(), |i, j| {
        a_entry(g, s, i as u32 + 1, j + 1)
    })
}

/// `A^{n_{l'}, n_{t'}}_{w_l, w_t}(v)`: rows `w_l+1 … w_t`, columns
/// `n_{l'}+1 … n_{t'}` of `A(v)`.
pub fn block(
    g: &WeightedGraph,
    v: &str,
    (l, t): (usize, usize),
    (lp, tp): (usize, usize),
) -> Result<BlockMatrix, SymbolicError> {
    let s = emitting_strata(g, v)?;
    block_of_strata(g, &s, (l, t), (lp, tp))
}

pub fn block_of_strata(
    g: &WeightedGraph,
    s: &VertexStrata,
    (l, t): (usize, usize),
    (lp, tp): (usize, usize),
) -> Result<BlockMatrix, SymbolicError> {
    if !(l < t && t <= s.k && lp < tp && tp <= s.k) {
        return Err(SymbolicError::IndexOutOfRange {
            rows: (l, t),
            cols: (lp, tp),
            k: s.k,
        });
    }
    let (w_l, w_t) = (s.weights[l], s.weights[t]);
    let (n_lp, n_tp) = (s.counts[lp], s.counts[tp]);
    Ok(BlockMatrix::from_fn(
        (w_t - w_l) as usize,
        n_tp - n_lp,
        |i, j| a_entry(g, s, w_l + i as u32 + 1, n_lp + j + 1),
    ))
}

pub(crate) fn vertex_poly(v: VertexIdx) -> StarPolynomial {
    StarPolynomial::letter(Letter::Vertex(v))
}
