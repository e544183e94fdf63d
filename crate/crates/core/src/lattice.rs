//! Exact integer matrices, Hermite normal form for lattice membership, and
//! Smith normal form with recorded unimodular transforms.

use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Dense row-major matrix of arbitrary-precision integers.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: alloc::vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows; all rows must have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<Vec<BigInt>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            data.extend(r);
        }
        Self {
            rows: n,
            cols,
            data,
        }
    }

    pub fn from_i64_rows(cols: usize, rows: &[&[i64]]) -> Self {
        Self::from_rows(
            cols,
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[BigInt]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn push_row(&mut self, row: Vec<BigInt>) {
        assert_eq!(row.len(), self.cols);
        self.data.extend(row);
        self.rows += 1;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * &other[(k, j)];
                }
            }
        }
        out
    }

    /// Returns the submatrix keeping the listed rows and columns.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut out = Self::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                out[(a, b)] = self[(i, j)].clone();
            }
        }
        out
    }

    /// Determinant via fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[(k, k)].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !m[(i, k)].is_zero()) else {
                    return BigInt::zero();
                };
                m.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)]) / &prev;
                    m[(i, j)] = v;
                }
            }
            prev = m[(k, k)].clone();
        }
        sign * m[(n - 1, n - 1)].clone()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// `row[dst] += factor * row[src]`
    fn add_row_multiple(&mut self, dst: usize, src: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = &self.data[src * self.cols + j] * factor;
            self.data[dst * self.cols + j] += v;
        }
    }

    /// `col[dst] += factor * col[src]`
    fn add_col_multiple(&mut self, dst: usize, src: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = &self.data[i * self.cols + src] * factor;
            self.data[i * self.cols + dst] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let x = &mut self.data[i * self.cols + j];
            *x = -core::mem::take(x);
        }
    }
}

impl core::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl core::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            f.write_str("[")?;
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            f.write_str("]\n")?;
        }
        Ok(())
    }
}

/// Integer lattice given by a row-style Hermite normal form basis.
///
/// Basis rows are in echelon form; each pivot is positive and the entries above
/// it lie in `[0, pivot)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    basis: IntMatrix,
    pivots: Vec<usize>,
}

impl Lattice {
    /// Lattice spanned by the rows of `generators`.
    pub fn from_generators(generators: &IntMatrix) -> Self {
        let n = generators.cols();
        let mut m = generators.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..n {
            if r == m.rows() {
                break;
            }
            loop {
                let best = (r..m.rows())
                    .filter(|&i| !m[(i, col)].is_zero())
                    .min_by(|&a, &b| m[(a, col)].abs().cmp(&m[(b, col)].abs()));
                let Some(p) = best else { break };
                m.swap_rows(r, p);
                let mut clean = true;
                for i in r + 1..m.rows() {
                    if m[(i, col)].is_zero() {
                        continue;
                    }
                    let q = &m[(i, col)] / &m[(r, col)];
                    m.add_row_multiple(i, r, &-q);
                    clean &= m[(i, col)].is_zero();
                }
                if clean {
                    break;
                }
            }
            if m[(r, col)].is_zero() {
                continue;
            }
            if m[(r, col)].is_negative() {
                m.negate_row(r);
            }
            for i in 0..r {
                let q = m[(i, col)].div_floor(&m[(r, col)]);
                m.add_row_multiple(i, r, &-q);
            }
            pivots.push(col);
            r += 1;
        }
        let keep: Vec<usize> = (0..r).collect();
        let all_cols: Vec<usize> = (0..n).collect();
        Self {
            basis: m.select(&keep, &all_cols),
            pivots,
        }
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Coefficients `c` with `Σ c_i · basis_i = x`, or `None` if `x` is not in
    /// the lattice.
    pub fn solve(&self, x: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(x.len(), self.dim());
        let mut rest: Vec<BigInt> = x.to_vec();
        let mut coeffs = Vec::with_capacity(self.rank());
        for (r, &col) in self.pivots.iter().enumerate() {
            if rest[..col].iter().any(|v| !v.is_zero()) {
                return None;
            }
            let (q, rem) = rest[col].div_rem(&self.basis[(r, col)]);
            if !rem.is_zero() {
                return None;
            }
            for (j, b) in self.basis.row(r).iter().enumerate() {
                rest[j] -= &q * b;
            }
            coeffs.push(q);
        }
        rest.iter().all(Zero::is_zero).then_some(coeffs)
    }

    pub fn contains(&self, x: &[BigInt]) -> bool {
        self.solve(x).is_some()
    }
}

/// Smith normal form `U·A·V = D` with unimodular `U`, `V`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfDecomposition {
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub d: IntMatrix,
    /// Nonzero diagonal entries of `D`, positive, each dividing the next.
    pub invariant_factors: Vec<BigInt>,
    pub rank: usize,
}

impl SnfDecomposition {
    /// Replays `U·A·V = D` and checks the shape of `D`.
    pub fn verify(&self, a: &IntMatrix) -> bool {
        if self.u.mul(a).mul(&self.v) != self.d {
            return false;
        }
        for i in 0..self.d.rows() {
            for j in 0..self.d.cols() {
                let x = &self.d[(i, j)];
                let expected_nonzero = i == j && i < self.rank;
                if x.is_zero() == expected_nonzero {
                    return false;
                }
                if expected_nonzero && *x != self.invariant_factors[i] {
                    return false;
                }
            }
        }
        self.invariant_factors.iter().all(Signed::is_positive)
            && self
                .invariant_factors
                .windows(2)
                .all(|w| (&w[1] % &w[0]).is_zero())
    }
}

/// Computes the Smith normal form, always pivoting on an entry of minimal
/// absolute value in the remaining submatrix.
pub fn smith_normal_form(a: &IntMatrix) -> SnfDecomposition {
    let (m, n) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);
    let mut t = 0;
    while t < m.min(n) {
        let mut found = false;
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    let x = &d[(i, j)];
                    if x.is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| x.abs() < d[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            found = true;
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..m {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = -(&d[(i, t)] / &d[(t, t)]);
                d.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                clean &= d[(i, t)].is_zero();
            }
            for j in t + 1..n {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = -(&d[(t, j)] / &d[(t, t)]);
                d.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                clean &= d[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }
            let pivot = d[(t, t)].clone();
            let offender =
                (t + 1..m).find(|&i| (t + 1..n).any(|j| !(&d[(i, j)] % &pivot).is_zero()));
            match offender {
                Some(i) => {
                    d.add_row_multiple(t, i, &BigInt::one());
                    u.add_row_multiple(t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if !found {
            break;
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
    let invariant_factors: Vec<BigInt> = (0..t).map(|i| d[(i, i)].clone()).collect();
    let snf = SnfDecomposition {
        u,
        v,
        d,
        rank: invariant_factors.len(),
        invariant_factors,
    };
    debug_assert!(snf.verify(a), "Smith normal form replay failed");
    snf
}

/// Finitely generated abelian group `ℤ^free_rank ⊕ ⊕ ℤ/torsion_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AbelianGroupInvariants {
    pub free_rank: usize,
    /// Entries greater than one, each dividing the next.
    #[cfg_attr(feature = "serde", serde(with = "crate::bigint_serde::vec"))]
    pub torsion: Vec<BigInt>,
}

impl AbelianGroupInvariants {
    /// Invariants of `ℤ^generators / rowspace(relations)`.
    pub fn of_presentation(generators: usize, relations: &IntMatrix) -> (Self, SnfDecomposition) {
        assert_eq!(relations.cols(), generators);
        let snf = smith_normal_form(relations);
        let inv = Self {
            free_rank: generators - snf.rank,
            torsion: snf
                .invariant_factors
                .iter()
                .filter(|d| !d.is_one())
                .cloned()
                .collect(),
        };
        (inv, snf)
    }

    pub fn free(rank: usize) -> Self {
        Self {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }
}

/// Abelian groups are isomorphic iff their canonical invariants agree.
pub fn group_iso_check(a: &AbelianGroupInvariants, b: &AbelianGroupInvariants) -> bool {
    a == b
}

impl fmt::Display for AbelianGroupInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<alloc::string::String> = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(alloc::format!("Z^{r}")),
        }
        for t in &self.torsion {
            parts.push(alloc::format!("Z/{t}"));
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn single_row() {
        let a = IntMatrix::from_i64_rows(3, &[&[-1, 2, -1]]);
        let snf = smith_normal_form(&a);
        assert_eq!(snf.invariant_factors, big(&[1]));
        assert_eq!(snf.rank, 1);
        assert!(snf.verify(&a));
    }

    #[test]
    fn zero_and_empty() {
        let a = IntMatrix::zeros(2, 3);
        let snf = smith_normal_form(&a);
        assert!(snf.invariant_factors.is_empty());
        assert_eq!(snf.rank, 0);
        let e = IntMatrix::zeros(0, 2);
        let (inv, _) = AbelianGroupInvariants::of_presentation(2, &e);
        assert_eq!(inv, AbelianGroupInvariants::free(2));
    }

    #[test]
    fn already_diagonal() {
        let a = IntMatrix::from_i64_rows(2, &[&[2, 0], &[0, 6]]);
        assert_eq!(smith_normal_form(&a).invariant_factors, big(&[2, 6]));
        let b = IntMatrix::from_i64_rows(2, &[&[6, 0], &[0, 4]]);
        assert_eq!(smith_normal_form(&b).invariant_factors, big(&[2, 12]));
    }

    #[test]
    fn leavitt_torsion() {
        let a = IntMatrix::from_i64_rows(1, &[&[-3]]);
        let (inv, _) = AbelianGroupInvariants::of_presentation(1, &a);
        assert_eq!(inv.free_rank, 0);
        assert_eq!(inv.torsion, big(&[3]));
        assert_eq!(alloc::format!("{inv}"), "Z/3");
    }

    #[test]
    fn hermite_membership() {
        let l = Lattice::from_generators(&IntMatrix::from_i64_rows(2, &[&[2, 4], &[0, 6]]));
        assert_eq!(l.rank(), 2);
        assert!(l.contains(&big(&[2, 10])));
        assert!(!l.contains(&big(&[1, 0])));
        assert!(!l.contains(&big(&[0, 2])));
        let c = l.solve(&big(&[4, 2])).unwrap();
        let mut recon = big(&[0, 0]);
        for (i, ci) in c.iter().enumerate() {
            for (j, r) in recon.iter_mut().enumerate() {
                *r += ci * &l.basis()[(i, j)];
            }
        }
        assert_eq!(recon, big(&[4, 2]));
    }

    #[test]
    fn determinant_small() {
        let a = IntMatrix::from_i64_rows(3, &[&[0, 2, 1], &[1, 0, 0], &[3, 1, 1]]);
        assert_eq!(a.determinant(), BigInt::from(-1));
    }

    fn matrix() -> impl Strategy<Value = IntMatrix> {
        (0usize..4, 0usize..4).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-6i64..=6, r * c).prop_map(move |v| {
                IntMatrix::from_rows(
                    c,
                    v.chunks(c.max(1))
                        .take(r)
                        .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
                        .collect(),
                )
            })
        })
    }

    proptest! {
        #[test]
        fn snf_replays_and_is_unimodular(a in matrix()) {
            let snf = smith_normal_form(&a);
            prop_assert!(snf.verify(&a));
            prop_assert_eq!(snf.u.determinant().abs(), BigInt::one());
            prop_assert_eq!(snf.v.determinant().abs(), BigInt::one());
        }

        #[test]
        fn invariants_stable_under_permutation(a in matrix(), seed in any::<u64>()) {
            let rows: Vec<usize> = {
                let mut r: Vec<usize> = (0..a.rows()).collect();
                r.rotate_left((seed as usize) % a.rows().max(1));
                r.reverse();
                r
            };
            let cols: Vec<usize> = {
                let mut c: Vec<usize> = (0..a.cols()).collect();
                c.rotate_left((seed as usize >> 8) % a.cols().max(1));
                c
            };
            let p = a.select(&rows, &cols);
            let (x, _) = AbelianGroupInvariants::of_presentation(a.cols(), &a);
            let (y, _) = AbelianGroupInvariants::of_presentation(p.cols(), &p);
            prop_assert_eq!(x, y);
        }

        #[test]
        fn hermite_contains_generators(a in matrix(), coeffs in proptest::collection::vec(-3i64..=3, 4)) {
            let l = Lattice::from_generators(&a);
            let mut x = vec![BigInt::zero(); a.cols()];
            for (i, row) in a.row_iter().enumerate() {
                prop_assert!(l.contains(row));
                for (j, e) in row.iter().enumerate() {
                    x[j] += e * coeffs[i];
                }
            }
            prop_assert!(l.contains(&x));
        }
    }
}
