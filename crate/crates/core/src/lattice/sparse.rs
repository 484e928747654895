//! Sparse integer matrices and unit-pivot elimination.
//!
//! Boundary matrices of the simplicial models have a handful of `±1`
//! entries per column. Elimination pivots on unit entries first (which
//! never changes invariant factors), choosing columns with the fewest
//! nonzeros and, inside a column, the unit entry in the sparsest row. What
//! remains is handed to the dense Smith normal form. Arithmetic runs in
//! `i64` with overflow detection and restarts in `BigInt` when needed.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::matrix::IntMatrix;
use super::snf;
use crate::error::{Error, Result};

/// Column-major sparse matrix with machine-integer entries.
///
/// Entries are exact; anything computed from them is promoted to `BigInt`
/// whenever `i64` would overflow.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    columns: Vec<Vec<(usize, i64)>>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            columns: vec![Vec::new(); cols],
        }
    }

    /// Builds a matrix from per-column `(row, value)` lists. Duplicate rows
    /// within a column are summed and zeros dropped.
    pub fn from_columns(rows: usize, columns: Vec<Vec<(usize, i64)>>) -> Result<Self> {
        let mut out = Vec::with_capacity(columns.len());
        for (j, mut col) in columns.into_iter().enumerate() {
            col.sort_by_key(|e| e.0);
            let mut merged: Vec<(usize, i64)> = Vec::with_capacity(col.len());
            for (r, v) in col {
                if r >= rows {
                    return Err(Error::DimensionMismatch(format!(
                        "row {r} out of range in column {j}"
                    )));
                }
                match merged.last_mut() {
                    Some(last) if last.0 == r => {
                        last.1 = last.1.checked_add(v).ok_or_else(|| {
                            Error::DimensionMismatch("entry overflow".into())
                        })?
                    }
                    _ => merged.push((r, v)),
                }
            }
            merged.retain(|e| e.1 != 0);
            out.push(merged);
        }
        Ok(SparseMatrix { rows, columns: out })
    }

    /// Converts a dense matrix; fails if an entry does not fit in `i64`.
    pub fn from_dense(m: &IntMatrix) -> Result<Self> {
        let mut cols = Vec::with_capacity(m.cols());
        for j in 0..m.cols() {
            let mut col = Vec::new();
            for i in 0..m.rows() {
                let x = &m[(i, j)];
                if !x.is_zero() {
                    let v = x.to_i64().ok_or_else(|| {
                        Error::DimensionMismatch("entry too large for sparse storage".into())
                    })?;
                    col.push((i, v));
                }
            }
            cols.push(col);
        }
        Ok(SparseMatrix {
            rows: m.rows(),
            columns: cols,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, j: usize) -> &[(usize, i64)] {
        &self.columns[j]
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn to_dense(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.rows, self.cols());
        for (j, col) in self.columns.iter().enumerate() {
            for &(i, v) in col {
                m[(i, j)] = BigInt::from(v);
            }
        }
        m
    }

    /// True when `self * rhs` is the zero matrix. Dimensions must agree.
    pub fn composes_to_zero(&self, rhs: &SparseMatrix) -> Result<bool> {
        if self.cols() != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot compose {}x{} after {}x{}",
                self.rows,
                self.cols(),
                rhs.rows,
                rhs.cols()
            )));
        }
        let mut acc: Vec<BigInt> = vec![BigInt::zero(); self.rows];
        let mut touched: Vec<usize> = Vec::new();
        for col in &rhs.columns {
            for &(k, a) in col {
                for &(i, b) in &self.columns[k] {
                    if acc[i].is_zero() {
                        touched.push(i);
                    }
                    acc[i] += BigInt::from(a) * BigInt::from(b);
                }
            }
            let mut ok = true;
            for &i in &touched {
                if !acc[i].is_zero() {
                    ok = false;
                }
                acc[i] = BigInt::zero();
            }
            touched.clear();
            if !ok {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Result of eliminating a sparse matrix: the number of unit pivots taken
/// and the dense block that is left.
struct Reduction {
    unit_pivots: usize,
    residual: IntMatrix,
}

impl Reduction {
    fn invariant_factors(&self) -> Vec<BigInt> {
        let mut out = vec![BigInt::one(); self.unit_pivots];
        out.extend(snf::invariant_factors(&self.residual));
        out
    }
}

/// Nonzero invariant factors (Smith diagonal) of a sparse matrix.
pub fn sparse_invariant_factors(m: &SparseMatrix) -> Vec<BigInt> {
    let cols: Vec<Vec<(usize, i64)>> = m.columns.clone();
    match eliminate::<i64>(m.rows, cols) {
        Some(r) => r.invariant_factors(),
        None => {
            let cols: Vec<Vec<(usize, BigInt)>> = m
                .columns
                .iter()
                .map(|c| c.iter().map(|&(r, v)| (r, BigInt::from(v))).collect())
                .collect();
            eliminate::<BigInt>(m.rows, cols)
                .expect("bigint elimination cannot overflow")
                .invariant_factors()
        }
    }
}

pub fn sparse_rank(m: &SparseMatrix) -> usize {
    sparse_invariant_factors(m).len()
}

trait Coeff: Clone + PartialEq + std::fmt::Debug {
    fn is_zero_c(&self) -> bool;
    fn is_unit(&self) -> bool;
    /// `a - m * b`, or `None` on overflow.
    fn mul_sub(a: &Self, m: &Self, b: &Self) -> Option<Self>;
    fn mul_c(a: &Self, b: &Self) -> Option<Self>;
    /// `-(m * b)`, or `None` on overflow.
    fn neg_mul(m: &Self, b: &Self) -> Option<Self>;
    fn to_big(&self) -> BigInt;
}

impl Coeff for i64 {
    fn is_zero_c(&self) -> bool {
        *self == 0
    }
    fn is_unit(&self) -> bool {
        *self == 1 || *self == -1
    }
    fn mul_sub(a: &Self, m: &Self, b: &Self) -> Option<Self> {
        m.checked_mul(*b).and_then(|p| a.checked_sub(p))
    }
    fn mul_c(a: &Self, b: &Self) -> Option<Self> {
        a.checked_mul(*b)
    }
    fn neg_mul(m: &Self, b: &Self) -> Option<Self> {
        m.checked_mul(*b).and_then(i64::checked_neg)
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Coeff for BigInt {
    fn is_zero_c(&self) -> bool {
        self.is_zero()
    }
    fn is_unit(&self) -> bool {
        self.abs().is_one()
    }
    fn mul_sub(a: &Self, m: &Self, b: &Self) -> Option<Self> {
        Some(a - m * b)
    }
    fn mul_c(a: &Self, b: &Self) -> Option<Self> {
        Some(a * b)
    }
    fn neg_mul(m: &Self, b: &Self) -> Option<Self> {
        Some(-(m * b))
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

fn eliminate<T: Coeff>(rows: usize, mut cols: Vec<Vec<(usize, T)>>) -> Option<Reduction> {
    let ncols = cols.len();
    let mut row_index: Vec<Vec<usize>> = vec![Vec::new(); rows];
    for (j, col) in cols.iter().enumerate() {
        for (r, _) in col {
            row_index[*r].push(j);
        }
    }
    let mut col_alive = vec![true; ncols];
    let mut heap: BinaryHeap<Reverse<(usize, usize)>> = cols
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_empty())
        .map(|(j, c)| Reverse((c.len(), j)))
        .collect();
    let mut pivots = 0usize;

    while let Some(Reverse((len, c))) = heap.pop() {
        if !col_alive[c] || cols[c].len() != len {
            continue;
        }
        if len == 0 {
            col_alive[c] = false;
            continue;
        }
        // unit entry in the sparsest row
        let mut best: Option<(usize, usize)> = None;
        for (pos, (r, v)) in cols[c].iter().enumerate() {
            if v.is_unit() {
                let weight = row_index[*r].len();
                if best.is_none_or(|(_, w)| weight < w) {
                    best = Some((pos, weight));
                }
            }
        }
        let Some((pos, _)) = best else {
            continue;
        };
        let (prow, pval) = cols[c][pos].clone();

        let mut targets = std::mem::take(&mut row_index[prow]);
        targets.sort_unstable();
        targets.dedup();
        let pivot_col = std::mem::take(&mut cols[c]);
        for &c2 in &targets {
            if c2 == c || !col_alive[c2] {
                continue;
            }
            let Ok(k) = cols[c2].binary_search_by_key(&prow, |e| e.0) else {
                continue;
            };
            // pval is its own inverse
            let m = T::mul_c(&cols[c2][k].1, &pval)?;
            let merged = axpy(&cols[c2], &m, &pivot_col, &mut row_index, c2)?;
            cols[c2] = merged;
            heap.push(Reverse((cols[c2].len(), c2)));
        }
        col_alive[c] = false;
        pivots += 1;
    }

    // Gather the residual block.
    let live: Vec<usize> = (0..ncols)
        .filter(|&j| col_alive[j] && !cols[j].is_empty())
        .collect();
    let mut live_rows: Vec<usize> = live
        .iter()
        .flat_map(|&j| cols[j].iter().map(|e| e.0))
        .collect();
    live_rows.sort_unstable();
    live_rows.dedup();
    let mut residual = IntMatrix::zeros(live_rows.len(), live.len());
    for (jj, &j) in live.iter().enumerate() {
        for (r, v) in &cols[j] {
            let ii = live_rows.binary_search(r).expect("row gathered");
            residual[(ii, jj)] = v.to_big();
        }
    }
    Some(Reduction {
        unit_pivots: pivots,
        residual,
    })
}

/// `target - m * pivot` as a sorted sparse column; records fill-in rows.
fn axpy<T: Coeff>(
    target: &[(usize, T)],
    m: &T,
    pivot: &[(usize, T)],
    row_index: &mut [Vec<usize>],
    col: usize,
) -> Option<Vec<(usize, T)>> {
    let mut out = Vec::with_capacity(target.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < target.len() || j < pivot.len() {
        let ti = target.get(i).map(|e| e.0);
        let pj = pivot.get(j).map(|e| e.0);
        match (ti, pj) {
            (Some(a), Some(b)) if a == b => {
                let v = T::mul_sub(&target[i].1, m, &pivot[j].1)?;
                if !v.is_zero_c() {
                    out.push((a, v));
                }
                i += 1;
                j += 1;
            }
            (Some(a), Some(b)) if a < b => {
                out.push(target[i].clone());
                i += 1;
            }
            (Some(_), None) => {
                out.push(target[i].clone());
                i += 1;
            }
            (_, Some(b)) => {
                let v = T::neg_mul(m, &pivot[j].1)?;
                if !v.is_zero_c() {
                    row_index[b].push(col);
                    out.push((b, v));
                }
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_augmentation_row() {
        let m = SparseMatrix::from_columns(1, (0..4).map(|_| vec![(0, 1)]).collect()).unwrap();
        assert_eq!(sparse_invariant_factors(&m), vec![BigInt::one()]);
    }

    #[test]
    fn matches_dense_on_small_matrix() {
        let d = IntMatrix::from_rows(&[[2, 4, 0], [6, 8, 1], [0, 0, 3]]);
        let s = SparseMatrix::from_dense(&d).unwrap();
        assert_eq!(sparse_invariant_factors(&s), snf::invariant_factors(&d));
    }
}
