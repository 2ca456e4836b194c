//! The min-plus (tropical) semiring over exact rationals, and dense matrices
//! over it.
//!
//! Semiring operations are `trop_add` (minimum) and `trop_mul` (classical
//! sum); the semiring has no infinite element here because every algorithm in
//! this crate works over finite entries only. Classical `+`/`-` are exposed
//! as std operators for offset bookkeeping (normalization, prescribed orders),
//! which is ordinary rational arithmetic, not the semiring product.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("matrix dimensions {rows}x{cols} do not match {expected} entries")]
    EntryCount {
        rows: usize,
        cols: usize,
        expected: usize,
    },
    #[error("matrix must be nonempty")]
    Empty,
    #[error("dimension mismatch: left is {lr}x{lc}, right is {rr}x{rc}")]
    DimMismatch {
        lr: usize,
        lc: usize,
        rr: usize,
        rc: usize,
    },
    #[error("index {index} out of range for {len} lines")]
    LineIndex { index: usize, len: usize },
}

/// Exact rational element of the min-plus semiring.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TropScalar(BigRational);

impl TropScalar {
    pub fn new(v: BigRational) -> Self {
        TropScalar(v)
    }

    pub fn from_int(v: i64) -> Self {
        TropScalar(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_fraction(num: i64, den: i64) -> Self {
        TropScalar(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// Multiplicative identity of the semiring (the rational 0).
    pub fn trop_one() -> Self {
        TropScalar(BigRational::zero())
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn into_value(self) -> BigRational {
        self.0
    }

    pub fn is_zero_value(&self) -> bool {
        self.0.is_zero()
    }

    /// Semiring addition: minimum.
    pub fn trop_add(&self, other: &TropScalar) -> TropScalar {
        if self.0 <= other.0 {
            self.clone()
        } else {
            other.clone()
        }
    }

    /// Semiring multiplication: classical sum.
    pub fn trop_mul(&self, other: &TropScalar) -> TropScalar {
        TropScalar(&self.0 + &other.0)
    }
}

impl fmt::Display for TropScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("invalid rational literal {input:?} (expected p or p/q with integer p, q)")]
pub struct ParseScalarError {
    pub input: String,
}

impl FromStr for TropScalar {
    type Err = ParseScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BigRational::from_str(s)
            .map(TropScalar)
            .map_err(|_| ParseScalarError {
                input: s.to_string(),
            })
    }
}

impl std::ops::Add for &TropScalar {
    type Output = TropScalar;
    fn add(self, rhs: &TropScalar) -> TropScalar {
        TropScalar(&self.0 + &rhs.0)
    }
}

impl std::ops::Sub for &TropScalar {
    type Output = TropScalar;
    fn sub(self, rhs: &TropScalar) -> TropScalar {
        TropScalar(&self.0 - &rhs.0)
    }
}

impl std::ops::Neg for &TropScalar {
    type Output = TropScalar;
    fn neg(self) -> TropScalar {
        TropScalar(-self.0.clone())
    }
}

/// Dense row-major matrix over the min-plus semiring.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TropMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<TropScalar>,
}

impl TropMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<TropScalar>) -> Result<Self, MatrixError> {
        if rows == 0 || cols == 0 {
            return Err(MatrixError::Empty);
        }
        if entries.len() != rows * cols {
            return Err(MatrixError::EntryCount {
                rows,
                cols,
                expected: rows * cols,
            });
        }
        Ok(TropMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows[0].len();
        assert!(rows.iter().all(|row| row.len() == c));
        TropMatrix {
            rows: r,
            cols: c,
            entries: rows
                .iter()
                .flat_map(|row| row.iter().map(|&v| TropScalar::from_int(v)))
                .collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &TropScalar {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: TropScalar) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[TropScalar] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<TropScalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> &[TropScalar] {
        &self.entries
    }

    pub fn transpose(&self) -> TropMatrix {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j).clone());
            }
        }
        TropMatrix {
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    /// Submatrix on the given row and column index lists (order preserved,
    /// duplicates allowed).
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> TropMatrix {
        assert!(!rows.is_empty() && !cols.is_empty());
        let entries = rows
            .iter()
            .flat_map(|&i| cols.iter().map(move |&j| self.get(i, j).clone()))
            .collect();
        TropMatrix {
            rows: rows.len(),
            cols: cols.len(),
            entries,
        }
    }

    pub fn drop_row(&self, i: usize) -> TropMatrix {
        let keep: Vec<usize> = (0..self.rows).filter(|&r| r != i).collect();
        let cols: Vec<usize> = (0..self.cols).collect();
        self.submatrix(&keep, &cols)
    }

    pub fn drop_col(&self, j: usize) -> TropMatrix {
        let rows: Vec<usize> = (0..self.rows).collect();
        let keep: Vec<usize> = (0..self.cols).filter(|&c| c != j).collect();
        self.submatrix(&rows, &keep)
    }

    /// Min-plus matrix product.
    pub fn trop_matmul(&self, other: &TropMatrix) -> Result<TropMatrix, MatrixError> {
        if self.cols != other.rows {
            return Err(MatrixError::DimMismatch {
                lr: self.rows,
                lc: self.cols,
                rr: other.rows,
                rc: other.cols,
            });
        }
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut best = self.get(i, 0).trop_mul(other.get(0, j));
                for k in 1..self.cols {
                    let cand = self.get(i, k).trop_mul(other.get(k, j));
                    best = best.trop_add(&cand);
                }
                entries.push(best);
            }
        }
        Ok(TropMatrix {
            rows: self.rows,
            cols: other.cols,
            entries,
        })
    }

    /// Entrywise minimum of two equal-shape matrices.
    pub fn entrywise_min(&self, other: &TropMatrix) -> Result<TropMatrix, MatrixError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(MatrixError::DimMismatch {
                lr: self.rows,
                lc: self.cols,
                rr: other.rows,
                rc: other.cols,
            });
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.trop_add(b))
            .collect();
        Ok(TropMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    /// Shift each row i by `shifts.rows[i]` and each column j by
    /// `shifts.cols[j]` (classical subtraction; the inverse of `unshift`).
    pub fn shift_lines(&self, shifts: &LineShifts) -> TropMatrix {
        assert_eq!(shifts.rows.len(), self.rows);
        assert_eq!(shifts.cols.len(), self.cols);
        let mut entries = Vec::with_capacity(self.entries.len());
        for i in 0..self.rows {
            for j in 0..self.cols {
                entries.push(&(self.get(i, j) - &shifts.rows[i]) - &shifts.cols[j]);
            }
        }
        TropMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    pub fn unshift_lines(&self, shifts: &LineShifts) -> TropMatrix {
        self.shift_lines(&shifts.negated())
    }

    pub fn min_entry(&self) -> &TropScalar {
        self.entries.iter().min().unwrap()
    }

    pub fn max_entry(&self) -> &TropScalar {
        self.entries.iter().max().unwrap()
    }
}

impl fmt::Display for TropMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// Outer min-plus sum a ⊙ b^T: entry (i, j) is a_i + b_j.
pub fn outer_sum(a: &[TropScalar], b: &[TropScalar]) -> TropMatrix {
    assert!(!a.is_empty() && !b.is_empty());
    let entries = a
        .iter()
        .flat_map(|ai| b.iter().map(move |bj| ai.trop_mul(bj)))
        .collect();
    TropMatrix {
        rows: a.len(),
        cols: b.len(),
        entries,
    }
}

/// Per-line additive offsets recorded by `normalize` (and by the lift
/// pipeline's hyperplane scaling); zero on untouched lines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineShifts {
    pub rows: Vec<TropScalar>,
    pub cols: Vec<TropScalar>,
}

impl LineShifts {
    pub fn zero(rows: usize, cols: usize) -> Self {
        LineShifts {
            rows: vec![TropScalar::trop_one(); rows],
            cols: vec![TropScalar::trop_one(); cols],
        }
    }

    pub fn negated(&self) -> LineShifts {
        LineShifts {
            rows: self.rows.iter().map(|v| -v).collect(),
            cols: self.cols.iter().map(|v| -v).collect(),
        }
    }
}

/// Subtract the minimum of each selected row, then of each selected column,
/// so every selected line has minimum 0. Returns the normalized matrix and
/// the offsets that were subtracted; `unshift_lines` inverts exactly.
pub fn normalize(
    a: &TropMatrix,
    row_set: &[usize],
    col_set: &[usize],
) -> Result<(TropMatrix, LineShifts), MatrixError> {
    let mut shifts = LineShifts::zero(a.rows(), a.cols());
    for &i in row_set {
        if i >= a.rows() {
            return Err(MatrixError::LineIndex {
                index: i,
                len: a.rows(),
            });
        }
        shifts.rows[i] = a.row(i).iter().min().unwrap().clone();
    }
    let after_rows = a.shift_lines(&LineShifts {
        rows: shifts.rows.clone(),
        cols: vec![TropScalar::trop_one(); a.cols()],
    });
    for &j in col_set {
        if j >= a.cols() {
            return Err(MatrixError::LineIndex {
                index: j,
                len: a.cols(),
            });
        }
        shifts.cols[j] = after_rows.col(j).into_iter().min().unwrap();
    }
    Ok((a.shift_lines(&shifts), shifts))
}

/// Zero positions of a matrix, plus the columns that contain at least two
/// zeros ("twin zeroes", the normalization device used by the lift pipeline).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZeroPattern {
    pub positions: BTreeSet<(usize, usize)>,
    pub zeros_by_column: Vec<Vec<usize>>,
    pub twin_columns: Vec<usize>,
}

pub fn zero_pattern(a: &TropMatrix) -> ZeroPattern {
    let mut positions = BTreeSet::new();
    let mut zeros_by_column = vec![Vec::new(); a.cols()];
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            if a.get(i, j).is_zero_value() {
                positions.insert((i, j));
                zeros_by_column[j].push(i);
            }
        }
    }
    let twin_columns = zeros_by_column
        .iter()
        .enumerate()
        .filter(|(_, rows)| rows.len() >= 2)
        .map(|(j, _)| j)
        .collect();
    ZeroPattern {
        positions,
        zeros_by_column,
        twin_columns,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trop_ops_on_scalars() {
        let a = TropScalar::from_int(3);
        let b = TropScalar::from_int(5);
        assert_eq!(a.trop_add(&b), TropScalar::from_int(3));
        assert_eq!(a.trop_mul(&b), TropScalar::from_int(8));
        let h = TropScalar::from_fraction(1, 2);
        assert_eq!(h.trop_add(&a), h);
        assert_eq!(h.trop_mul(&h), TropScalar::from_int(1));
    }

    #[test]
    fn scalar_parsing_round_trip() {
        for s in ["0", "7", "-3", "5/4", "-11/6"] {
            let v: TropScalar = s.parse().unwrap();
            assert_eq!(v.to_string(), s);
        }
        assert!("1.5".parse::<TropScalar>().is_err());
        assert!("x".parse::<TropScalar>().is_err());
    }

    #[test]
    fn matmul_symmetric_example() {
        let a = TropMatrix::from_ints(&[&[0, 1], &[1, 0]]);
        let p = a.trop_matmul(&a).unwrap();
        assert_eq!(p, a);
    }

    #[test]
    fn matmul_shape_check() {
        let a = TropMatrix::from_ints(&[&[0, 1], &[1, 0]]);
        let b = TropMatrix::from_ints(&[&[0, 1, 2]]);
        assert!(a.trop_matmul(&b).is_err());
    }

    #[test]
    fn outer_sum_example() {
        let a = [TropScalar::from_int(0), TropScalar::from_int(1)];
        let b = [TropScalar::from_int(0), TropScalar::from_int(2)];
        assert_eq!(
            outer_sum(&a, &b),
            TropMatrix::from_ints(&[&[0, 2], &[1, 3]])
        );
    }

    #[test]
    fn normalize_rows_example() {
        let a = TropMatrix::from_ints(&[&[3, 5], &[2, 2]]);
        let (n, shifts) = normalize(&a, &[0, 1], &[]).unwrap();
        assert_eq!(n, TropMatrix::from_ints(&[&[0, 2], &[0, 0]]));
        assert_eq!(
            shifts.rows,
            vec![TropScalar::from_int(3), TropScalar::from_int(2)]
        );
        assert_eq!(n.unshift_lines(&shifts), a);
    }

    #[test]
    fn normalize_cols_example() {
        let a = TropMatrix::from_ints(&[&[1, 4], &[2, 3]]);
        let (n, shifts) = normalize(&a, &[], &[0, 1]).unwrap();
        assert_eq!(n, TropMatrix::from_ints(&[&[0, 1], &[1, 0]]));
        assert_eq!(
            shifts.cols,
            vec![TropScalar::from_int(1), TropScalar::from_int(3)]
        );
        assert_eq!(n.unshift_lines(&shifts), a);
    }

    #[test]
    fn zero_pattern_twin_column() {
        let a = TropMatrix::from_ints(&[&[0, 0], &[0, 1]]);
        let zp = zero_pattern(&a);
        assert_eq!(
            zp.positions.iter().cloned().collect::<Vec<_>>(),
            vec![(0, 0), (0, 1), (1, 0)]
        );
        assert_eq!(zp.twin_columns, vec![0]);
        assert_eq!(zp.zeros_by_column[0], vec![0, 1]);
    }

    #[test]
    fn transpose_and_submatrix() {
        let a = TropMatrix::from_ints(&[&[1, 2, 3], &[4, 5, 6]]);
        assert_eq!(
            a.transpose(),
            TropMatrix::from_ints(&[&[1, 4], &[2, 5], &[3, 6]])
        );
        assert_eq!(
            a.submatrix(&[1], &[0, 2]),
            TropMatrix::from_ints(&[&[4, 6]])
        );
        assert_eq!(a.drop_row(0), TropMatrix::from_ints(&[&[4, 5, 6]]));
        assert_eq!(a.drop_col(1), TropMatrix::from_ints(&[&[1, 3], &[4, 6]]));
    }
}
