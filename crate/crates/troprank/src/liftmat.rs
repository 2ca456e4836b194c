//! Matrices over the Puiseux field: the carrier for candidate lifts, plus
//! exact classical rank via fraction-free elimination.
//!
//! Entries must be nonzero so that every entry has a well-defined order and
//! the order matrix is a tropical matrix. Rank is computed by clearing row
//! denominators (a rank-preserving line scaling) and running Bareiss
//! elimination over the polynomial ring, so no rational-function arithmetic
//! blows up mid-elimination.

use num_rational::BigRational;

use crate::poly::Poly;
use crate::puiseux::{PuiseuxError, PuiseuxScalar, Ramification};
use crate::semiring::{TropMatrix, TropScalar};
use std::fmt;

/// Matrix of nonzero Puiseux scalars, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct LiftMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<PuiseuxScalar>,
}

impl LiftMatrix {
    pub fn new(
        rows: usize,
        cols: usize,
        entries: Vec<PuiseuxScalar>,
    ) -> Result<Self, PuiseuxError> {
        if rows == 0 || cols == 0 || entries.len() != rows * cols {
            return Err(PuiseuxError::Dimension(format!(
                "{} entries for a {}x{} lift",
                entries.len(),
                rows,
                cols
            )));
        }
        for (idx, e) in entries.iter().enumerate() {
            if e.is_zero() {
                return Err(PuiseuxError::ZeroEntry {
                    row: idx / cols,
                    col: idx % cols,
                });
            }
        }
        Ok(LiftMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_rows(rows: Vec<Vec<PuiseuxScalar>>) -> Result<Self, PuiseuxError> {
        let m = rows.len();
        let n = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != n) {
            return Err(PuiseuxError::Dimension("ragged rows".to_string()));
        }
        Self::new(m, n, rows.into_iter().flatten().collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &PuiseuxScalar {
        &self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[PuiseuxScalar] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[PuiseuxScalar] {
        &self.entries
    }

    pub fn transpose(&self) -> LiftMatrix {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j).clone());
            }
        }
        LiftMatrix {
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> LiftMatrix {
        let mut entries = Vec::with_capacity(rows.len() * cols.len());
        for &i in rows {
            for &j in cols {
                entries.push(self.get(i, j).clone());
            }
        }
        LiftMatrix {
            rows: rows.len(),
            cols: cols.len(),
            entries,
        }
    }

    /// Common ramification of all entries.
    pub fn ram(&self) -> Result<Ramification, PuiseuxError> {
        let mut r = Ramification::new(1);
        for e in &self.entries {
            r = r.join(&e.ram())?;
        }
        Ok(r)
    }

    /// Entrywise order. Total because entries are nonzero.
    pub fn ord_matrix(&self) -> TropMatrix {
        let scalars = self
            .entries
            .iter()
            .map(|e| TropScalar::new(e.ord().expect("lift entries are nonzero")))
            .collect();
        TropMatrix::new(self.rows, self.cols, scalars).expect("shape preserved")
    }

    /// Multiply row `i` by the monomial coeff * t^exp. Orders in that row all
    /// shift by exp; the classical rank is unchanged.
    pub fn scale_row(
        &mut self,
        i: usize,
        exp: &BigRational,
        coeff: &BigRational,
    ) -> Result<(), PuiseuxError> {
        use num_traits::Zero;
        if coeff.is_zero() {
            return Err(PuiseuxError::DivisionByZero);
        }
        for j in 0..self.cols {
            let v = self.get(i, j).mul_monomial(exp, coeff.clone())?;
            self.entries[i * self.cols + j] = v;
        }
        Ok(())
    }

    /// Column analogue of `scale_row`.
    pub fn scale_col(
        &mut self,
        j: usize,
        exp: &BigRational,
        coeff: &BigRational,
    ) -> Result<(), PuiseuxError> {
        use num_traits::Zero;
        if coeff.is_zero() {
            return Err(PuiseuxError::DivisionByZero);
        }
        for i in 0..self.rows {
            let v = self.get(i, j).mul_monomial(exp, coeff.clone())?;
            self.entries[i * self.cols + j] = v;
        }
        Ok(())
    }

    /// Exact classical rank over the rational-function field.
    pub fn matrix_rank(&self) -> usize {
        let ram = self.ram().expect("entry ramifications join");
        let mut cleared: Vec<Vec<Poly>> = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let unified: Vec<PuiseuxScalar> = self
                .row(i)
                .iter()
                .map(|e| e.rescale(ram).expect("join is a common multiple"))
                .collect();
            // Row content: lcm of denominators; multiplying the row by it is
            // an invertible scaling, so rank is preserved.
            let mut l = Poly::one();
            for e in &unified {
                l = l.lcm(e.denominator());
            }
            cleared.push(
                unified
                    .iter()
                    .map(|e| e.numerator().mul(&l.exact_div(e.denominator())))
                    .collect(),
            );
        }
        bareiss_rank(cleared)
    }
}

impl fmt::Display for LiftMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(|e| e.to_string()).collect();
            writeln!(f, "[ {} ]", line.join(" ; "))?;
        }
        Ok(())
    }
}

/// Rank of a polynomial matrix by one-step fraction-free (Bareiss)
/// elimination: every division is exact, every pivot test is exact.
fn bareiss_rank(mut m: Vec<Vec<Poly>>) -> usize {
    let rows = m.len();
    let cols = if rows > 0 { m[0].len() } else { 0 };
    let mut rank = 0;
    let mut prev = Poly::one();
    while rank < rows && rank < cols {
        // Lowest-degree pivot keeps intermediate degrees small.
        let mut pivot: Option<(usize, usize, usize)> = None;
        for i in rank..rows {
            for j in rank..cols {
                if !m[i][j].is_zero() {
                    let d = m[i][j].deg().unwrap();
                    if pivot.map_or(true, |(pd, pi, pj)| (d, i, j) < (pd, pi, pj)) {
                        pivot = Some((d, i, j));
                    }
                }
            }
        }
        let Some((_, pi, pj)) = pivot else { break };
        m.swap(rank, pi);
        if pj != rank {
            for row in m.iter_mut() {
                row.swap(rank, pj);
            }
        }
        for i in rank + 1..rows {
            for j in rank + 1..cols {
                let t = m[rank][rank].mul(&m[i][j]).sub(&m[i][rank].mul(&m[rank][j]));
                m[i][j] = t.exact_div(&prev);
            }
            m[i][rank] = Poly::zero();
        }
        prev = m[rank][rank].clone();
        rank += 1;
    }
    rank
}

/// Solve the square system a * x = b over the Puiseux field, exactly.
/// Returns None when the system matrix is singular.
pub(crate) fn solve_linear(
    mut a: Vec<Vec<PuiseuxScalar>>,
    mut b: Vec<PuiseuxScalar>,
) -> Option<Vec<PuiseuxScalar>> {
    let n = a.len();
    debug_assert!(a.iter().all(|r| r.len() == n) && b.len() == n);
    for col in 0..n {
        let pivot = (col..n).find(|&i| !a[i][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = a[col][col].inv().expect("pivot is nonzero");
        for j in col..n {
            a[col][j] = a[col][j].mul(&inv);
        }
        b[col] = b[col].mul(&inv);
        for i in 0..n {
            if i != col && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for j in col..n {
                    let t = a[col][j].mul(&f);
                    a[i][j] = a[i][j].sub(&t);
                }
                let t = b[col].mul(&f);
                b[i] = b[i].sub(&t);
            }
        }
    }
    Some(b)
}
