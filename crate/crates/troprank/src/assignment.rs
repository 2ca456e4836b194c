//! Tropical determinant by optimal assignment.
//!
//! The tropical determinant of an r x r matrix is the minimum over all
//! permutations of the diagonal sum; the matrix is tropically singular when
//! that minimum is attained by at least two permutations. The minimum and an
//! attaining permutation come from an O(r^3) shortest-augmenting-path
//! assignment solver over exact rationals; singularity is decided by r
//! re-solves, each forbidding one cell of the optimal permutation.

use crate::semiring::{TropMatrix, TropScalar};
use itertools::Itertools;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DetError {
    #[error("tropical determinant requires a square matrix, got {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },
    #[error("permutation enumeration is guarded at size <= {max}, got {size}")]
    EnumerationGuard { size: usize, max: usize },
}

const ENUMERATION_MAX: usize = 7;

/// Outcome of a tropical determinant computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DetResult {
    pub value: TropScalar,
    /// Column of each row in an optimal permutation (lexicographically
    /// smallest among optima by the solver's deterministic tie-breaking).
    pub witness: Vec<usize>,
    pub singular: bool,
    /// A second optimal permutation when singular.
    pub second_witness: Option<Vec<usize>>,
}

const FREE: usize = usize::MAX;

/// Minimum-cost perfect assignment on an n x n cost function; None cost means
/// the cell is forbidden. Returns None when no assignment avoids the
/// forbidden cells. Ties are broken toward smaller column indices, so the
/// result is deterministic.
fn solve_assignment<F>(n: usize, cost: F) -> Option<(BigRational, Vec<usize>)>
where
    F: Fn(usize, usize) -> Option<BigRational>,
{
    // Shortest augmenting path with potentials; column n is the virtual
    // start column for the row being inserted.
    let mut u = vec![BigRational::zero(); n];
    let mut v = vec![BigRational::zero(); n + 1];
    let mut row_of_col = vec![FREE; n + 1];

    for row in 0..n {
        row_of_col[n] = row;
        let mut j0 = n;
        let mut minv: Vec<Option<BigRational>> = vec![None; n];
        let mut way = vec![n; n];
        let mut used = vec![false; n + 1];

        loop {
            used[j0] = true;
            let i0 = row_of_col[j0];
            let mut delta: Option<BigRational> = None;
            let mut j1 = FREE;
            for j in 0..n {
                if used[j] {
                    continue;
                }
                if let Some(c) = cost(i0, j) {
                    let cur = &(&c - &u[i0]) - &v[j];
                    if minv[j].as_ref().map_or(true, |m| &cur < m) {
                        minv[j] = Some(cur);
                        way[j] = j0;
                    }
                }
                if let Some(m) = &minv[j] {
                    if delta.as_ref().map_or(true, |d| m < d) {
                        delta = Some(m.clone());
                        j1 = j;
                    }
                }
            }
            let delta = delta?;
            for j in 0..=n {
                if used[j] {
                    let r = row_of_col[j];
                    u[r] += &delta;
                    v[j] -= &delta;
                } else if let Some(m) = &mut minv[j] {
                    *m -= &delta;
                }
            }
            j0 = j1;
            if row_of_col[j0] == FREE {
                break;
            }
        }

        // Augment along the alternating path back to the virtual column.
        while j0 != n {
            let j1 = way[j0];
            row_of_col[j0] = row_of_col[j1];
            j0 = j1;
        }
    }

    let mut col_of_row = vec![FREE; n];
    for j in 0..n {
        col_of_row[row_of_col[j]] = j;
    }
    let mut total = BigRational::zero();
    for (i, &j) in col_of_row.iter().enumerate() {
        total += cost(i, j)?;
    }
    Some((total, col_of_row))
}

fn square_size(a: &TropMatrix) -> Result<usize, DetError> {
    if a.rows() != a.cols() {
        return Err(DetError::NonSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    Ok(a.rows())
}

/// Tropical determinant with optimal-permutation witness and exact
/// singularity flag.
pub fn trop_det(a: &TropMatrix) -> Result<DetResult, DetError> {
    let n = square_size(a)?;
    let (value, witness) = solve_assignment(n, |i, j| Some(a.get(i, j).value().clone()))
        .expect("complete matrix always has an assignment");

    // Forbidding one optimal cell at a time finds a second optimum iff the
    // minimum is attained at least twice.
    let mut second = None;
    for i in 0..n {
        let banned = (i, witness[i]);
        if let Some((alt_value, alt_perm)) = solve_assignment(n, |r, c| {
            if (r, c) == banned {
                None
            } else {
                Some(a.get(r, c).value().clone())
            }
        }) {
            if alt_value == value {
                second = Some(alt_perm);
                break;
            }
        }
    }

    Ok(DetResult {
        value: TropScalar::new(value),
        witness,
        singular: second.is_some(),
        second_witness: second,
    })
}

/// Same engine as `trop_det`; named for call sites that only care about the
/// singularity decision.
pub fn is_singular(a: &TropMatrix) -> Result<DetResult, DetError> {
    trop_det(a)
}

/// Number of permutations attaining the tropical determinant, by full
/// enumeration; guarded at size 7.
pub fn count_optimal_permutations(a: &TropMatrix) -> Result<u64, DetError> {
    let n = square_size(a)?;
    if n > ENUMERATION_MAX {
        return Err(DetError::EnumerationGuard {
            size: n,
            max: ENUMERATION_MAX,
        });
    }
    let mut best: Option<BigRational> = None;
    let mut count = 0u64;
    for perm in (0..n).permutations(n) {
        let mut sum = BigRational::zero();
        for (i, &j) in perm.iter().enumerate() {
            sum += a.get(i, j).value();
        }
        match &best {
            Some(b) if sum > *b => {}
            Some(b) if sum == *b => count += 1,
            _ => {
                best = Some(sum);
                count = 1;
            }
        }
    }
    Ok(count)
}
