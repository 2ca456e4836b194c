//! Tropical rank by minor enumeration, and the rank-chain consistency check.
//!
//! The tropical rank is the largest r such that some r x r submatrix is
//! tropically nonsingular. A greedy submatrix-growth pass finds a nonsingular
//! minor quickly as a shortcut; descending exhaustive enumeration remains the
//! authority that no larger nonsingular minor exists.

use crate::assignment::trop_det;
use crate::barvinok::{barvinok_rank, BarvinokOutcome};
use crate::semiring::TropMatrix;
use itertools::Itertools;
use std::fmt;
use thiserror::Error;

/// A maximal nonsingular minor: `rows` x `cols` selects it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TropicalRankWitness {
    pub rank: usize,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

fn minor_is_nonsingular(a: &TropMatrix, rows: &[usize], cols: &[usize]) -> bool {
    !trop_det(&a.submatrix(rows, cols))
        .expect("minor is square")
        .singular
}

fn greedy_grow(a: &TropMatrix) -> (Vec<usize>, Vec<usize>) {
    let mut rows = vec![0usize];
    let mut cols = vec![0usize];
    'grow: loop {
        for r in 0..a.rows() {
            if rows.contains(&r) {
                continue;
            }
            for c in 0..a.cols() {
                if cols.contains(&c) {
                    continue;
                }
                let mut nr = rows.clone();
                let mut nc = cols.clone();
                nr.push(r);
                nc.push(c);
                nr.sort_unstable();
                nc.sort_unstable();
                if minor_is_nonsingular(a, &nr, &nc) {
                    rows = nr;
                    cols = nc;
                    continue 'grow;
                }
            }
        }
        return (rows, cols);
    }
}

/// Largest r with a nonsingular r x r minor, with a witness minor.
pub fn tropical_rank(a: &TropMatrix) -> TropicalRankWitness {
    let rmax = a.rows().min(a.cols());
    let (grows, gcols) = greedy_grow(a);
    let g = grows.len();
    for r in (1..=rmax).rev() {
        if r == g {
            // Every minor larger than g has been enumerated and found
            // singular; the greedy minor witnesses rank g.
            return TropicalRankWitness {
                rank: g,
                rows: grows,
                cols: gcols,
            };
        }
        for rows in (0..a.rows()).combinations(r) {
            for cols in (0..a.cols()).combinations(r) {
                if minor_is_nonsingular(a, &rows, &cols) {
                    return TropicalRankWitness {
                        rank: r,
                        rows,
                        cols,
                    };
                }
            }
        }
    }
    unreachable!("a 1x1 minor is always nonsingular");
}

/// Kapranov-rank bounds handed to `check_chain`: `lower` is the tropical
/// rank, `upper` comes from the lift engine, `constructive` records whether
/// the upper bound is backed by a verified lift (rather than cited theory).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KapranovAssessment {
    pub lower: usize,
    pub upper: usize,
    pub constructive: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainReport {
    pub rows: usize,
    pub cols: usize,
    pub tropical: usize,
    /// None when the matrix exceeds the Barvinok engine's dimension guard;
    /// the chain is then checked against min(m, n) only.
    pub barvinok: Option<usize>,
    pub kapranov_lower: usize,
    pub kapranov_upper: usize,
    pub min_dim: usize,
    pub constructive: bool,
}

impl fmt::Display for ChainReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}x{}: tropical {} <= kapranov [{}, {}{}] <= barvinok {} <= {}",
            self.rows,
            self.cols,
            self.tropical,
            self.kapranov_lower,
            self.kapranov_upper,
            if self.constructive { "" } else { "*" },
            self.barvinok
                .map_or_else(|| "?".to_string(), |b| b.to_string()),
            self.min_dim
        )
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("rank chain violated: {message}\nmatrix:\n{matrix}")]
pub struct ChainViolation {
    pub message: String,
    pub matrix: String,
}

/// Recompute the tropical and Barvinok ranks and assert the full chain
/// 1 <= rk_t <= lower <= upper <= rk_B <= min(m, n); additionally require the
/// upper bound to collapse onto rk_t when rk_t is 1 or min(m, n) and a
/// constructive lift exists. Any violated inequality is a hard failure that
/// names the matrix.
pub fn check_chain(
    a: &TropMatrix,
    kapranov: &KapranovAssessment,
) -> Result<ChainReport, ChainViolation> {
    let min_dim = a.rows().min(a.cols());
    let rk_t = tropical_rank(a).rank;
    let rk_b = if a.rows() <= 6 && a.cols() <= 6 {
        match barvinok_rank(a, min_dim).expect("dimension guard checked") {
            BarvinokOutcome::Exact(w) => Some(w.rank),
            BarvinokOutcome::ExceedsMax { .. } => {
                unreachable!("min(m,n) outer sums always suffice")
            }
        }
    } else {
        None
    };

    let fail = |message: String| {
        Err(ChainViolation {
            message,
            matrix: a.to_string(),
        })
    };

    if rk_t < 1 {
        return fail(format!("tropical rank {} < 1", rk_t));
    }
    if rk_t > kapranov.lower {
        return fail(format!(
            "tropical rank {} exceeds kapranov lower bound {}",
            rk_t, kapranov.lower
        ));
    }
    if kapranov.lower > kapranov.upper {
        return fail(format!(
            "kapranov lower bound {} exceeds upper bound {}",
            kapranov.lower, kapranov.upper
        ));
    }
    if let Some(b) = rk_b {
        if kapranov.upper > b {
            return fail(format!(
                "kapranov upper bound {} exceeds barvinok rank {}",
                kapranov.upper, b
            ));
        }
        if b > min_dim {
            return fail(format!("barvinok rank {} exceeds min(m,n) {}", b, min_dim));
        }
    } else if kapranov.upper > min_dim {
        return fail(format!(
            "kapranov upper bound {} exceeds min(m,n) {}",
            kapranov.upper, min_dim
        ));
    }
    if (rk_t == 1 || rk_t == min_dim) && kapranov.constructive && kapranov.upper != rk_t {
        return fail(format!(
            "tropical rank {} forces equal kapranov rank, got upper bound {}",
            rk_t, kapranov.upper
        ));
    }

    Ok(ChainReport {
        rows: a.rows(),
        cols: a.cols(),
        tropical: rk_t,
        barvinok: rk_b,
        kapranov_lower: kapranov.lower,
        kapranov_upper: kapranov.upper,
        min_dim,
        constructive: kapranov.constructive,
    })
}
