//! Deterministic sample matrices for tests, the corpus command, and
//! benchmarks. Every generator is a pure function of its seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::rank::tropical_rank;
use crate::semiring::{outer_sum, TropMatrix, TropScalar};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SampleError {
    #[error(
        "no {rows}x{cols} matrix of tropical rank {rank} found in {attempts} attempts"
    )]
    Unrealizable {
        rows: usize,
        cols: usize,
        rank: usize,
        attempts: usize,
    },
}

/// Entries drawn uniformly from `lo..=hi`.
pub fn sample_uniform(rows: usize, cols: usize, lo: i64, hi: i64, seed: u64) -> TropMatrix {
    assert!(rows > 0 && cols > 0 && lo <= hi);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let entries = (0..rows * cols)
        .map(|_| TropScalar::from_int(rng.gen_range(lo..=hi)))
        .collect();
    TropMatrix::new(rows, cols, entries).expect("positive dimensions")
}

/// A min-plus outer sum a_i + b_j with entries drawn from `0..=range`;
/// tropical rank 1 by construction.
pub fn sample_outer_sum(rows: usize, cols: usize, range: i64, seed: u64) -> TropMatrix {
    assert!(rows > 0 && cols > 0 && range >= 0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a: Vec<TropScalar> = (0..rows)
        .map(|_| TropScalar::from_int(rng.gen_range(0..=range)))
        .collect();
    let b: Vec<TropScalar> = (0..cols)
        .map(|_| TropScalar::from_int(rng.gen_range(0..=range)))
        .collect();
    outer_sum(&a, &b)
}

const RANK_SAMPLE_ATTEMPTS: usize = 500;

/// A matrix of tropical rank exactly `rank`: the entrywise minimum of
/// `rank` outer sums (so the Barvinok rank, and with it the tropical rank,
/// is at most `rank`), resampled until the rank is exact. The entry range
/// widens slowly across attempts.
pub fn sample_with_rank(
    rows: usize,
    cols: usize,
    rank: usize,
    seed: u64,
) -> Result<TropMatrix, SampleError> {
    assert!(rank >= 1 && rank <= rows.min(cols));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 0..RANK_SAMPLE_ATTEMPTS {
        let range = 3 + (attempt / 40) as i64;
        let mut m: Option<TropMatrix> = None;
        for _ in 0..rank {
            let a: Vec<TropScalar> = (0..rows)
                .map(|_| TropScalar::from_int(rng.gen_range(0..=range)))
                .collect();
            let b: Vec<TropScalar> = (0..cols)
                .map(|_| TropScalar::from_int(rng.gen_range(0..=range)))
                .collect();
            let o = outer_sum(&a, &b);
            m = Some(match m {
                None => o,
                Some(prev) => prev.entrywise_min(&o).expect("same shape"),
            });
        }
        let m = m.expect("rank is at least 1");
        if tropical_rank(&m).rank == rank {
            return Ok(m);
        }
    }
    Err(SampleError::Unrealizable {
        rows,
        cols,
        rank,
        attempts: RANK_SAMPLE_ATTEMPTS,
    })
}
