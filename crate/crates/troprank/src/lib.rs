//! Exact arithmetic for min-plus matrices: tropical determinants and ranks,
//! Barvinok decompositions, and certified Kapranov-rank upper bounds via
//! explicitly constructed Puiseux-series lifts.
//!
//! Everything is computed over exact rationals. A lift is a matrix of
//! Puiseux scalars (rational functions in a fractional power of the
//! parameter) whose entrywise orders reproduce the tropical matrix; its
//! classical rank, computed fraction-free, bounds the Kapranov rank from
//! above. The centerpiece is [`lift::pipeline::kapranov_rank3_5col`], which
//! certifies that tropical rank 3 forces Kapranov rank 3 for matrices with
//! a five-line side by building and verifying such a lift.

// Index arithmetic mirrors the row/column formulas; iterator rewrites of
// these loops obscure which axis is which.
#![allow(clippy::needless_range_loop)]

pub mod assignment;
pub mod barvinok;
pub mod diffcon;
pub mod lift;
pub mod liftmat;
pub mod poly;
pub mod puiseux;
pub mod rank;
pub mod sample;
pub mod semiring;

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

pub use assignment::{
    count_optimal_permutations, is_singular, trop_det, DetError, DetResult,
};
pub use barvinok::{
    barvinok_rank, witness_matches, BarvinokError, BarvinokOutcome, BarvinokWitness,
};
pub use diffcon::DiffConstraints;
pub use lift::block::{find_block_split, lift_block_pattern, BlockSplit};
pub use lift::develop::{plan_generator, solve_coefficients, DevelopPlan, Line, PlanOrigin};
pub use lift::hyperplane::{
    find_hyperplane, lift_hyperplane_base, lift_hyperplane_base_seeded, HyperplaneWitness,
};
pub use lift::pipeline::{kapranov_rank3_5col, kapranov_rank3_5col_seeded};
pub use lift::{
    kapranov_bounds, kapranov_bounds_seeded, lift_full, lift_rank1, verify_lift,
    KapranovBounds, KapranovCertificate, KapranovUpper, LiftError, TraceStep,
    DEFAULT_RETRIES, DEFAULT_SEED,
};
pub use liftmat::LiftMatrix;
pub use poly::Poly;
pub use puiseux::{PuiseuxError, PuiseuxScalar, Ramification};
pub use rank::{
    check_chain, tropical_rank, ChainReport, ChainViolation, KapranovAssessment,
    TropicalRankWitness,
};
pub use sample::{sample_outer_sum, sample_uniform, sample_with_rank, SampleError};
pub use semiring::{
    normalize, outer_sum, zero_pattern, LineShifts, MatrixError, TropMatrix, TropScalar,
    ZeroPattern,
};
