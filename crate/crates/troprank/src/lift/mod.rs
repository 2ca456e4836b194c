//! Kapranov-rank certificates: construction and exact verification of
//! Puiseux lifts.
//!
//! A certificate pairs a tropical matrix with a lift whose entrywise order
//! reproduces the matrix and whose classical rank is at most the claimed
//! bound. Both checks are exact, so a verified certificate cannot be wrong;
//! every constructor in this module and its submodules funnels through
//! `verify_lift` before returning.

pub mod block;
pub mod develop;
pub mod hyperplane;
pub mod pipeline;

use num_rational::BigRational;
use rand::Rng;
use rand_chacha::{rand_core::SeedableRng, ChaCha8Rng};
use std::fmt;
use thiserror::Error;

use crate::assignment::DetError;
use crate::barvinok::{barvinok_rank, BarvinokError, BarvinokOutcome};
use crate::liftmat::LiftMatrix;
use crate::poly::rat_int;
use crate::puiseux::{PuiseuxError, PuiseuxScalar, Ramification};
use crate::rank::{tropical_rank, KapranovAssessment};
use crate::semiring::{MatrixError, TropMatrix};

/// Default generic-redraw budget for seeded constructions.
pub const DEFAULT_RETRIES: usize = 10_000;
/// Default seed for the deterministic constructions.
pub const DEFAULT_SEED: u64 = 0;

#[derive(Debug, Error)]
pub enum LiftError {
    #[error("lift is {lift_rows}x{lift_cols} but the matrix is {rows}x{cols}")]
    Shape {
        lift_rows: usize,
        lift_cols: usize,
        rows: usize,
        cols: usize,
    },
    #[error("matrix is not an outer sum, so it has no rank-1 lift")]
    NotRankOne,
    #[error("tropical rank is {found}, construction requires {required}")]
    RankPrecondition { found: usize, required: usize },
    #[error("matrix shape {rows}x{cols} is outside the 5-line pipeline domain")]
    PipelineShape { rows: usize, cols: usize },
    #[error("matrix does not match the two-row/three-column block pattern")]
    PatternMismatch,
    #[error("hyperplane witness does not match the matrix")]
    WitnessMismatch,
    #[error("generic-redraw budget ({budget}) exhausted at: {context}")]
    BudgetExhausted { budget: usize, context: String },
    #[error(
        "pipeline exhausted every develop plan; offending submatrix:\n{submatrix}"
    )]
    PipelineExhausted { submatrix: String },
    #[error(transparent)]
    Puiseux(#[from] PuiseuxError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Det(#[from] DetError),
    #[error(transparent)]
    Barvinok(#[from] BarvinokError),
}

/// One recorded decision of a certificate construction, for the serialized
/// plan trace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub depth: usize,
    pub action: String,
}

impl fmt::Display for TraceStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "depth {}: {}", self.depth, self.action)
    }
}

/// A claimed Kapranov upper bound together with its evidence.
#[derive(Debug, Clone)]
pub struct KapranovCertificate {
    pub matrix: TropMatrix,
    pub rank_bound: usize,
    pub lift: LiftMatrix,
    pub verified: bool,
    pub seed: u64,
    pub trace: Vec<TraceStep>,
}

/// Exactly re-check a lift against a matrix: entrywise order equality and
/// classical rank at most `rank_bound`. The outcome lands in `verified`, not
/// in an error, so failed verification is observable data.
pub fn verify_lift(
    lift: &LiftMatrix,
    matrix: &TropMatrix,
    rank_bound: usize,
) -> Result<KapranovCertificate, LiftError> {
    if lift.rows() != matrix.rows() || lift.cols() != matrix.cols() {
        return Err(LiftError::Shape {
            lift_rows: lift.rows(),
            lift_cols: lift.cols(),
            rows: matrix.rows(),
            cols: matrix.cols(),
        });
    }
    let verified = lift.ord_matrix() == *matrix && lift.matrix_rank() <= rank_bound;
    Ok(KapranovCertificate {
        matrix: matrix.clone(),
        rank_bound,
        lift: lift.clone(),
        verified,
        seed: DEFAULT_SEED,
        trace: Vec::new(),
    })
}

/// Shared state of the randomized constructions: seeded generator, redraw
/// budget, and the decision trace.
pub(crate) struct GenCtx {
    rng: ChaCha8Rng,
    seed: u64,
    budget: usize,
    spent: usize,
    pub trace: Vec<TraceStep>,
}

impl GenCtx {
    pub fn new(seed: u64, budget: usize) -> Self {
        GenCtx {
            rng: ChaCha8Rng::seed_from_u64(seed),
            seed,
            budget,
            spent: 0,
            trace: Vec::new(),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Nonzero integer coefficient. The range widens as the budget is spent
    /// so stubborn coincidences cannot recur forever.
    pub fn draw(&mut self) -> BigRational {
        let range = 40 + 40 * (self.spent / 64) as i64;
        loop {
            let v = self.rng.gen_range(-range..=range);
            if v != 0 {
                return rat_int(v);
            }
        }
    }

    /// Spend one unit of budget on a retry or plan attempt.
    pub fn charge(&mut self, context: &str) -> Result<(), LiftError> {
        if self.spent >= self.budget {
            return Err(LiftError::BudgetExhausted {
                budget: self.budget,
                context: context.to_string(),
            });
        }
        self.spent += 1;
        Ok(())
    }

    pub fn note(&mut self, depth: usize, action: impl Into<String>) {
        self.trace.push(TraceStep {
            depth,
            action: action.into(),
        });
    }
}

/// Ramification clearing the denominators of every entry of `m`.
pub(crate) fn matrix_ram(m: &TropMatrix) -> Result<Ramification, PuiseuxError> {
    Ramification::clearing(m.entries().iter().map(|e| e.value()))
}

/// Entrywise generic monomial lift c_ij * t^(M_ij). Orders are exact by
/// construction; the rank can be anything up to min(m, n).
pub(crate) fn generic_monomial_lift(
    m: &TropMatrix,
    ctx: &mut GenCtx,
) -> Result<LiftMatrix, LiftError> {
    let ram = matrix_ram(m)?;
    let mut entries = Vec::with_capacity(m.rows() * m.cols());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            entries.push(PuiseuxScalar::monomial(
                ram,
                m.get(i, j).value(),
                ctx.draw(),
            )?);
        }
    }
    Ok(LiftMatrix::new(m.rows(), m.cols(), entries)?)
}

/// Monomial lift of an outer-sum matrix: F_ij = t^(a_i + b_j), rank 1.
pub fn lift_rank1(m: &TropMatrix) -> Result<KapranovCertificate, LiftError> {
    // Candidate decomposition pinned at the first row and column.
    let base = m.get(0, 0);
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let expected = &(m.get(i, 0) + m.get(0, j)) - base;
            if *m.get(i, j) != expected {
                return Err(LiftError::NotRankOne);
            }
        }
    }
    let ram = matrix_ram(m)?;
    let one = BigRational::from_integer(1.into());
    let mut entries = Vec::with_capacity(m.rows() * m.cols());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            entries.push(PuiseuxScalar::monomial(
                ram,
                m.get(i, j).value(),
                one.clone(),
            )?);
        }
    }
    let lift = LiftMatrix::new(m.rows(), m.cols(), entries)?;
    let mut cert = verify_lift(&lift, m, 1)?;
    debug_assert!(cert.verified, "monomial outer lift always verifies");
    cert.trace.push(TraceStep {
        depth: 0,
        action: "outer-sum monomial lift".to_string(),
    });
    Ok(cert)
}

/// Generic monomial lift verified at the unconditional bound min(m, n).
pub fn lift_full(m: &TropMatrix) -> Result<KapranovCertificate, LiftError> {
    let mut ctx = GenCtx::new(DEFAULT_SEED, DEFAULT_RETRIES);
    let lift = generic_monomial_lift(m, &mut ctx)?;
    let bound = m.rows().min(m.cols());
    let mut cert = verify_lift(&lift, m, bound)?;
    debug_assert!(cert.verified, "any lift has rank at most min(m, n)");
    cert.trace.push(TraceStep {
        depth: 0,
        action: format!("generic monomial lift at bound {}", bound),
    });
    Ok(cert)
}

/// Lift built from a Barvinok decomposition: the sum of one generic monomial
/// outer product per decomposition term. Entry orders reproduce the matrix
/// because the term minima do, and generic coefficients prevent leading-term
/// cancellation; rank is at most the number of terms.
pub(crate) fn lift_from_outer_terms(
    m: &TropMatrix,
    pairs: &[(Vec<crate::semiring::TropScalar>, Vec<crate::semiring::TropScalar>)],
    ctx: &mut GenCtx,
) -> Result<KapranovCertificate, LiftError> {
    let mut exps: Vec<BigRational> = m.entries().iter().map(|e| e.value().clone()).collect();
    for (a, b) in pairs {
        exps.extend(a.iter().map(|v| v.value().clone()));
        exps.extend(b.iter().map(|v| v.value().clone()));
    }
    let ram = Ramification::clearing(exps.iter())?;
    loop {
        ctx.charge("outer-term lift coefficients")?;
        let coeffs: Vec<BigRational> = (0..pairs.len()).map(|_| ctx.draw()).collect();
        let mut entries = Vec::with_capacity(m.rows() * m.cols());
        let mut ok = true;
        'build: for i in 0..m.rows() {
            for j in 0..m.cols() {
                let mut acc = PuiseuxScalar::zero(ram);
                for (k, (a, b)) in pairs.iter().enumerate() {
                    let e = a[i].value() + b[j].value();
                    acc = acc.add(&PuiseuxScalar::monomial(ram, &e, coeffs[k].clone())?);
                }
                match acc.ord() {
                    Some(o) if o == *m.get(i, j).value() => entries.push(acc),
                    _ => {
                        ok = false;
                        break 'build;
                    }
                }
            }
        }
        if !ok {
            continue;
        }
        let lift = LiftMatrix::new(m.rows(), m.cols(), entries)?;
        let mut cert = verify_lift(&lift, m, pairs.len())?;
        if cert.verified {
            cert.seed = ctx.seed();
            cert.trace.push(TraceStep {
                depth: 0,
                action: format!("sum of {} monomial outer products", pairs.len()),
            });
            return Ok(cert);
        }
    }
}

/// How an upper bound on the Kapranov rank is supported.
#[derive(Debug, Clone)]
pub enum KapranovUpper {
    /// A verified lift at the stated bound.
    Certified(KapranovCertificate),
    /// Tropical rank 2 forces Kapranov rank 2, but no lift is constructed.
    TheoremCited { upper: usize },
    /// Dimension bound only (matrix outside every constructive branch).
    Interval { upper: usize },
}

#[derive(Debug, Clone)]
pub struct KapranovBounds {
    pub lower: usize,
    pub upper: KapranovUpper,
}

impl KapranovBounds {
    pub fn upper_value(&self) -> usize {
        match &self.upper {
            KapranovUpper::Certified(c) => c.rank_bound,
            KapranovUpper::TheoremCited { upper } | KapranovUpper::Interval { upper } => *upper,
        }
    }

    pub fn constructive(&self) -> bool {
        matches!(&self.upper, KapranovUpper::Certified(_))
    }

    pub fn certificate(&self) -> Option<&KapranovCertificate> {
        match &self.upper {
            KapranovUpper::Certified(c) => Some(c),
            _ => None,
        }
    }

    pub fn assessment(&self) -> KapranovAssessment {
        KapranovAssessment {
            lower: self.lower,
            upper: self.upper_value(),
            constructive: self.constructive(),
        }
    }
}

/// Kapranov bounds with the strongest available evidence, using the default
/// seed and budget.
pub fn kapranov_bounds(a: &TropMatrix) -> Result<KapranovBounds, LiftError> {
    kapranov_bounds_seeded(a, DEFAULT_SEED, DEFAULT_RETRIES)
}

/// Dispatch: rank 1 and full rank get direct lifts, tropical rank 3 with a
/// 5-line side goes through the pipeline, rank 2 is reported without a lift,
/// and anything else small enough gets a Barvinok-decomposition lift.
pub fn kapranov_bounds_seeded(
    a: &TropMatrix,
    seed: u64,
    retries: usize,
) -> Result<KapranovBounds, LiftError> {
    let rk_t = tropical_rank(a).rank;
    let min_dim = a.rows().min(a.cols());
    let upper = if rk_t == 1 {
        KapranovUpper::Certified(lift_rank1(a)?)
    } else if rk_t == min_dim {
        KapranovUpper::Certified(lift_full(a)?)
    } else if rk_t == 3 && (a.rows() == 5 || a.cols() == 5) {
        KapranovUpper::Certified(pipeline::kapranov_rank3_5col_seeded(a, seed, retries)?)
    } else if rk_t == 2 {
        KapranovUpper::TheoremCited { upper: 2 }
    } else if a.rows() <= 6 && a.cols() <= 6 {
        match barvinok_rank(a, min_dim)? {
            BarvinokOutcome::Exact(w) => {
                let mut ctx = GenCtx::new(seed, retries);
                KapranovUpper::Certified(lift_from_outer_terms(a, &w.pairs, &mut ctx)?)
            }
            BarvinokOutcome::ExceedsMax { .. } => {
                unreachable!("min(m, n) outer sums always suffice")
            }
        }
    } else {
        KapranovUpper::Interval { upper: min_dim }
    };
    Ok(KapranovBounds {
        lower: rk_t,
        upper,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semiring::outer_sum;
    use crate::semiring::TropScalar;

    fn ints(rows: &[&[i64]]) -> TropMatrix {
        TropMatrix::from_ints(rows)
    }

    #[test]
    fn verify_accepts_the_unit_lift() {
        let m = ints(&[&[0]]);
        let lift = LiftMatrix::new(
            1,
            1,
            vec![PuiseuxScalar::one(Ramification::new(1))],
        )
        .unwrap();
        let cert = verify_lift(&lift, &m, 1).unwrap();
        assert!(cert.verified);
    }

    #[test]
    fn verify_separates_rank_bounds() {
        // [[1, 1], [1, 1 + t]]: orders all 0, classical rank 2.
        let ram = Ramification::new(1);
        let one = PuiseuxScalar::one(ram);
        let one_plus_t = one.add(
            &PuiseuxScalar::monomial(ram, &rat_int(1), rat_int(1)).unwrap(),
        );
        let lift = LiftMatrix::new(
            2,
            2,
            vec![one.clone(), one.clone(), one.clone(), one_plus_t],
        )
        .unwrap();
        let zeros = ints(&[&[0, 0], &[0, 0]]);
        assert!(verify_lift(&lift, &zeros, 2).unwrap().verified);
        assert!(!verify_lift(&lift, &zeros, 1).unwrap().verified);
    }

    #[test]
    fn verify_rejects_shape_mismatch() {
        let m = ints(&[&[0, 0]]);
        let lift = LiftMatrix::new(
            1,
            1,
            vec![PuiseuxScalar::one(Ramification::new(1))],
        )
        .unwrap();
        assert!(matches!(
            verify_lift(&lift, &m, 1),
            Err(LiftError::Shape { .. })
        ));
    }

    #[test]
    fn rank1_lift_of_outer_sum() {
        let m = ints(&[&[0, 2], &[1, 3]]);
        let cert = lift_rank1(&m).unwrap();
        assert!(cert.verified);
        assert_eq!(cert.rank_bound, 1);
        assert_eq!(cert.lift.matrix_rank(), 1);
        // Entries are exactly t^0, t^2, t^1, t^3.
        for (i, j, e) in [(0, 0, 0), (0, 1, 2), (1, 0, 1), (1, 1, 3)] {
            assert_eq!(
                cert.lift.get(i, j).ord().unwrap(),
                rat_int(e),
                "entry ({i},{j})"
            );
            assert_eq!(cert.lift.get(i, j).orc().unwrap(), rat_int(1));
        }
    }

    #[test]
    fn rank1_lift_of_all_zero_matrix_is_all_ones() {
        let m = ints(&[&[0, 0, 0], &[0, 0, 0]]);
        let cert = lift_rank1(&m).unwrap();
        assert!(cert.verified);
        let one = PuiseuxScalar::one(Ramification::new(1));
        assert!(cert.lift.entries().iter().all(|e| *e == one));
    }

    #[test]
    fn rank1_rejects_nonsingular_matrix() {
        let m = ints(&[&[0, 1], &[1, 0]]);
        assert!(matches!(lift_rank1(&m), Err(LiftError::NotRankOne)));
    }

    #[test]
    fn full_lift_is_verified_at_min_dim() {
        let m = ints(&[&[0, 1], &[1, 0]]);
        let cert = lift_full(&m).unwrap();
        assert!(cert.verified);
        assert_eq!(cert.rank_bound, 2);

        let row = ints(&[&[4, 0, 7]]);
        let cert = lift_full(&row).unwrap();
        assert!(cert.verified);
        assert_eq!(cert.rank_bound, 1);
        assert_eq!(cert.lift.matrix_rank(), 1);
    }

    #[test]
    fn bounds_dispatch_rank1() {
        let a = vec![TropScalar::from_int(0), TropScalar::from_int(2)];
        let b = vec![
            TropScalar::from_int(1),
            TropScalar::from_int(0),
            TropScalar::from_int(4),
        ];
        let m = outer_sum(&a, &b);
        let bounds = kapranov_bounds(&m).unwrap();
        assert_eq!(bounds.lower, 1);
        assert_eq!(bounds.upper_value(), 1);
        assert!(bounds.constructive());
        assert!(bounds.certificate().unwrap().verified);
    }

    #[test]
    fn bounds_dispatch_full_rank() {
        let m = ints(&[&[0, 1, 1], &[1, 0, 1], &[1, 1, 0]]);
        let bounds = kapranov_bounds(&m).unwrap();
        assert_eq!(bounds.lower, 3);
        assert_eq!(bounds.upper_value(), 3);
        assert!(bounds.constructive());
    }

    #[test]
    fn bounds_dispatch_rank2_is_theorem_cited() {
        // 3x4 of tropical rank 2: min of two outer sums, checked below.
        let m = ints(&[&[0, 0, 1, 1], &[0, 1, 0, 2], &[1, 0, 3, 0]]);
        let rk = tropical_rank(&m).rank;
        if rk == 2 {
            let bounds = kapranov_bounds(&m).unwrap();
            assert_eq!(bounds.lower, 2);
            assert_eq!(bounds.upper_value(), 2);
            assert!(!bounds.constructive());
        }
    }

    #[test]
    fn outer_term_lift_certifies_barvinok_bound() {
        let m = ints(&[&[0, 2], &[2, 0]]);
        let pairs = vec![
            (
                vec![TropScalar::from_int(0), TropScalar::from_int(2)],
                vec![TropScalar::from_int(0), TropScalar::from_int(2)],
            ),
            (
                vec![TropScalar::from_int(2), TropScalar::from_int(0)],
                vec![TropScalar::from_int(2), TropScalar::from_int(0)],
            ),
        ];
        let mut ctx = GenCtx::new(1, 50);
        let cert = lift_from_outer_terms(&m, &pairs, &mut ctx).unwrap();
        assert!(cert.verified);
        assert_eq!(cert.rank_bound, 2);
    }
}
