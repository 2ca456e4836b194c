//! Tropical hyperplane detection and the (k+1)-row base-case lift.
//!
//! A matrix with k+1 rows whose tropical rank is at most k has all columns
//! inside one tropical hyperplane: offsets a_1..a_{k+1} such that every
//! column attains min_i(a_i + M_ij) at least twice. The base-case lift puts
//! one exact linear relation sum_i alpha_i F_ij = 0 with ord(alpha_i) = a_i
//! on every column, which caps the classical rank at k.

use num_rational::BigRational;

use super::{verify_lift, GenCtx, KapranovCertificate, LiftError, TraceStep};
use super::{DEFAULT_RETRIES, DEFAULT_SEED};
use crate::diffcon::DiffConstraints;
use crate::liftmat::LiftMatrix;
use crate::puiseux::{PuiseuxScalar, Ramification};
use crate::rank::tropical_rank;
use crate::semiring::{TropMatrix, TropScalar};

/// Offsets plus, per column, the indices where the shifted minimum is
/// attained (always two or more).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HyperplaneWitness {
    pub offsets: Vec<TropScalar>,
    pub tight: Vec<Vec<usize>>,
}

impl HyperplaneWitness {
    /// Exact recheck of the witness against a matrix.
    pub fn check(&self, m: &TropMatrix) -> bool {
        if self.offsets.len() != m.rows() || self.tight.len() != m.cols() {
            return false;
        }
        let computed = tight_sets(m, &self.offsets);
        computed
            .iter()
            .zip(&self.tight)
            .all(|(a, b)| a == b && a.len() >= 2)
    }
}

fn tight_sets(m: &TropMatrix, offsets: &[TropScalar]) -> Vec<Vec<usize>> {
    (0..m.cols())
        .map(|j| {
            let vals: Vec<BigRational> = (0..m.rows())
                .map(|i| offsets[i].value() + m.get(i, j).value())
                .collect();
            let min = vals.iter().min().expect("nonempty column").clone();
            (0..m.rows()).filter(|&i| vals[i] == min).collect()
        })
        .collect()
}

fn witness_from_offsets(m: &TropMatrix, offsets: Vec<TropScalar>) -> Option<HyperplaneWitness> {
    let tight = tight_sets(m, &offsets);
    if tight.iter().all(|s| s.len() >= 2) {
        Some(HyperplaneWitness { offsets, tight })
    } else {
        None
    }
}

/// Push the constraints forcing rows (p, q) to be a tight pair of column j:
/// a_p + M_pj = a_q + M_qj and a_p + M_pj <= a_i + M_ij for every i.
fn push_column_pair(sys: &mut DiffConstraints, m: &TropMatrix, j: usize, p: usize, q: usize) {
    sys.add_eq(p, q, m.get(q, j).value() - m.get(p, j).value());
    for i in 0..m.rows() {
        if i != p {
            sys.add_le(p, i, m.get(i, j).value() - m.get(p, j).value());
        }
    }
}

fn pair_dfs(sys: &mut DiffConstraints, m: &TropMatrix, j: usize) -> Option<Vec<BigRational>> {
    if j == m.cols() {
        return sys.solve();
    }
    for p in 0..m.rows() {
        for q in p + 1..m.rows() {
            let cp = sys.checkpoint();
            push_column_pair(sys, m, j, p, q);
            // Prune infeasible prefixes before descending.
            if sys.is_feasible() {
                if let Some(sol) = pair_dfs(sys, m, j + 1) {
                    return Some(sol);
                }
            }
            sys.rollback(cp);
        }
    }
    None
}

/// Offsets putting every column of `m` inside one tropical hyperplane, if
/// any exist. Zero offsets are tried first (the normalized fast path), then
/// per-column tight-pair patterns are searched with exact difference
/// constraints. Failure is a value: it certifies no such offsets exist.
pub fn find_hyperplane(m: &TropMatrix) -> Option<HyperplaneWitness> {
    let zeros = vec![TropScalar::trop_one(); m.rows()];
    if let Some(w) = witness_from_offsets(m, zeros) {
        return Some(w);
    }
    let mut sys = DiffConstraints::new(m.rows());
    let sol = pair_dfs(&mut sys, m, 0)?;
    let offsets: Vec<TropScalar> = sol.into_iter().map(TropScalar::new).collect();
    witness_from_offsets(m, offsets)
}

/// Build the base-case lift rows for `m` under witness `w`. Every column
/// satisfies sum_i alpha_i F_ij = 0 where alpha_i = g_i t^(a_i), so the rank
/// is at most rows - 1 by construction; only the solved entry's order needs
/// checking, and a failed check redraws that column's generic constants.
pub(crate) fn hyperplane_lift(
    m: &TropMatrix,
    w: &HyperplaneWitness,
    ctx: &mut GenCtx,
) -> Result<LiftMatrix, LiftError> {
    let ram = Ramification::clearing(
        m.entries()
            .iter()
            .map(|e| e.value())
            .chain(w.offsets.iter().map(|o| o.value())),
    )?;
    let alpha: Vec<PuiseuxScalar> = w
        .offsets
        .iter()
        .map(|a| PuiseuxScalar::monomial(ram, a.value(), ctx.draw()))
        .collect::<Result<_, _>>()?;

    let rows = m.rows();
    let mut columns: Vec<Vec<PuiseuxScalar>> = Vec::with_capacity(m.cols());
    for j in 0..m.cols() {
        let q = w.tight[j][0];
        loop {
            ctx.charge("hyperplane column constants")?;
            let mut col: Vec<PuiseuxScalar> = Vec::with_capacity(rows);
            let mut rhs = PuiseuxScalar::zero(ram);
            for i in 0..rows {
                if i == q {
                    col.push(PuiseuxScalar::zero(ram));
                    continue;
                }
                let f = PuiseuxScalar::monomial(ram, m.get(i, j).value(), ctx.draw())?;
                rhs = rhs.add(&alpha[i].mul(&f));
                col.push(f);
            }
            let solved = rhs.neg().div(&alpha[q])?;
            if solved.ord().as_ref() == Some(m.get(q, j).value()) {
                col[q] = solved;
                columns.push(col);
                break;
            }
        }
    }

    let entry_rows: Vec<Vec<PuiseuxScalar>> = (0..rows)
        .map(|i| columns.iter().map(|c| c[i].clone()).collect())
        .collect();
    Ok(LiftMatrix::from_rows(entry_rows)?)
}

/// Public base case: requires tropical rank exactly rows - 1 and a valid
/// witness; returns a verified certificate at that rank.
pub fn lift_hyperplane_base(
    m: &TropMatrix,
    w: &HyperplaneWitness,
) -> Result<KapranovCertificate, LiftError> {
    lift_hyperplane_base_seeded(m, w, DEFAULT_SEED, DEFAULT_RETRIES)
}

pub fn lift_hyperplane_base_seeded(
    m: &TropMatrix,
    w: &HyperplaneWitness,
    seed: u64,
    retries: usize,
) -> Result<KapranovCertificate, LiftError> {
    if !w.check(m) {
        return Err(LiftError::WitnessMismatch);
    }
    let k = m.rows() - 1;
    let found = tropical_rank(m).rank;
    if found != k {
        return Err(LiftError::RankPrecondition { found, required: k });
    }
    let mut ctx = GenCtx::new(seed, retries);
    let lift = hyperplane_lift(m, w, &mut ctx)?;
    let mut cert = verify_lift(&lift, m, k)?;
    debug_assert!(cert.verified, "column relations cap the rank at k");
    cert.seed = seed;
    cert.trace.push(TraceStep {
        depth: 0,
        action: format!(
            "hyperplane base at rank {} (offsets {})",
            k,
            w.offsets
                .iter()
                .map(|o| o.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        ),
    });
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat_int;
    use crate::semiring::outer_sum;

    fn ints(rows: &[&[i64]]) -> TropMatrix {
        TropMatrix::from_ints(rows)
    }

    #[test]
    fn zero_offsets_fast_path() {
        // Twin zeros in every column already.
        let m = ints(&[&[0, 0, 1], &[0, 2, 0], &[3, 0, 0]]);
        let w = find_hyperplane(&m).unwrap();
        assert!(w.offsets.iter().all(|o| o.value() == &rat_int(0)));
        assert!(w.check(&m));
    }

    #[test]
    fn nonsingular_two_by_two_has_no_hyperplane() {
        let m = ints(&[&[0, 1], &[1, 0]]);
        assert!(find_hyperplane(&m).is_none());
    }

    #[test]
    fn nonsingular_circulant_has_no_hyperplane() {
        let m = ints(&[&[0, 1, 1], &[1, 0, 1], &[1, 1, 0]]);
        assert!(find_hyperplane(&m).is_none());
    }

    #[test]
    fn rank_one_matrix_has_a_hyperplane() {
        let a = vec![TropScalar::from_int(0), TropScalar::from_int(3)];
        let b = vec![
            TropScalar::from_int(1),
            TropScalar::from_int(0),
            TropScalar::from_int(2),
        ];
        let m = outer_sum(&a, &b);
        let w = find_hyperplane(&m).unwrap();
        assert!(w.check(&m));
    }

    #[test]
    fn searched_offsets_satisfy_the_witness_contract() {
        // No column has twin zeros, but offsets exist (rows 2 and 3 agree).
        let m = ints(&[
            &[0, 1, 1, 5, 5],
            &[1, 0, 1, 5, 5],
            &[1, 1, 0, 5, 5],
            &[1, 1, 0, 5, 5],
        ]);
        let w = find_hyperplane(&m).unwrap();
        assert!(w.check(&m));
        for t in &w.tight {
            assert!(t.len() >= 2);
        }
    }

    #[test]
    fn base_case_lift_is_verified_at_rank_three() {
        let m = ints(&[
            &[0, 1, 1, 5, 5],
            &[1, 0, 1, 5, 5],
            &[1, 1, 0, 5, 5],
            &[1, 1, 0, 5, 5],
        ]);
        assert_eq!(tropical_rank(&m).rank, 3);
        let w = find_hyperplane(&m).unwrap();
        let cert = lift_hyperplane_base(&m, &w).unwrap();
        assert!(cert.verified);
        assert_eq!(cert.rank_bound, 3);
        assert_eq!(cert.lift.matrix_rank(), 3);
        assert_eq!(cert.lift.ord_matrix(), m);
    }

    #[test]
    fn degenerate_two_row_case_gives_rank_one() {
        let a = vec![TropScalar::from_int(0), TropScalar::from_int(2)];
        let b = vec![
            TropScalar::from_int(0),
            TropScalar::from_int(1),
            TropScalar::from_int(3),
        ];
        let m = outer_sum(&a, &b);
        let w = find_hyperplane(&m).unwrap();
        let cert = lift_hyperplane_base(&m, &w).unwrap();
        assert!(cert.verified);
        assert_eq!(cert.rank_bound, 1);
    }

    #[test]
    fn rank_precondition_is_enforced() {
        // Rank 1 on three rows: rows - 1 = 2 does not match.
        let a = vec![
            TropScalar::from_int(0),
            TropScalar::from_int(1),
            TropScalar::from_int(2),
        ];
        let b = vec![TropScalar::from_int(0), TropScalar::from_int(1)];
        let m = outer_sum(&a, &b);
        let w = find_hyperplane(&m).unwrap();
        assert!(matches!(
            lift_hyperplane_base(&m, &w),
            Err(LiftError::RankPrecondition {
                found: 1,
                required: 2
            })
        ));
    }

    #[test]
    fn foreign_witness_is_rejected() {
        let m = ints(&[&[0, 0], &[0, 1]]);
        let w = HyperplaneWitness {
            offsets: vec![TropScalar::from_int(0), TropScalar::from_int(7)],
            tight: vec![vec![0, 1], vec![0, 1]],
        };
        assert!(matches!(
            lift_hyperplane_base(&m, &w),
            Err(LiftError::WitnessMismatch)
        ));
    }
}
