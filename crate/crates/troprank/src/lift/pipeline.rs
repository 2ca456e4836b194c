//! Recursive rank-3 certification for matrices with a five-line side.
//!
//! Each level either bottoms out (three or fewer lines: entrywise monomial
//! lift; four rows inside a tropical hyperplane: the hyperplane base lift)
//! or peels one line off: the remaining lines are lifted recursively and the
//! peeled line is developed as a Puiseux combination of them, which keeps
//! the rank at 3. Levels are normalized first so that a hyperplane through
//! four anchor rows puts two zeros in every column and the remaining rows
//! have minimum zero; the mirrored block shape, which admits no developable
//! line, is recognized after normalization and handled by its dedicated
//! constructor. The final certificate is verified against the original
//! matrix, orders and rank both exact.

use num_rational::BigRational;
use num_traits::One;

use super::block::{block_lift_ctx, find_block_split};
use super::develop::{combination, plan_generator, solve_coefficients_ctx, Line};
use super::hyperplane::{find_hyperplane, hyperplane_lift};
use super::{
    generic_monomial_lift, verify_lift, GenCtx, KapranovCertificate, LiftError,
    DEFAULT_RETRIES, DEFAULT_SEED,
};
use crate::liftmat::LiftMatrix;
use crate::puiseux::PuiseuxScalar;
use crate::rank::tropical_rank;
use crate::semiring::{normalize, LineShifts, TropMatrix, TropScalar};

const MAX_DEPTH: usize = 16;

fn exhausted(a: &TropMatrix) -> LiftError {
    LiftError::PipelineExhausted {
        submatrix: format!("{}", a),
    }
}

/// Shift lines so four anchor rows (a tropical-rank witness, padded) sit in
/// a common hyperplane at offset zero, every column has two zeros among
/// them, and each remaining row has minimum zero. Falls back to plain
/// row-then-column normalization when the anchor rows span no hyperplane.
fn normalize_level(a: &TropMatrix) -> (TropMatrix, LineShifts) {
    let g = a.rows();
    let n = a.cols();
    let all_cols: Vec<usize> = (0..n).collect();

    let witness = tropical_rank(a);
    let mut anchor: Vec<usize> = witness.rows.clone();
    for i in 0..g {
        if anchor.len() >= 4 {
            break;
        }
        if !anchor.contains(&i) {
            anchor.push(i);
        }
    }
    anchor.sort_unstable();

    if anchor.len() == 4 {
        let sub = a.submatrix(&anchor, &all_cols);
        if let Some(hw) = find_hyperplane(&sub) {
            let zero_rows = vec![TropScalar::trop_one(); g];
            let zero_cols = vec![TropScalar::trop_one(); n];

            let mut rows1 = zero_rows.clone();
            for (k, &i) in anchor.iter().enumerate() {
                rows1[i] = -&hw.offsets[k];
            }
            let b1 = a.shift_lines(&LineShifts {
                rows: rows1.clone(),
                cols: zero_cols.clone(),
            });

            let cols2: Vec<TropScalar> = (0..n)
                .map(|j| {
                    anchor
                        .iter()
                        .map(|&i| b1.get(i, j))
                        .min()
                        .expect("anchor nonempty")
                        .clone()
                })
                .collect();
            let b2 = b1.shift_lines(&LineShifts {
                rows: zero_rows.clone(),
                cols: cols2.clone(),
            });

            let mut rows3 = zero_rows;
            for i in 0..g {
                if !anchor.contains(&i) {
                    rows3[i] = b2.row(i).iter().min().expect("row nonempty").clone();
                }
            }
            let b3 = b2.shift_lines(&LineShifts {
                rows: rows3.clone(),
                cols: zero_cols,
            });

            let total = LineShifts {
                rows: rows1
                    .iter()
                    .zip(&rows3)
                    .map(|(x, y)| x + y)
                    .collect(),
                cols: cols2,
            };
            debug_assert_eq!(a.shift_lines(&total), b3);
            return (b3, total);
        }
    }

    let all_rows: Vec<usize> = (0..g).collect();
    normalize(a, &all_rows, &all_cols).expect("indices in range")
}

/// Undo the level shifts on a lift by monomial line scalings; the rank is
/// untouched and orders move back exactly.
fn denormalize(mut l: LiftMatrix, shifts: &LineShifts) -> Result<LiftMatrix, LiftError> {
    let one = BigRational::one();
    for i in 0..l.rows() {
        l.scale_row(i, shifts.rows[i].value(), &one)?;
    }
    for j in 0..l.cols() {
        l.scale_col(j, shifts.cols[j].value(), &one)?;
    }
    Ok(l)
}

/// Remainder-lift cache entry: not attempted, failed, or lifted.
type Memo = Option<Option<LiftMatrix>>;

fn remainder_lift<'m>(
    memo: &'m mut Memo,
    rem: &TropMatrix,
    ctx: &mut GenCtx,
    depth: usize,
) -> Result<&'m Option<LiftMatrix>, LiftError> {
    if memo.is_none() {
        *memo = Some(match certify3(rem, ctx, depth + 1) {
            Ok(l) => Some(l),
            Err(e @ LiftError::BudgetExhausted { .. }) => return Err(e),
            Err(_) => None,
        });
    }
    Ok(memo.as_ref().expect("just filled"))
}

/// Produce a rank-at-most-3 lift of `a` whose entry orders match exactly.
pub(crate) fn certify3(
    a: &TropMatrix,
    ctx: &mut GenCtx,
    depth: usize,
) -> Result<LiftMatrix, LiftError> {
    if depth > MAX_DEPTH {
        return Err(exhausted(a));
    }
    let g = a.rows();
    let n = a.cols();

    if g.min(n) <= 3 {
        ctx.note(depth, format!("monomial floor on {}x{}", g, n));
        return generic_monomial_lift(a, ctx);
    }
    if g == 4 {
        if let Some(w) = find_hyperplane(a) {
            ctx.note(depth, "hyperplane floor on four rows");
            return hyperplane_lift(a, &w, ctx);
        }
    } else if n == 4 {
        ctx.note(depth, format!("transpose route on {}x4", g));
        return Ok(certify3(&a.transpose(), ctx, depth + 1)?.transpose());
    }

    let (b, shifts) = normalize_level(a);

    if find_block_split(&b).is_some() {
        ctx.note(depth, "mirrored block pattern");
        let lift_b = block_lift_ctx(&b, ctx)?;
        return denormalize(lift_b, &shifts);
    }

    let plans = plan_generator(&b);
    let mut memo_rows: Vec<Memo> = vec![None; g];
    let mut memo_cols: Vec<Memo> = vec![None; n];

    for plan in &plans {
        match plan.target {
            Line::Row(t) => {
                let rem = b.drop_row(t);
                let rem_lift =
                    match remainder_lift(&mut memo_rows[t], &rem, ctx, depth)? {
                        Some(l) => l.clone(),
                        None => continue,
                    };
                let base_rows: Vec<Vec<PuiseuxScalar>> = plan
                    .base
                    .iter()
                    .map(|&i| {
                        let ri = if i < t { i } else { i - 1 };
                        rem_lift.row(ri).to_vec()
                    })
                    .collect();
                let f_base = LiftMatrix::from_rows(base_rows)?;
                let target = b.row(t).to_vec();
                if let Some(lambda) =
                    solve_coefficients_ctx(&f_base, &target, plan, ctx)?
                {
                    let combo = combination(&lambda, &f_base);
                    let mut rows_out: Vec<Vec<PuiseuxScalar>> = Vec::with_capacity(g);
                    for i in 0..g {
                        if i == t {
                            rows_out.push(combo.clone());
                        } else {
                            let ri = if i < t { i } else { i - 1 };
                            rows_out.push(rem_lift.row(ri).to_vec());
                        }
                    }
                    let lift_b = LiftMatrix::from_rows(rows_out)?;
                    ctx.note(depth, format!("{}", plan));
                    return denormalize(lift_b, &shifts);
                }
            }
            Line::Col(c) => {
                let rem = b.drop_col(c);
                let rem_lift =
                    match remainder_lift(&mut memo_cols[c], &rem, ctx, depth)? {
                        Some(l) => l.clone(),
                        None => continue,
                    };
                let base_cols: Vec<Vec<PuiseuxScalar>> = plan
                    .base
                    .iter()
                    .map(|&j| {
                        let cj = if j < c { j } else { j - 1 };
                        (0..g).map(|i| rem_lift.get(i, cj).clone()).collect()
                    })
                    .collect();
                let f_base = LiftMatrix::from_rows(base_cols)?;
                let target = b.col(c);
                if let Some(lambda) =
                    solve_coefficients_ctx(&f_base, &target, plan, ctx)?
                {
                    let combo = combination(&lambda, &f_base);
                    let mut entries: Vec<PuiseuxScalar> = Vec::with_capacity(g * n);
                    for i in 0..g {
                        for j in 0..n {
                            if j == c {
                                entries.push(combo[i].clone());
                            } else {
                                let cj = if j < c { j } else { j - 1 };
                                entries.push(rem_lift.get(i, cj).clone());
                            }
                        }
                    }
                    let lift_b = LiftMatrix::new(g, n, entries)?;
                    ctx.note(depth, format!("{}", plan));
                    return denormalize(lift_b, &shifts);
                }
            }
        }
    }
    Err(exhausted(&b))
}

/// Certified Kapranov-rank-3 lift for a tropical-rank-3 matrix with five
/// columns (or five rows, handled through the transpose). The returned
/// certificate is verified against the input matrix itself.
pub fn kapranov_rank3_5col(a: &TropMatrix) -> Result<KapranovCertificate, LiftError> {
    kapranov_rank3_5col_seeded(a, DEFAULT_SEED, DEFAULT_RETRIES)
}

pub fn kapranov_rank3_5col_seeded(
    a: &TropMatrix,
    seed: u64,
    retries: usize,
) -> Result<KapranovCertificate, LiftError> {
    let transposed = a.cols() != 5;
    if transposed && a.rows() != 5 {
        return Err(LiftError::PipelineShape {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let rk = tropical_rank(a).rank;
    if rk != 3 {
        return Err(LiftError::RankPrecondition {
            found: rk,
            required: 3,
        });
    }
    let work = if transposed { a.transpose() } else { a.clone() };
    let mut ctx = GenCtx::new(seed, retries);
    let lift_w = certify3(&work, &mut ctx, 0)?;
    let lift = if transposed { lift_w.transpose() } else { lift_w };
    let mut cert = verify_lift(&lift, a, 3)?;
    cert.seed = ctx.seed();
    cert.trace = std::mem::take(&mut ctx.trace);
    if !cert.verified {
        return Err(exhausted(a));
    }
    Ok(cert)
}
