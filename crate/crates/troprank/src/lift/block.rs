//! Explicit lift for the mirrored block pattern.
//!
//! The pattern is a nonnegative g x 5 matrix that splits into a special row
//! pair and three columns carrying its six nonzero orders, mirrored against
//! two columns supported on the remaining rows:
//!
//! ```text
//!   v'  u'  r'  0   0
//!   v   u   r   0   0
//!   0   0   0   p_i q_i
//!   ...
//! ```
//!
//! Rank-3 lifts exist regardless of the six values. Three columns are drawn
//! freely; the middle column is their plain sum after tuning one leading
//! coefficient, and the second column is a combination with multipliers of
//! nonnegative order solved exactly from a never-vanishing 2 x 2 step. The
//! construction is internally permuted so the smallest of the six orders
//! sits in the pivot position; the result is permuted back before the final
//! check.

use num_rational::BigRational;
use num_traits::Zero;

use super::{matrix_ram, verify_lift, GenCtx, KapranovCertificate, LiftError, DEFAULT_RETRIES, DEFAULT_SEED};
use crate::liftmat::LiftMatrix;
use crate::poly::rat_int;
use crate::puiseux::PuiseuxScalar;
use crate::semiring::TropMatrix;

/// How a matrix decomposes into the mirrored block shape.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockSplit {
    /// The two rows carrying the six nonzero orders.
    pub row_pair: [usize; 2],
    /// The three columns supported on the row pair.
    pub col_triple: [usize; 3],
    /// The two columns supported on the remaining rows.
    pub col_pair: [usize; 2],
}

/// Detect the mirrored block shape: entries nonnegative, a 2 x 2 zero block
/// under two columns at the special rows, and zeros below the other three
/// columns. Returns the first split in deterministic scan order.
pub fn find_block_split(a: &TropMatrix) -> Option<BlockSplit> {
    let g = a.rows();
    if a.cols() != 5 || g < 2 {
        return None;
    }
    if a
        .entries()
        .iter()
        .any(|e| *e.value() < BigRational::zero())
    {
        return None;
    }
    for i0 in 0..g {
        for i1 in i0 + 1..g {
            for c0 in 0..5usize {
                for c1 in c0 + 1..5 {
                    let pair_zero = [i0, i1]
                        .iter()
                        .all(|&i| [c0, c1].iter().all(|&j| a.get(i, j).value().is_zero()));
                    if !pair_zero {
                        continue;
                    }
                    let triple: Vec<usize> =
                        (0..5).filter(|&j| j != c0 && j != c1).collect();
                    let rest_zero = (0..g).filter(|&i| i != i0 && i != i1).all(|i| {
                        triple.iter().all(|&j| a.get(i, j).value().is_zero())
                    });
                    if rest_zero {
                        return Some(BlockSplit {
                            row_pair: [i0, i1],
                            col_triple: [triple[0], triple[1], triple[2]],
                            col_pair: [c0, c1],
                        });
                    }
                }
            }
        }
    }
    None
}

fn min_rat(a: &BigRational, b: &BigRational) -> BigRational {
    if a <= b {
        a.clone()
    } else {
        b.clone()
    }
}

/// Rank-3 lift of a matrix in the mirrored block shape, rechecking the
/// pattern and verifying the result exactly.
pub fn lift_block_pattern(a: &TropMatrix) -> Result<KapranovCertificate, LiftError> {
    lift_block_pattern_seeded(a, DEFAULT_SEED, DEFAULT_RETRIES)
}

pub fn lift_block_pattern_seeded(
    a: &TropMatrix,
    seed: u64,
    retries: usize,
) -> Result<KapranovCertificate, LiftError> {
    let mut ctx = GenCtx::new(seed, retries);
    let lift = block_lift_ctx(a, &mut ctx)?;
    let mut cert = verify_lift(&lift, a, 3)?;
    debug_assert!(cert.verified, "block construction must verify");
    cert.seed = ctx.seed();
    cert.trace = std::mem::take(&mut ctx.trace);
    Ok(cert)
}

pub(crate) fn block_lift_ctx(
    a: &TropMatrix,
    ctx: &mut GenCtx,
) -> Result<LiftMatrix, LiftError> {
    let split = find_block_split(a).ok_or(LiftError::PatternMismatch)?;
    let g = a.rows();

    // Canonical order: special pair first, then the rest; the three carrying
    // columns first, then the mirrored pair.
    let mut rows: Vec<usize> = split.row_pair.to_vec();
    rows.extend((0..g).filter(|i| !split.row_pair.contains(i)));
    let mut cols: Vec<usize> = split.col_triple.to_vec();
    cols.extend(split.col_pair);

    // Place the smallest of the six orders at the canonical pivot (1,2) and
    // make the second special row weakly decreasing across its first two
    // entries; both swaps keep the block shape.
    let entry = |rows: &[usize], cols: &[usize], i: usize, j: usize| -> BigRational {
        a.get(rows[i], cols[j]).value().clone()
    };
    let (mut best_i, mut best_j) = (0usize, 0usize);
    for i in 0..2 {
        for j in 0..3 {
            if entry(&rows, &cols, i, j) < entry(&rows, &cols, best_i, best_j) {
                (best_i, best_j) = (i, j);
            }
        }
    }
    if best_i == 0 {
        rows.swap(0, 1);
    }
    cols.swap(best_j, 2);
    if entry(&rows, &cols, 1, 0) < entry(&rows, &cols, 1, 1) {
        cols.swap(0, 1);
    }

    let b_val = |i: usize, j: usize| -> BigRational { entry(&rows, &cols, i, j) };
    let vp = b_val(0, 0);
    let up = b_val(0, 1);
    let rp = b_val(0, 2);
    let v = b_val(1, 0);
    let u = b_val(1, 1);
    let r = b_val(1, 2);
    debug_assert!(
        [&vp, &up, &rp, &v, &u].iter().all(|x| **x >= r),
        "pivot entry is the minimum"
    );
    debug_assert!(v >= u);

    let ram = matrix_ram(a)?;
    let mono = |exp: &BigRational, coeff: BigRational| {
        PuiseuxScalar::monomial(ram, exp, coeff)
    };
    let konst = |c: i64| PuiseuxScalar::constant(rat_int(c), ram);

    // Never-vanishing order-0 units: 1 + p4 = 3 tau^min(v',r'), and the
    // divisor p4 - q4 = 3 tau^min(v',r') - 2 tau^r has order exactly r.
    let minvr = min_rat(&vp, &rp);
    let p4 = konst(-1).add(&mono(&minvr, rat_int(3))?);
    let q4 = konst(-1).add(&mono(&r, rat_int(2))?);
    let step = p4.sub(&q4);
    debug_assert_eq!(step.ord(), Some(r.clone()));

    let alpha = min_rat(&vp, &up);
    let rest = g - 2;

    loop {
        ctx.charge("block pattern draws")?;

        // Top entry of the first column: forced correction -3 + e tau^(r'-v')
        // when v' < r' so the middle column's top order lands on r'; any
        // constant besides 0 and -3 otherwise.
        let c_top = if vp < rp {
            mono(&vp, rat_int(-3))?.add(&mono(&rp, ctx.draw())?)
        } else {
            let mut c = ctx.draw();
            while c == rat_int(-3) {
                c = ctx.draw();
            }
            mono(&vp, c)?
        };

        let h = ctx.draw();
        let col0: Vec<PuiseuxScalar> = std::iter::once(c_top.clone())
            .chain(std::iter::once(mono(&v, h)?))
            .chain((0..rest).map(|_| PuiseuxScalar::constant(ctx.draw(), ram)))
            .collect();
        let col3: Vec<PuiseuxScalar> = std::iter::once(PuiseuxScalar::one(ram))
            .chain(std::iter::once(PuiseuxScalar::one(ram)))
            .chain(
                (0..rest)
                    .map(|i| mono(&b_val(2 + i, 3), ctx.draw()))
                    .collect::<Result<Vec<_>, _>>()?,
            )
            .collect();
        let col4: Vec<PuiseuxScalar> = std::iter::once(p4.clone())
            .chain(std::iter::once(q4.clone()))
            .chain(
                (0..rest)
                    .map(|i| mono(&b_val(2 + i, 4), ctx.draw()))
                    .collect::<Result<Vec<_>, _>>()?,
            )
            .collect();

        let col2: Vec<PuiseuxScalar> = (0..g)
            .map(|i| col0[i].add(&col3[i]).add(&col4[i]))
            .collect();

        // Multipliers for the second column, solved so the two special rows
        // come out exactly: m3 clears the mirrored pair, m2 backfills, m1
        // fixes the top order when it is not already cheapest.
        let gamma = mono(&alpha, ctx.draw())?;
        let delta = mono(&u, ctx.draw())?;
        let m3 = gamma.sub(&delta).div(&step)?;
        let m2 = gamma.sub(&m3.mul(&p4));
        let m1 = if up >= vp {
            mono(&up, ctx.draw())?.sub(&gamma).div(&c_top)?
        } else {
            PuiseuxScalar::constant(ctx.draw(), ram)
        };
        if m3.ord().is_some_and(|o| o < BigRational::zero())
            || m2.ord().is_some_and(|o| o < BigRational::zero())
            || m1.ord().is_some_and(|o| o < BigRational::zero())
        {
            continue;
        }

        let col1: Vec<PuiseuxScalar> = (0..g)
            .map(|i| {
                m1.mul(&col0[i])
                    .add(&m2.mul(&col3[i]))
                    .add(&m3.mul(&col4[i]))
            })
            .collect();

        // Entrywise order check against the permuted input; any generic
        // cancellation shows up here and triggers a redraw.
        let canon_cols = [&col0, &col1, &col2, &col3, &col4];
        let mut ok = true;
        'check: for i in 0..g {
            for j in 0..5 {
                if canon_cols[j][i].ord() != Some(b_val(i, j)) {
                    ok = false;
                    break 'check;
                }
            }
        }
        if !ok {
            continue;
        }

        let mut entries = vec![PuiseuxScalar::zero(ram); g * 5];
        for i in 0..g {
            for j in 0..5 {
                entries[rows[i] * 5 + cols[j]] = canon_cols[j][i].clone();
            }
        }
        ctx.note(0, "block pattern lift with three free columns".to_string());
        return Ok(LiftMatrix::new(g, 5, entries)?);
    }
}
